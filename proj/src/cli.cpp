#include "pmet/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pmet/law_checks.hpp"
#include "pmet/oracle.hpp"
#include "pmet/sampling.hpp"
#include "pmet/trace.hpp"

namespace pmet {

namespace {

using nlohmann::json;

json params_json(const LiftParams& p) {
    json j;
    j["eval"] = p.eval == EvalKind::Max ? "max" : "convex";
    j["c"] = p.c;
    j["c1"] = p.c1;
    j["c2"] = p.c2;
    if (std::isinf(p.top))
        j["top"] = "inf";
    else
        j["top"] = p.top;
    return j;
}

json check_report_json(const std::string& group, const CheckReport& report) {
    json out = json::array();
    for (const auto& item : report.items) {
        json entry;
        entry["name"] = group + "/" + item.name;
        entry["passed"] = item.passed;
        if (!item.witness.empty()) entry["witness"] = item.witness;
        out.push_back(std::move(entry));
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> select_pairs(
    const std::vector<std::string>& states, const RunConfig& config) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    if (config.pairs.empty()) {
        for (std::size_t i = 0; i < states.size(); ++i)
            for (std::size_t j = i + 1; j < states.size(); ++j) out.push_back({i, j});
        return out;
    }
    auto find = [&](const std::string& name) -> std::size_t {
        for (std::size_t i = 0; i < states.size(); ++i)
            if (states[i] == name) return i;
        throw ParseError("unknown state '" + name + "' in --pairs");
    };
    for (const auto& [x, y] : config.pairs) out.push_back({find(x), find(y)});
    return out;
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    std::ostringstream out;
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << std::left << std::setw(static_cast<int>(width[c]) + 2) << row[c];
        out << "\n";
    };
    emit(header);
    for (const auto& row : rows) emit(row);
    return out.str();
}

std::string format_value(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

struct ModeOutput {
    json results = json::array();
    json checks = json::array();
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    int exit_code = 0;
};

LiftParams effective_params(const RunConfig& config, const Automaton* doc) {
    LiftParams params = config.params;
    const bool is_pa = doc && std::holds_alternative<PaCoalgebra>(*doc);
    if (!config.eval_given) params.eval = is_pa ? EvalKind::Convex : EvalKind::Max;
    if (config.tv_preset) {
        if (!doc || !is_pa)
            throw std::invalid_argument("--tv-preset applies to probabilistic automata");
        params.eval = EvalKind::Convex;
        params.top = kInf;
        params.c1 = 0.5;
        params.c2 = static_cast<double>(std::get<PaCoalgebra>(*doc).alphabet_size());
    }
    if (doc && !is_pa && params.eval == EvalKind::Convex)
        throw std::invalid_argument("nfa distances use the max convention");
    return params;
}

// --- automaton modes --------------------------------------------------------

void run_trace(const RunConfig& config, const Automaton& doc, const LiftParams& params,
               ModeOutput& out) {
    if (std::holds_alternative<NfaCoalgebra>(doc)) {
        const auto& nfa = std::get<NfaCoalgebra>(doc);
        const auto pairs = select_pairs(nfa.states, config);
        const NfaTraceResult trace = nfa_trace_distance(nfa, params);
        out.header = {"x", "y", "value", "depth", "converged"};
        for (const auto& [x, y] : pairs) {
            const double v = trace.value(x, y);
            json entry;
            entry["x"] = nfa.states[x];
            entry["y"] = nfa.states[y];
            entry["value"] = v;
            entry["depth"] = trace.table.depth;
            entry["error_bound"] = trace.table.error_bound;
            entry["converged"] = trace.table.converged;
            out.results.push_back(std::move(entry));
            out.rows.push_back({nfa.states[x], nfa.states[y], format_value(v),
                                std::to_string(trace.table.depth),
                                trace.table.converged ? "yes" : "no"});
        }
    } else {
        const auto& pa = std::get<PaCoalgebra>(doc);
        const auto pairs = select_pairs(pa.states, config);
        std::optional<double> epsilon;
        if (params.c2 < 1.0) epsilon = config.epsilon;
        out.header = {"x", "y", "value", "error_bound", "depth", "converged"};
        for (const auto& [x, y] : pairs) {
            const PaTraceValue v = pa_trace_distance(pa, params, x, y, epsilon, config.max_depth);
            json entry;
            entry["x"] = pa.states[x];
            entry["y"] = pa.states[y];
            entry["value"] = v.value;
            entry["error_bound"] = std::isinf(v.error_bound) ? json("uncertified") : json(v.error_bound);
            entry["depth"] = v.depth;
            entry["converged"] = v.converged;
            out.results.push_back(std::move(entry));
            out.rows.push_back({pa.states[x], pa.states[y], format_value(v.value),
                                std::isinf(v.error_bound) ? "uncertified" : format_value(v.error_bound),
                                std::to_string(v.depth), v.converged ? "yes" : "no"});
        }
    }
}

void run_branching(const RunConfig& config, const Automaton& doc, const LiftParams& params,
                   ModeOutput& out) {
    DistTable table;
    std::vector<std::string> states;
    if (std::holds_alternative<NfaCoalgebra>(doc)) {
        const auto& nfa = std::get<NfaCoalgebra>(doc);
        states = nfa.states;
        table = nfa_branching_distance(nfa, params, config.epsilon);
    } else {
        const auto& pa = std::get<PaCoalgebra>(doc);
        states = pa.states;
        table = pa_branching_distance(pa, params, config.epsilon);
    }
    const auto pairs = select_pairs(states, config);
    out.header = {"x", "y", "value", "error_bound", "depth", "converged"};
    for (const auto& [x, y] : pairs) {
        json entry;
        entry["x"] = states[x];
        entry["y"] = states[y];
        entry["value"] = table.at(x, y);
        entry["error_bound"] = table.error_bound;
        entry["depth"] = table.depth;
        entry["converged"] = table.converged;
        out.results.push_back(std::move(entry));
        out.rows.push_back({states[x], states[y], format_value(table.at(x, y)),
                            format_value(table.error_bound), std::to_string(table.depth),
                            table.converged ? "yes" : "no"});
    }
}

void run_compare(const RunConfig& config, const Automaton& doc, const LiftParams& params,
                 ModeOutput& out) {
    BranchTraceReport report;
    std::vector<std::string> states;
    if (std::holds_alternative<NfaCoalgebra>(doc)) {
        const auto& nfa = std::get<NfaCoalgebra>(doc);
        states = nfa.states;
        report = compare_branching_trace(nfa, params, config.epsilon);
    } else {
        const auto& pa = std::get<PaCoalgebra>(doc);
        states = pa.states;
        report = compare_branching_trace(pa, params, config.epsilon);
    }
    const auto selected = select_pairs(states, config);
    auto wanted = [&](std::size_t x, std::size_t y) {
        if (config.pairs.empty()) return true;
        for (const auto& [a, b] : selected)
            if ((a == x && b == y) || (a == y && b == x)) return true;
        return false;
    };
    out.header = {"x", "y", "branching", "trace", "violation"};
    for (const auto& entry : report.pairs) {
        if (!wanted(entry.x, entry.y)) continue;
        json row;
        row["x"] = states[entry.x];
        row["y"] = states[entry.y];
        row["branching"] = entry.branching;
        row["trace"] = entry.trace;
        row["violation"] = entry.violation;
        out.results.push_back(std::move(row));
        out.rows.push_back({states[entry.x], states[entry.y], format_value(entry.branching),
                            format_value(entry.trace), entry.violation ? "VIOLATION" : "ok"});
    }
    if (report.any_violation) out.exit_code = 1;
}

void run_oracle_compare(const RunConfig& config, const Automaton& doc, const LiftParams& params,
                        ModeOutput& out) {
    out.header = {"x", "y", "engine", "oracle", "within_bounds"};
    if (std::holds_alternative<NfaCoalgebra>(doc)) {
        const auto& nfa = std::get<NfaCoalgebra>(doc);
        const auto pairs = select_pairs(nfa.states, config);
        const NfaTraceResult trace = nfa_trace_distance(nfa, params);
        double beyond_bound = 1.0;  // c^(bound+1)
        for (int i = 0; i <= config.max_depth; ++i) beyond_bound *= params.c;
        std::vector<WordSemantics> sems;
        for (std::size_t x = 0; x < nfa.state_count(); ++x)
            sems.push_back(nfa_language(nfa, pow_unit(x), config.max_depth));
        for (const auto& [x, y] : pairs) {
            const double engine = trace.value(x, y);
            const NfaClosedForm oracle = closed_form_nfa_distance(sems[x], sems[y], params.c);
            const bool ok = oracle.exact ? engine == oracle.value : engine <= beyond_bound + 1e-12;
            json entry;
            entry["x"] = nfa.states[x];
            entry["y"] = nfa.states[y];
            entry["engine"] = engine;
            entry["oracle"] = oracle.value;
            entry["oracle_exact"] = oracle.exact;
            entry["within_bounds"] = ok;
            out.results.push_back(std::move(entry));
            out.rows.push_back({nfa.states[x], nfa.states[y], format_value(engine),
                                format_value(oracle.value), ok ? "yes" : "NO"});
            if (!ok) out.exit_code = 1;
        }
    } else {
        const auto& pa = std::get<PaCoalgebra>(doc);
        const auto pairs = select_pairs(pa.states, config);
        std::optional<double> epsilon;
        if (params.c2 < 1.0) epsilon = config.epsilon;
        std::vector<WordSemantics> sems;
        for (std::size_t x = 0; x < pa.state_count(); ++x)
            sems.push_back(pa_word_weights(pa, dist_unit(x), config.max_depth));
        for (const auto& [x, y] : pairs) {
            const PaTraceValue engine = pa_trace_distance(pa, params, x, y, epsilon, config.max_depth);
            const PaClosedForm oracle = closed_form_pa_distance(sems[x], sems[y], params.c1,
                                                                params.c2, pa.alphabet_size());
            // a converged engine run covered by the oracle bound must agree tightly
            const double tail = engine.converged && engine.depth <= config.max_depth + 1
                                    ? 0.0
                                    : oracle.tail_bound;
            const bool ok = std::abs(engine.value - oracle.value) <= engine.error_bound + tail + 1e-9;
            json entry;
            entry["x"] = pa.states[x];
            entry["y"] = pa.states[y];
            entry["engine"] = engine.value;
            entry["oracle"] = oracle.value;
            entry["within_bounds"] = ok;
            out.results.push_back(std::move(entry));
            out.rows.push_back({pa.states[x], pa.states[y], format_value(engine.value),
                                format_value(oracle.value), ok ? "yes" : "NO"});
            if (!ok) out.exit_code = 1;
        }
    }
}

// --- self-contained check modes ----------------------------------------------

void run_lawcheck(const RunConfig& config, ModeOutput& out) {
    Sampler rng(config.seed);
    const PseudometricSpace space = random_space(rng, 5, 1.0);
    const int instances = 500;

    LiftParams nfa_params;
    nfa_params.eval = EvalKind::Max;
    nfa_params.c = 0.5;
    LiftParams pa_params;
    pa_params.eval = EvalKind::Convex;

    const struct {
        const char* name;
        CheckReport report;
    } groups[] = {
        {"monad-powfin", check_monad_metric_laws(MonadId::PowFin, space, instances, config.seed + 1)},
        {"monad-dist", check_monad_metric_laws(MonadId::Dist, space, instances, config.seed + 2)},
        {"emlaw-nfa",
         check_em_law_nonexpansive(SystemId::Nfa, space, nfa_params, instances, config.seed + 3)},
        {"emlaw-pa",
         check_em_law_nonexpansive(SystemId::Pa, space, pa_params, instances, config.seed + 4)},
    };
    out.header = {"check", "passed", "witness"};
    for (const auto& group : groups) {
        for (const auto& item : check_report_json(group.name, group.report)) out.checks.push_back(item);
        for (const auto& item : group.report.items)
            out.rows.push_back({std::string(group.name) + "/" + item.name,
                                item.passed ? "yes" : "NO", item.witness});
        if (!group.report.all_passed()) out.exit_code = 1;
    }
}

void run_duality(const RunConfig& config, ModeOutput& out) {
    Sampler rng(config.seed);
    const int instances = 500;
    double max_diff = 0.0;
    for (int it = 0; it < instances; ++it) {
        const std::size_t n = 2 + rng.index(7);
        const PseudometricSpace space = random_space(rng, n, 1.0);
        const FinDist p1 = random_dist(rng, n, static_cast<int>(n));
        const FinDist p2 = random_dist(rng, n, static_cast<int>(n));
        const double w = wasserstein_dist_lift(space, p1, p2);
        const double k = kantorovich_dist_lift(space, p1, p2);
        max_diff = std::max(max_diff, std::abs(w - k));
    }
    const bool passed = max_diff <= 1e-6;
    json entry;
    entry["name"] = "kantorovich-rubinstein-duality";
    entry["instances"] = instances;
    entry["max_abs_diff"] = max_diff;
    entry["passed"] = passed;
    out.checks.push_back(std::move(entry));
    out.header = {"check", "instances", "max |K - W|", "passed"};
    out.rows.push_back({"kantorovich-rubinstein-duality", std::to_string(instances),
                        format_value(max_diff), passed ? "yes" : "NO"});
    if (!passed) out.exit_code = 1;
}

void run_wellbehaved(const RunConfig& config, ModeOutput& out) {
    const struct {
        const char* name;
        FunctorId id;
    } functors[] = {
        {"powfin-max", FunctorId::PowFinMax},   {"dist-expectation", FunctorId::DistExpectation},
        {"input-max", FunctorId::InputMax},     {"input-sum", FunctorId::InputSum},
        {"product-max", FunctorId::ProductMax}, {"product-convex", FunctorId::ProductConvex},
    };
    out.header = {"check", "passed", "witness"};
    std::uint64_t sub_seed = config.seed;
    for (const auto& functor : functors) {
        const CheckReport report = check_well_behaved(functor.id, 1000, ++sub_seed);
        for (const auto& item : check_report_json(functor.name, report)) out.checks.push_back(item);
        for (const auto& item : report.items)
            out.rows.push_back({std::string(functor.name) + "/" + item.name,
                                item.passed ? "yes" : "NO", item.witness});
        if (!report.all_passed()) out.exit_code = 1;
    }
}

const char* mode_name(RunMode mode) {
    switch (mode) {
        case RunMode::TraceDist: return "trace-dist";
        case RunMode::BranchingDist: return "branching-dist";
        case RunMode::Compare: return "compare";
        case RunMode::LawCheck: return "lawcheck";
        case RunMode::Duality: return "duality";
        case RunMode::WellBehaved: return "wellbehaved";
        case RunMode::OracleCompare: return "oracle-compare";
    }
    return "?";
}

}  // namespace

RunResult run(const RunConfig& config, const std::vector<Automaton>& documents) {
    const bool needs_document = config.mode == RunMode::TraceDist ||
                                config.mode == RunMode::BranchingDist ||
                                config.mode == RunMode::Compare ||
                                config.mode == RunMode::OracleCompare;
    if (needs_document && documents.empty())
        throw std::invalid_argument("this mode needs an automaton document");
    if (!needs_document && !documents.empty())
        throw std::invalid_argument("check modes take no automaton documents");
    if (documents.size() > 2) throw std::invalid_argument("at most two documents are supported");

    std::optional<Automaton> merged;
    if (documents.size() == 1) {
        merged = documents[0];
    } else if (documents.size() == 2) {
        if (documents[0].index() != documents[1].index())
            throw std::invalid_argument("cannot mix nfa and pa documents");
        if (std::holds_alternative<NfaCoalgebra>(documents[0]))
            merged = disjoint_union(std::get<NfaCoalgebra>(documents[0]),
                                    std::get<NfaCoalgebra>(documents[1]));
        else
            merged = disjoint_union(std::get<PaCoalgebra>(documents[0]),
                                    std::get<PaCoalgebra>(documents[1]));
    }

    const LiftParams params = effective_params(config, merged ? &*merged : nullptr);
    params.validate();

    ModeOutput out;
    switch (config.mode) {
        case RunMode::TraceDist: run_trace(config, *merged, params, out); break;
        case RunMode::BranchingDist: run_branching(config, *merged, params, out); break;
        case RunMode::Compare: run_compare(config, *merged, params, out); break;
        case RunMode::OracleCompare: run_oracle_compare(config, *merged, params, out); break;
        case RunMode::LawCheck: run_lawcheck(config, out); break;
        case RunMode::Duality: run_duality(config, out); break;
        case RunMode::WellBehaved: run_wellbehaved(config, out); break;
    }

    json report;
    report["mode"] = mode_name(config.mode);
    report["seed"] = config.seed;
    report["params"] = params_json(params);
    report["epsilon"] = config.epsilon;
    report["max_depth"] = config.max_depth;
    report["results"] = std::move(out.results);
    report["checks"] = std::move(out.checks);
    report["exit"] = out.exit_code;

    RunResult result;
    result.exit_code = out.exit_code;
    result.report_json = report.dump(2) + "\n";
    result.table_text = render_table(out.header, out.rows);
    return result;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"behavioral (branching) and trace pseudometrics for nondeterministic and "
                 "probabilistic automata"};
    app.require_subcommand(1);

    RunConfig config;
    std::vector<std::string> files;
    std::string eval_name, top_name = "1", pairs_text, format_name = "table", out_path;

    const struct {
        RunMode mode;
        const char* name;
        const char* help;
        bool takes_files;
    } modes[] = {
        {RunMode::TraceDist, "trace-dist", "trace distance between states", true},
        {RunMode::BranchingDist, "branching-dist", "branching distance between states", true},
        {RunMode::Compare, "compare", "branching vs trace distance with violation report", true},
        {RunMode::LawCheck, "lawcheck", "monad and determinization-law property suites", false},
        {RunMode::Duality, "duality", "Kantorovich-Rubinstein duality on random instances", false},
        {RunMode::WellBehaved, "wellbehaved", "evaluation-function conditions W1-W3", false},
        {RunMode::OracleCompare, "oracle-compare", "engine vs word-enumeration oracle", true},
    };
    for (const auto& m : modes) {
        CLI::App* sub = app.add_subcommand(m.name, m.help);
        if (m.takes_files)
            sub->add_option("files", files, "automaton document(s)")->expected(1, 2)->required();
        sub->add_option("--c", config.params.c, "machine discount (nfa modes)");
        sub->add_option("--c1", config.params.c1, "output weight (pa modes)");
        sub->add_option("--c2", config.params.c2, "successor weight (pa modes)");
        sub->add_option("--top", top_name, "top element: 1 or inf")->check(CLI::IsMember({"1", "inf"}));
        sub->add_option("--eval", eval_name, "evaluation convention")->check(CLI::IsMember({"max", "convex"}));
        sub->add_option("--epsilon", config.epsilon, "target truncation error");
        sub->add_option("--max-depth", config.max_depth, "depth bound for uncertified runs/oracles");
        sub->add_option("--pairs", pairs_text, "state pairs x,y[;u,v...]");
        sub->add_option("--seed", config.seed, "rng seed for check suites");
        sub->add_option("--format", format_name, "output format")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--out", out_path, "write the report to a file");
        sub->add_flag("--tv-preset", config.tv_preset,
                      "total-variation preset: top=inf, c1=1/2, c2=|A| (pa only)");
        sub->parse_complete_callback([&, mode = m.mode] { config.mode = mode; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (!eval_name.empty()) {
            config.eval_given = true;
            config.params.eval = eval_name == "max" ? EvalKind::Max : EvalKind::Convex;
        }
        config.params.top = top_name == "inf" ? kInf : 1.0;
        if (!pairs_text.empty()) {
            std::istringstream stream(pairs_text);
            std::string chunk;
            while (std::getline(stream, chunk, ';')) {
                const auto comma = chunk.find(',');
                if (comma == std::string::npos)
                    throw ParseError("--pairs expects comma-separated names: " + chunk);
                config.pairs.push_back({chunk.substr(0, comma), chunk.substr(comma + 1)});
            }
        }
        config.format = format_name == "json" ? OutputFormat::JsonReport : OutputFormat::Table;

        std::vector<Automaton> documents;
        for (const auto& path : files) documents.push_back(parse_automaton_file(path));

        const RunResult result = run(config, documents);
        const std::string& payload =
            config.format == OutputFormat::JsonReport ? result.report_json : result.table_text;
        if (out_path.empty()) {
            out << payload;
        } else {
            std::ofstream file(out_path);
            if (!file) throw std::runtime_error("cannot write '" + out_path + "'");
            file << payload;
        }
        return result.exit_code;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace pmet
