#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pmet/trace.hpp"

namespace pmet {

namespace {

void check_nfa_params(const LiftParams& params) {
    params.validate();
    if (!(params.c > 0.0) || params.c >= 1.0)
        throw std::invalid_argument("nfa distances need c in (0,1); c = 1 breaks termination detection");
    if (params.top != 1.0)
        throw std::invalid_argument("nfa distances are computed in [0,1]; set top = 1");
}

}  // namespace

double NfaTraceResult::value(std::size_t x, std::size_t y) const {
    if (x >= singleton_row.size() || y >= singleton_row.size() || singleton_row[x] < 0 ||
        singleton_row[y] < 0)
        throw std::invalid_argument("trace value: state was not seeded");
    return table.at(static_cast<std::size_t>(singleton_row[x]), static_cast<std::size_t>(singleton_row[y]));
}

NfaTraceResult nfa_trace_distance(const NfaCoalgebra& nfa, const LiftParams& params,
                                  const std::vector<std::pair<std::size_t, std::size_t>>* seed_pairs,
                                  const IterationObserver& observer) {
    nfa.validate();
    check_nfa_params(params);

    std::vector<std::size_t> seed_states;
    if (seed_pairs) {
        for (const auto& [x, y] : *seed_pairs) {
            if (x >= nfa.state_count() || y >= nfa.state_count())
                throw std::invalid_argument("trace: undeclared seed state");
            seed_states.push_back(x);
            seed_states.push_back(y);
        }
        seed_states = canonical_set(std::move(seed_states));
    } else {
        for (std::size_t x = 0; x < nfa.state_count(); ++x) seed_states.push_back(x);
    }

    // Breadth-first closure of the seed singletons under determinization steps.
    std::unordered_map<StateSet, std::size_t, StateSetHash> ids;
    std::vector<StateSet> pool;
    auto intern = [&](StateSet s) {
        auto it = ids.find(s);
        if (it != ids.end()) return it->second;
        const std::size_t id = pool.size();
        ids.emplace(s, id);
        pool.push_back(std::move(s));
        return id;
    };

    NfaTraceResult result;
    result.singleton_row.assign(nfa.state_count(), -1);
    for (std::size_t x : seed_states)
        result.singleton_row[x] = static_cast<std::ptrdiff_t>(intern(pow_unit(x)));

    std::vector<int> output;
    std::vector<std::vector<std::size_t>> trans;  // [id][symbol] -> id
    for (std::size_t id = 0; id < pool.size(); ++id) {
        const NfaStep step = determinize_step_nfa(nfa, pool[id]);
        output.push_back(step.output);
        std::vector<std::size_t> row;
        for (const auto& target : step.succ) row.push_back(intern(target));
        trans.push_back(std::move(row));
    }

    const std::size_t m = pool.size();
    DistTable table;
    table.top = 1.0;
    for (const auto& s : pool) table.labels.push_back(set_label(nfa, s));
    table.values.assign(m * m, 0.0);

    const std::size_t cap = 2 * m * m + 8;
    std::vector<double> next(m * m, 0.0);
    while (true) {
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            next[i * m + i] = 0.0;
            for (std::size_t j = i + 1; j < m; ++j) {
                double v = output[i] != output[j] ? 1.0 : 0.0;
                for (std::size_t a = 0; a < nfa.alphabet_size(); ++a) {
                    const double succ_d = table.values[trans[i][a] * m + trans[j][a]];
                    v = std::max(v, params.c * succ_d);
                }
                next[i * m + j] = next[j * m + i] = v;
                if (v != table.values[i * m + j]) changed = true;
            }
        }
        if (!changed) break;
        table.values.swap(next);
        ++table.depth;
        if (observer) observer(table);
        if (static_cast<std::size_t>(table.depth) > cap)
            throw std::runtime_error("nfa trace iteration failed to stabilize");
    }
    table.converged = true;
    table.error_bound = 0.0;
    result.table = std::move(table);
    result.subsets = std::move(pool);
    return result;
}

DistTable nfa_branching_distance(const NfaCoalgebra& nfa, const LiftParams& params, double epsilon,
                                 const IterationObserver& observer) {
    nfa.validate();
    check_nfa_params(params);
    if (!(epsilon > 0.0)) throw std::invalid_argument("branching: epsilon must be positive");

    const std::size_t n = nfa.state_count();
    DistTable table;
    table.top = 1.0;
    table.labels = nfa.states;
    table.values.assign(n * n, 0.0);

    double contraction = 1.0;  // c^depth by repeated multiplication
    std::vector<double> next(n * n, 0.0);
    std::vector<double> cost;
    while (true) {
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            next[x * n + x] = 0.0;
            for (std::size_t y = x + 1; y < n; ++y) {
                double v = nfa.accepting[x] != nfa.accepting[y] ? 1.0 : 0.0;
                for (std::size_t a = 0; a < nfa.alphabet_size(); ++a) {
                    const auto& sx = nfa.succ[x][a];
                    const auto& sy = nfa.succ[y][a];
                    cost.assign(sx.size() * sy.size(), 0.0);
                    for (std::size_t i = 0; i < sx.size(); ++i)
                        for (std::size_t j = 0; j < sy.size(); ++j)
                            cost[i * sy.size() + j] = table.values[sx[i] * n + sy[j]];
                    v = std::max(v, params.c * hausdorff_on_costs(cost, sx.size(), sy.size(), 1.0));
                }
                next[x * n + y] = next[y * n + x] = v;
                if (v != table.values[x * n + y]) changed = true;
            }
        }
        if (!changed) {
            table.converged = true;
            table.error_bound = 0.0;
            break;
        }
        table.values.swap(next);
        ++table.depth;
        contraction *= params.c;
        if (observer) observer(table);
        if (contraction <= epsilon) {
            table.converged = false;
            table.error_bound = contraction;  // c^depth * top, top = 1
            break;
        }
    }
    return table;
}

BranchTraceReport compare_branching_trace(const NfaCoalgebra& nfa, const LiftParams& params,
                                          double epsilon) {
    const DistTable branching = nfa_branching_distance(nfa, params, epsilon);
    const NfaTraceResult trace = nfa_trace_distance(nfa, params);

    BranchTraceReport report;
    for (std::size_t x = 0; x < nfa.state_count(); ++x)
        for (std::size_t y = x + 1; y < nfa.state_count(); ++y) {
            BranchTracePair entry;
            entry.x = x;
            entry.y = y;
            entry.branching = branching.at(x, y);
            entry.trace = trace.value(x, y);
            entry.slack = branching.error_bound + trace.table.error_bound + 1e-9;
            entry.violation = entry.branching < entry.trace - entry.slack;
            report.any_violation = report.any_violation || entry.violation;
            report.pairs.push_back(entry);
        }
    return report;
}

}  // namespace pmet
