#include "pmet/automaton_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace pmet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ParseError(message); }

void check_keys(const json& doc, const std::vector<std::string>& allowed) {
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            fail("unknown field '" + key + "'");
    }
}

std::vector<std::string> string_list(const json& j, const std::string& what) {
    if (!j.is_array()) fail(what + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : j) {
        if (!item.is_string()) fail(what + " must contain only strings");
        out.push_back(item.get<std::string>());
    }
    if (out.empty()) fail(what + " must be nonempty");
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j2 = i + 1; j2 < out.size(); ++j2)
            if (out[i] == out[j2]) fail("duplicate " + what + " entry '" + out[i] + "'");
    return out;
}

std::size_t lookup(const std::vector<std::string>& names, const std::string& name,
                   const std::string& what) {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    fail("undeclared " + what + " '" + name + "'");
}

NfaCoalgebra parse_nfa(const json& doc) {
    check_keys(doc, {"kind", "alphabet", "states", "accepting", "transitions"});
    if (!doc.contains("accepting")) fail("nfa document needs an 'accepting' list");
    if (!doc.contains("transitions")) fail("document needs a 'transitions' object");

    NfaCoalgebra nfa;
    nfa.states = string_list(doc.at("states"), "state");
    nfa.alphabet = string_list(doc.at("alphabet"), "symbol");
    nfa.accepting.assign(nfa.states.size(), 0);
    if (!doc.at("accepting").is_array()) fail("'accepting' must be an array of states");
    for (const auto& item : doc.at("accepting")) {
        if (!item.is_string()) fail("'accepting' must contain state names");
        nfa.accepting[lookup(nfa.states, item.get<std::string>(), "state")] = 1;
    }

    nfa.succ.assign(nfa.states.size(), std::vector<StateSet>(nfa.alphabet.size()));
    const json& trans = doc.at("transitions");
    if (!trans.is_object()) fail("'transitions' must be an object");
    for (const auto& [state_name, row] : trans.items()) {
        const std::size_t x = lookup(nfa.states, state_name, "state");
        if (!row.is_object()) fail("transitions of '" + state_name + "' must be an object");
        for (const auto& [symbol_name, targets] : row.items()) {
            const std::size_t a = lookup(nfa.alphabet, symbol_name, "symbol");
            if (!targets.is_array()) fail("successors of '" + state_name + "' on '" + symbol_name +
                                          "' must be an array");
            std::vector<std::size_t> set;
            for (const auto& t : targets) {
                if (!t.is_string()) fail("successor entries must be state names");
                set.push_back(lookup(nfa.states, t.get<std::string>(), "state"));
            }
            nfa.succ[x][a] = canonical_set(std::move(set));
        }
    }
    nfa.validate();
    return nfa;
}

PaCoalgebra parse_pa(const json& doc) {
    check_keys(doc, {"kind", "alphabet", "states", "output", "transitions"});
    if (!doc.contains("output")) fail("pa document needs an 'output' map");
    if (!doc.contains("transitions")) fail("document needs a 'transitions' object");

    PaCoalgebra pa;
    pa.states = string_list(doc.at("states"), "state");
    pa.alphabet = string_list(doc.at("alphabet"), "symbol");

    const json& output = doc.at("output");
    if (!output.is_object()) fail("'output' must map states to numbers");
    pa.output.assign(pa.states.size(), -1.0);
    for (const auto& [state_name, value] : output.items()) {
        const std::size_t x = lookup(pa.states, state_name, "state");
        if (!value.is_number()) fail("output of '" + state_name + "' must be a number");
        pa.output[x] = value.get<double>();
    }
    for (std::size_t x = 0; x < pa.states.size(); ++x)
        if (pa.output[x] < 0.0 || pa.output[x] > 1.0)
            fail("output of '" + pa.states[x] + "' missing or outside [0,1]");

    const json& trans = doc.at("transitions");
    if (!trans.is_object()) fail("'transitions' must be an object");
    std::vector<std::vector<std::map<std::size_t, double>>> rows(
        pa.states.size(), std::vector<std::map<std::size_t, double>>(pa.alphabet.size()));
    std::vector<std::vector<bool>> seen(pa.states.size(),
                                        std::vector<bool>(pa.alphabet.size(), false));
    for (const auto& [state_name, row] : trans.items()) {
        const std::size_t x = lookup(pa.states, state_name, "state");
        if (!row.is_object()) fail("transitions of '" + state_name + "' must be an object");
        for (const auto& [symbol_name, dist] : row.items()) {
            const std::size_t a = lookup(pa.alphabet, symbol_name, "symbol");
            if (!dist.is_object()) fail("distribution of '" + state_name + "' on '" + symbol_name +
                                        "' must map states to weights");
            double sum = 0.0;
            for (const auto& [target_name, weight] : dist.items()) {
                const std::size_t y = lookup(pa.states, target_name, "state");
                if (!weight.is_number()) fail("weights must be numbers");
                rows[x][a][y] = weight.get<double>();
                sum += weight.get<double>();
            }
            if (std::abs(sum - 1.0) > kEpsNum) {
                std::ostringstream msg;
                msg << "weights of state '" << state_name << "' on symbol '" << symbol_name
                    << "' sum to " << sum << ", expected 1";
                fail(msg.str());
            }
            seen[x][a] = true;
        }
    }
    for (std::size_t x = 0; x < pa.states.size(); ++x)
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a)
            if (!seen[x][a])
                fail("state '" + pa.states[x] + "' has no distribution on symbol '" + pa.alphabet[a] +
                     "'");

    for (std::size_t x = 0; x < pa.states.size(); ++x) {
        std::vector<FinDist> row;
        for (std::size_t a = 0; a < pa.alphabet.size(); ++a) {
            std::vector<FinDist::Entry> entries(rows[x][a].begin(), rows[x][a].end());
            row.push_back(FinDist(std::move(entries)));
        }
        pa.succ.push_back(std::move(row));
    }
    pa.validate();
    return pa;
}

}  // namespace

Automaton parse_automaton_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!doc.is_object()) fail("document must be a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string())
        fail("document needs a 'kind' of \"nfa\" or \"pa\"");
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "nfa") return parse_nfa(doc);
    if (kind == "pa") return parse_pa(doc);
    fail("unknown kind '" + kind + "'");
}

Automaton parse_automaton_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_automaton_text(buffer.str());
    } catch (const ParseError& e) {
        fail(path + ": " + e.what());
    }
}

namespace {

// index permutation that sorts names
std::vector<std::size_t> sorted_order(const std::vector<std::string>& names) {
    std::vector<std::size_t> order(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
    return order;
}

}  // namespace

std::string serialize_automaton(const Automaton& automaton) {
    json doc;
    if (std::holds_alternative<NfaCoalgebra>(automaton)) {
        const auto& nfa = std::get<NfaCoalgebra>(automaton);
        const auto state_order = sorted_order(nfa.states);
        const auto symbol_order = sorted_order(nfa.alphabet);
        doc["kind"] = "nfa";
        for (std::size_t i : state_order) doc["states"].push_back(nfa.states[i]);
        for (std::size_t a : symbol_order) doc["alphabet"].push_back(nfa.alphabet[a]);
        doc["accepting"] = json::array();
        for (std::size_t i : state_order)
            if (nfa.accepting[i]) doc["accepting"].push_back(nfa.states[i]);
        doc["transitions"] = json::object();
        for (std::size_t i : state_order) {
            json row = json::object();
            for (std::size_t a : symbol_order) {
                if (nfa.succ[i][a].empty()) continue;
                std::vector<std::string> names;
                for (std::size_t t : nfa.succ[i][a]) names.push_back(nfa.states[t]);
                std::sort(names.begin(), names.end());
                row[nfa.alphabet[a]] = names;
            }
            if (!row.empty()) doc["transitions"][nfa.states[i]] = std::move(row);
        }
    } else {
        const auto& pa = std::get<PaCoalgebra>(automaton);
        const auto state_order = sorted_order(pa.states);
        const auto symbol_order = sorted_order(pa.alphabet);
        doc["kind"] = "pa";
        for (std::size_t i : state_order) doc["states"].push_back(pa.states[i]);
        for (std::size_t a : symbol_order) doc["alphabet"].push_back(pa.alphabet[a]);
        doc["output"] = json::object();
        for (std::size_t i : state_order) doc["output"][pa.states[i]] = pa.output[i];
        doc["transitions"] = json::object();
        for (std::size_t i : state_order) {
            json row = json::object();
            for (std::size_t a : symbol_order) {
                json dist = json::object();
                for (const auto& [target, weight] : pa.succ[i][a].entries())
                    dist[pa.states[target]] = weight;
                row[pa.alphabet[a]] = std::move(dist);
            }
            doc["transitions"][pa.states[i]] = std::move(row);
        }
    }
    return doc.dump(2) + "\n";
}

namespace {

std::vector<std::string> prefixed(const std::vector<std::string>& names, const char* prefix) {
    std::vector<std::string> out;
    out.reserve(names.size());
    for (const auto& name : names) out.push_back(std::string(prefix) + name);
    return out;
}

}  // namespace

NfaCoalgebra disjoint_union(const NfaCoalgebra& first, const NfaCoalgebra& second) {
    NfaCoalgebra out;
    out.states = prefixed(first.states, "1:");
    const auto more = prefixed(second.states, "2:");
    out.states.insert(out.states.end(), more.begin(), more.end());

    std::vector<std::string> symbols = first.alphabet;
    for (const auto& s : second.alphabet)
        if (std::find(symbols.begin(), symbols.end(), s) == symbols.end()) symbols.push_back(s);
    std::sort(symbols.begin(), symbols.end());
    out.alphabet = symbols;

    auto symbol_slot = [&](const std::string& name) {
        return static_cast<std::size_t>(
            std::find(out.alphabet.begin(), out.alphabet.end(), name) - out.alphabet.begin());
    };

    out.accepting.assign(out.states.size(), 0);
    out.succ.assign(out.states.size(), std::vector<StateSet>(out.alphabet.size()));
    const std::size_t offset = first.state_count();
    for (std::size_t x = 0; x < first.state_count(); ++x) {
        out.accepting[x] = first.accepting[x];
        for (std::size_t a = 0; a < first.alphabet_size(); ++a)
            out.succ[x][symbol_slot(first.alphabet[a])] = first.succ[x][a];
    }
    for (std::size_t x = 0; x < second.state_count(); ++x) {
        out.accepting[offset + x] = second.accepting[x];
        for (std::size_t a = 0; a < second.alphabet_size(); ++a) {
            StateSet shifted;
            for (std::size_t t : second.succ[x][a]) shifted.push_back(offset + t);
            out.succ[offset + x][symbol_slot(second.alphabet[a])] = shifted;
        }
    }
    return out;
}

PaCoalgebra disjoint_union(const PaCoalgebra& first, const PaCoalgebra& second) {
    std::vector<std::string> a1 = first.alphabet, a2 = second.alphabet;
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());
    if (a1 != a2)
        throw std::invalid_argument("disjoint union of probabilistic automata needs equal alphabets");

    PaCoalgebra out;
    out.states = prefixed(first.states, "1:");
    const auto more = prefixed(second.states, "2:");
    out.states.insert(out.states.end(), more.begin(), more.end());
    out.alphabet = a1;

    auto slot_of = [&](const std::vector<std::string>& alphabet, std::size_t a) {
        return static_cast<std::size_t>(
            std::find(out.alphabet.begin(), out.alphabet.end(), alphabet[a]) - out.alphabet.begin());
    };

    out.output.assign(out.states.size(), 0.0);
    const std::size_t offset = first.state_count();
    std::vector<std::vector<FinDist>> rows;
    rows.reserve(out.states.size());
    for (std::size_t x = 0; x < first.state_count(); ++x) {
        out.output[x] = first.output[x];
        std::vector<FinDist> row(out.alphabet.size(), FinDist::dirac(0));
        for (std::size_t a = 0; a < first.alphabet_size(); ++a) row[slot_of(first.alphabet, a)] = first.succ[x][a];
        rows.push_back(std::move(row));
    }
    for (std::size_t x = 0; x < second.state_count(); ++x) {
        out.output[offset + x] = second.output[x];
        std::vector<FinDist> row(out.alphabet.size(), FinDist::dirac(0));
        for (std::size_t a = 0; a < second.alphabet_size(); ++a) {
            std::vector<FinDist::Entry> shifted;
            for (const auto& [t, w] : second.succ[x][a].entries()) shifted.push_back({offset + t, w});
            row[slot_of(second.alphabet, a)] = FinDist(std::move(shifted));
        }
        rows.push_back(std::move(row));
    }
    out.succ = std::move(rows);
    return out;
}

}  // namespace pmet
