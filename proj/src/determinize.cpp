#include "pmet/determinize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmet {

namespace {

std::size_t hash_combine(std::size_t seed, std::size_t value) {
    return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

void check_names(const std::vector<std::string>& names, const char* what) {
    if (names.empty()) throw std::invalid_argument(std::string(what) + " list must be nonempty");
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j)
            if (names[i] == names[j])
                throw std::invalid_argument("duplicate " + std::string(what) + " name: " + names[i]);
}

}  // namespace

std::optional<std::size_t> NfaCoalgebra::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return i;
    return std::nullopt;
}

void NfaCoalgebra::validate() const {
    check_names(states, "state");
    check_names(alphabet, "symbol");
    if (accepting.size() != states.size())
        throw std::invalid_argument("nfa: accepting flags must cover every state");
    if (succ.size() != states.size())
        throw std::invalid_argument("nfa: successor table must cover every state");
    for (std::size_t x = 0; x < states.size(); ++x) {
        if (succ[x].size() != alphabet.size())
            throw std::invalid_argument("nfa: state " + states[x] + " lacks a row for some symbol");
        for (const auto& targets : succ[x])
            for (std::size_t t : targets)
                if (t >= states.size())
                    throw std::invalid_argument("nfa: undeclared successor state from " + states[x]);
    }
}

std::optional<std::size_t> PaCoalgebra::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == name) return i;
    return std::nullopt;
}

void PaCoalgebra::validate() const {
    check_names(states, "state");
    check_names(alphabet, "symbol");
    if (output.size() != states.size())
        throw std::invalid_argument("pa: output must cover every state");
    for (std::size_t x = 0; x < states.size(); ++x)
        if (std::isnan(output[x]) || output[x] < 0.0 || output[x] > 1.0)
            throw std::invalid_argument("pa: output of " + states[x] + " outside [0,1]");
    if (succ.size() != states.size())
        throw std::invalid_argument("pa: successor table must cover every state");
    for (std::size_t x = 0; x < states.size(); ++x) {
        if (succ[x].size() != alphabet.size())
            throw std::invalid_argument("pa: state " + states[x] + " lacks a distribution for some symbol");
        for (std::size_t a = 0; a < alphabet.size(); ++a)
            if (succ[x][a].max_index() >= states.size())
                throw std::invalid_argument("pa: undeclared successor state from " + states[x] + " on " +
                                            alphabet[a]);
    }
}

StateSet pow_unit(std::size_t x) { return {x}; }

StateSet pow_mult(const std::vector<StateSet>& family) {
    std::vector<std::size_t> all;
    for (const auto& s : family) all.insert(all.end(), s.begin(), s.end());
    return canonical_set(std::move(all));
}

FinDist dist_unit(std::size_t x) { return FinDist::dirac(x); }

FinDist dist_mult(const MetaDist& meta) {
    double outer = 0.0;
    std::vector<FinDist::Entry> flat;
    for (const auto& [inner, w] : meta) {
        if (w < 0.0) throw std::invalid_argument("dist_mult: negative outer weight");
        outer += w;
        if (w == 0.0) continue;
        for (const auto& [x, v] : inner.entries()) flat.push_back({x, w * v});
    }
    if (std::abs(outer - 1.0) > kEpsNum)
        throw std::invalid_argument("dist_mult: outer weights sum to " + std::to_string(outer));
    return FinDist(std::move(flat));
}

NfaStep determinize_step_nfa(const NfaCoalgebra& nfa, const StateSet& s) {
    for (std::size_t x : s)
        if (x >= nfa.state_count()) throw std::invalid_argument("determinize: undeclared state");
    NfaStep step;
    step.output = 0;
    for (std::size_t x : s)
        if (nfa.accepting[x]) step.output = 1;
    step.succ.reserve(nfa.alphabet_size());
    for (std::size_t a = 0; a < nfa.alphabet_size(); ++a) {
        std::vector<std::size_t> merged;
        for (std::size_t x : s) {
            const auto& t = nfa.succ[x][a];
            merged.insert(merged.end(), t.begin(), t.end());
        }
        step.succ.push_back(canonical_set(std::move(merged)));
    }
    return step;
}

PaStep determinize_step_pa(const PaCoalgebra& pa, const FinDist& p) {
    if (p.max_index() >= pa.state_count()) throw std::invalid_argument("determinize: undeclared state");
    PaStep step;
    step.output = 0.0;
    for (const auto& [x, w] : p.entries()) step.output += w * pa.output[x];
    step.succ.reserve(pa.alphabet_size());
    for (std::size_t a = 0; a < pa.alphabet_size(); ++a) {
        std::vector<FinDist::Entry> mixed;
        for (const auto& [x, w] : p.entries())
            for (const auto& [y, v] : pa.succ[x][a].entries()) mixed.push_back({y, w * v});
        step.succ.push_back(FinDist(std::move(mixed)));
    }
    return step;
}

std::string set_label(const NfaCoalgebra& nfa, const StateSet& s) {
    std::ostringstream out;
    out << "{";
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (k) out << ",";
        out << nfa.states[s[k]];
    }
    out << "}";
    return out.str();
}

std::string dist_label(const PaCoalgebra& pa, const FinDist& p) {
    std::ostringstream out;
    out << "(";
    for (std::size_t k = 0; k < p.entries().size(); ++k) {
        if (k) out << ",";
        out << pa.states[p.entries()[k].first] << ":" << p.entries()[k].second;
    }
    out << ")";
    return out.str();
}

PaKey pa_memo_key(const FinDist& p) {
    PaKey key;
    key.reserve(p.entries().size());
    for (const auto& [x, w] : p.entries()) key.push_back({x, std::llround(w * 1e12)});
    return key;
}

std::size_t StateSetHash::operator()(const StateSet& s) const {
    std::size_t h = 0x51ed2701;
    for (std::size_t x : s) h = hash_combine(h, x);
    return h;
}

std::size_t PaKeyHash::operator()(const PaKey& k) const {
    std::size_t h = 0x2a5d07f3;
    for (const auto& [x, w] : k) {
        h = hash_combine(h, x);
        h = hash_combine(h, static_cast<std::size_t>(w));
    }
    return h;
}

}  // namespace pmet
