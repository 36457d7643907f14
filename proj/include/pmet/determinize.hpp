#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pmet/lifting.hpp"

namespace pmet {

/// Nondeterministic automaton as a coalgebra X -> 2 x P(X)^A.
struct NfaCoalgebra {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<char> accepting;               // one flag per state
    std::vector<std::vector<StateSet>> succ;   // [state][symbol], possibly empty sets

    std::size_t state_count() const { return states.size(); }
    std::size_t alphabet_size() const { return alphabet.size(); }
    std::optional<std::size_t> state_index(std::string_view name) const;
    void validate() const;  // throws std::invalid_argument naming the offender
};

/// Probabilistic automaton as a coalgebra X -> [0,1] x D(X)^A; transitions
/// are total (a full distribution for every state-symbol pair).
struct PaCoalgebra {
    std::vector<std::string> states;
    std::vector<std::string> alphabet;
    std::vector<double> output;                // values in [0,1]
    std::vector<std::vector<FinDist>> succ;    // [state][symbol]

    std::size_t state_count() const { return states.size(); }
    std::size_t alphabet_size() const { return alphabet.size(); }
    std::optional<std::size_t> state_index(std::string_view name) const;
    void validate() const;
};

// ---------------------------------------------------------------------------
// Monad structure.

StateSet pow_unit(std::size_t x);
StateSet pow_mult(const std::vector<StateSet>& family);

FinDist dist_unit(std::size_t x);

/// Distribution over distributions: outer weights attached to inner
/// distributions; weights must sum to one.
using MetaDist = std::vector<std::pair<FinDist, double>>;
FinDist dist_mult(const MetaDist& meta);

// ---------------------------------------------------------------------------
// Generalized determinization, one step: the composite F mu . lambda . T c
// applied to a determinized state.

struct NfaStep {
    int output = 0;                 // 1 iff some member state accepts
    std::vector<StateSet> succ;     // per symbol, canonical union of successors
};
NfaStep determinize_step_nfa(const NfaCoalgebra& nfa, const StateSet& s);

struct PaStep {
    double output = 0.0;            // expected output under the distribution
    std::vector<FinDist> succ;      // per symbol, mixture of successor rows
};
PaStep determinize_step_pa(const PaCoalgebra& pa, const FinDist& p);

// ---------------------------------------------------------------------------
// Canonical labels and memoization keys for determinized states.

std::string set_label(const NfaCoalgebra& nfa, const StateSet& s);
std::string dist_label(const PaCoalgebra& pa, const FinDist& p);

/// Memo key for distributions: support indices with weights rounded to 12
/// decimal digits. Rounding applies to the key only, never to arithmetic.
using PaKey = std::vector<std::pair<std::size_t, long long>>;
PaKey pa_memo_key(const FinDist& p);

struct StateSetHash {
    std::size_t operator()(const StateSet& s) const;
};
struct PaKeyHash {
    std::size_t operator()(const PaKey& k) const;
};

}  // namespace pmet
