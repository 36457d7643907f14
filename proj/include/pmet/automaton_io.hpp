#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include "pmet/determinize.hpp"

namespace pmet {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Automaton = std::variant<NfaCoalgebra, PaCoalgebra>;

/// Parses the strict JSON automaton document. Unknown fields, undeclared
/// states or symbols, duplicate names, and probabilistic rows whose weights
/// do not sum to one are rejected with messages naming the offender.
Automaton parse_automaton_text(const std::string& text);
Automaton parse_automaton_file(const std::string& path);

/// Canonical serialization: states and symbols sorted, empty successor rows
/// omitted. parse . serialize is the identity on canonical documents.
std::string serialize_automaton(const Automaton& automaton);

/// Disjoint union for cross-automaton distances; states are prefixed with
/// "1:" and "2:". Probabilistic automata must share an alphabet.
NfaCoalgebra disjoint_union(const NfaCoalgebra& first, const NfaCoalgebra& second);
PaCoalgebra disjoint_union(const PaCoalgebra& first, const PaCoalgebra& second);

}  // namespace pmet
