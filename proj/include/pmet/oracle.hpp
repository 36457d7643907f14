#pragma once

#include <cstddef>
#include <vector>

#include "pmet/determinize.hpp"

namespace pmet {

/// Valuations of all words up to a length bound, in length-lexicographic
/// order (index 0 is the empty word). Words are not materialized; word_at
/// reconstructs them from the index.
struct WordSemantics {
    std::size_t alphabet_size = 0;
    int max_len = 0;
    std::vector<double> valuation;

    static std::size_t word_count(std::size_t alphabet_size, int max_len);
    std::vector<std::size_t> word_at(std::size_t index) const;
    int length_of(std::size_t index) const;
};

/// Acceptance function of the subset reached from the seed set, recomputed
/// from scratch (independent of the determinization engine).
WordSemantics nfa_language(const NfaCoalgebra& nfa, const StateSet& seed, int max_len);

/// Expected-output function of the distribution reached from the seed,
/// recomputed from scratch.
WordSemantics pa_word_weights(const PaCoalgebra& pa, const FinDist& seed, int max_len);

struct NfaClosedForm {
    double value = 0.0;
    bool exact = false;  // false: no disagreement within the bound, 0 is only a claim
};

/// c^k for the smallest k with a length-k disagreement; powers of c are
/// computed by repeated multiplication.
NfaClosedForm closed_form_nfa_distance(const WordSemantics& sem1, const WordSemantics& sem2,
                                       double c);

struct PaClosedForm {
    double value = 0.0;
    double tail_bound = 0.0;  // infinite when c2 >= 1 (no geometric bound)
};

/// Truncated sum c1 * sum_w (c2/|A|)^|w| |p1(w) - p2(w)| with its tail bound;
/// word weights of probabilistic automata lie in [0,1], which bounds each
/// omitted term.
PaClosedForm closed_form_pa_distance(const WordSemantics& sem1, const WordSemantics& sem2,
                                     double c1, double c2, std::size_t alphabet_size);

// ---------------------------------------------------------------------------
// Exhaustive coupling enumeration for tiny instances.

struct RelationCoupling {
    double value = 0.0;
    bool has_witness = false;
    std::vector<std::pair<std::size_t, std::size_t>> relation;  // pairs of side-local indices
};

/// Minimum over all relations T with full projections of the max cost over T,
/// by subset enumeration of the nl x nr cost table. Both sides empty: value 0
/// with the empty witness; exactly one empty: top with no witness.
RelationCoupling min_max_relation(const std::vector<double>& cost, std::size_t nl, std::size_t nr,
                                  double top);

/// Powerset coupling optimum between two carrier subsets (sets of size <= 3
/// over carriers of <= 5 elements; larger instances are rejected).
RelationCoupling enumerate_set_couplings(const PseudometricSpace& space, const StateSet& s1,
                                         const StateSet& s2);

struct VertexCoupling {
    double value = 0.0;
    std::vector<double> flow;  // |supp(p1)| x |supp(p2)|, row-major
};

/// Exact optimum over all basic feasible vertices of the transportation
/// polytope (spanning-tree bases); supports of size <= 3 only.
VertexCoupling enumerate_dist_couplings(const PseudometricSpace& space, const FinDist& p1,
                                        const FinDist& p2);

}  // namespace pmet
