#pragma once

#include <functional>
#include <optional>

#include "pmet/determinize.hpp"

namespace pmet {

/// Pseudometric over (determinized) states produced by fixed-point iteration
/// from the zero pseudometric, together with a certified truncation error.
struct DistTable {
    std::vector<std::string> labels;
    std::vector<double> values;  // n*n, symmetric
    int depth = 0;
    double error_bound = 0.0;    // certified bound on |d* - d_depth| in sup norm
    bool converged = false;      // exact fixpoint detected
    double top = 1.0;

    std::size_t size() const { return labels.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * size() + j]; }
};

/// Invoked with the table after every iteration; used by tests to check the
/// monotone-chain and per-iteration pseudometric invariants.
using IterationObserver = std::function<void(const DistTable&)>;

/// Trace pseudometric of a nondeterministic automaton on the subsets
/// reachable from the seed singletons ({x} for every state by default).
/// Iterates to the exact fixpoint; finite values are powers of c.
struct NfaTraceResult {
    DistTable table;                            // rows are reachable subsets
    std::vector<StateSet> subsets;              // canonical subset per row
    std::vector<std::ptrdiff_t> singleton_row;  // original state -> row, -1 if unseeded

    double value(std::size_t x, std::size_t y) const;
};

NfaTraceResult nfa_trace_distance(
    const NfaCoalgebra& nfa, const LiftParams& params,
    const std::vector<std::pair<std::size_t, std::size_t>>* seed_pairs = nullptr,
    const IterationObserver& observer = {});

/// Trace distance between two states of a probabilistic automaton by
/// truncated evaluation of the word tree from the two Dirac seeds.
/// With epsilon given (requires c2 < 1) the depth is chosen so the geometric
/// tail is below epsilon; otherwise max_depth levels are evaluated. The
/// error bound is zero when the two reachable distribution processes become
/// identical before the depth limit, and infinite (uncertified) when c2 >= 1
/// at the depth limit.
struct PaTraceValue {
    double value = 0.0;
    double error_bound = 0.0;
    bool converged = false;
    int depth = 0;
};

PaTraceValue pa_trace_distance(const PaCoalgebra& pa, const LiftParams& params, std::size_t x,
                               std::size_t y, std::optional<double> epsilon, int max_depth);

/// Branching pseudometric on the original NFA states:
///   d'(x,y) = max{ d2(o_x, o_y), c * max_a Hausdorff_d(succ(x,a), succ(y,a)) }.
/// Stops at the exact fixpoint, or after enough steps for the contraction
/// bound c^n * top <= epsilon.
DistTable nfa_branching_distance(const NfaCoalgebra& nfa, const LiftParams& params, double epsilon,
                                 const IterationObserver& observer = {});

/// Branching pseudometric on the original PA states:
///   d'(x,y) = c1 |o_x - o_y| + (c2/|A|) sum_a W_d(succ(x,a), succ(y,a)).
DistTable pa_branching_distance(const PaCoalgebra& pa, const LiftParams& params, double epsilon,
                                const IterationObserver& observer = {});

struct BranchTracePair {
    std::size_t x = 0, y = 0;
    double branching = 0.0;
    double trace = 0.0;
    double slack = 0.0;  // combined error bounds + numeric tolerance
    bool violation = false;
};

struct BranchTraceReport {
    std::vector<BranchTracePair> pairs;
    bool any_violation = false;
};

/// Checks branching >= trace - slack on every state pair.
BranchTraceReport compare_branching_trace(const NfaCoalgebra& nfa, const LiftParams& params,
                                          double epsilon);
BranchTraceReport compare_branching_trace(const PaCoalgebra& pa, const LiftParams& params,
                                          double epsilon);

}  // namespace pmet
