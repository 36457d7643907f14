#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pmet/check_report.hpp"
#include "pmet/metric_space.hpp"

namespace pmet {

/// Canonical finite set of carrier indices: sorted, duplicates removed.
using StateSet = std::vector<std::size_t>;

StateSet canonical_set(std::vector<std::size_t> xs);

/// Finitely supported probability distribution over carrier indices.
/// Canonical form: support sorted by index, strictly positive weights,
/// total mass one within kEpsNum.
class FinDist {
public:
    using Entry = std::pair<std::size_t, double>;

    explicit FinDist(std::vector<Entry> weighted_support);
    static FinDist dirac(std::size_t x);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    double weight_of(std::size_t x) const;
    std::size_t max_index() const;  // largest support index

    bool operator==(const FinDist& other) const { return entries_ == other.entries_; }

private:
    std::vector<Entry> entries_;
};

enum class EvalKind { Max, Convex };

/// Evaluation-function selection and the discount constants used by the
/// machine-functor liftings.
struct LiftParams {
    EvalKind eval = EvalKind::Max;
    double c = 0.5;         // machine endofunctor discount
    double c1 = 0.5;        // output component weight
    double c2 = 0.5;        // successor component weight
    double top = 1.0;

    void validate() const;  // throws std::invalid_argument on bad combinations
};

/// Hausdorff distance between finite subsets of the carrier.
/// Both empty: 0. Exactly one empty: top (no coupling exists).
double hausdorff_lift(const PseudometricSpace& space, const StateSet& s1, const StateSet& s2);

/// Hausdorff on an explicit cost table: cost[i*nr + j] between the i-th
/// left element and the j-th right element. Used for nested liftings.
double hausdorff_on_costs(const std::vector<double>& cost, std::size_t nl, std::size_t nr,
                          double top);

/// Optimal-transport distance between two distributions under the space's
/// ground metric; infinite ground distances are handled by restricting to
/// finite-cost arcs (no feasible routing means distance top).
double wasserstein_dist_lift(const PseudometricSpace& space, const FinDist& p1, const FinDist& p2);

/// Dual view: sup over nonexpansive f: X -> [0, top] of |E_p1 f - E_p2 f|,
/// computed exactly by LP. Requires finite top.
double kantorovich_dist_lift(const PseudometricSpace& space, const FinDist& p1, const FinDist& p2);

/// Lifting of the input functor X^A: s1, s2 assign a carrier element to each
/// symbol 0..|A|-1. Max: max_a d(s1(a), s2(a)); Convex: sum_a d(s1(a), s2(a)).
double input_lift(const LiftParams& params, const PseudometricSpace& space,
                  const std::vector<std::size_t>& s1, const std::vector<std::size_t>& s2);

/// One machine-functor element: an output (index into the output space) and a
/// successor per input symbol (indices into the state space).
struct MachineElem {
    std::size_t output = 0;
    std::vector<std::size_t> succ;
};

/// Lifting of the machine bifunctor B x X^A. The unique coupling makes this
/// the optimal-transport value directly:
///   Max:    max{c1 * dB, c2 * max_a dX}
///   Convex: c1 * dB + (c2/|A|) * sum_a dX
double machine_lift(const LiftParams& params, const PseudometricSpace& d_B,
                    const PseudometricSpace& d_X, const MachineElem& t1, const MachineElem& t2);

/// Same combination on already-computed component distances.
double machine_value(const LiftParams& params, double output_dist,
                     const std::vector<double>& succ_dists);

/// Machine endofunctor over the two-point output set with the discrete
/// metric: top when the output bits differ, else c * max_a dX.
double m2_lift(const LiftParams& params, const PseudometricSpace& space, int o1,
               const std::vector<std::size_t>& s1, int o2, const std::vector<std::size_t>& s2);

// ---------------------------------------------------------------------------
// Well-behavedness checks (conditions W1-W3) for the concrete functor zoo.

enum class FunctorId { PowFinMax, DistExpectation, InputMax, InputSum, ProductMax, ProductConvex };

CheckReport check_well_behaved(FunctorId functor, int samples, std::uint64_t rng_seed,
                               double top = 1.0);

/// Input-functor variant with an injectable evaluation, so tests can verify
/// that the checker catches broken evaluations.
using TupleEval = std::function<double(const std::vector<double>&)>;
CheckReport check_well_behaved_input(const TupleEval& ev, int alphabet_size, int samples,
                                     std::uint64_t rng_seed, double top = 1.0);

// ---------------------------------------------------------------------------
// Compositionality: direct lifting of a composite functor vs. the nested
// two-stage lifting, on random instances over the given space.

enum class CompositePair { DistDist, PowPow, PowM2 };

CheckReport compositionality_check(CompositePair pair, const PseudometricSpace& space,
                                   int instances, std::uint64_t rng_seed,
                                   const LiftParams& params = {});

}  // namespace pmet
