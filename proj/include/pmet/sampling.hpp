#pragma once

#include <cstdint>

#include "pmet/determinize.hpp"

namespace pmet {

/// Deterministic sampler; the raw stream is a mersenne twister but all
/// derived draws avoid implementation-defined library distributions, so a
/// seed pins the sampled instances exactly.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t raw();
    double uniform(double lo = 0.0, double hi = 1.0);
    std::size_t index(std::size_t n);     // uniform in [0, n)
    int range(int lo, int hi);            // uniform inclusive
    bool chance(double p);

private:
    std::uint64_t state_;
};

/// Random pseudometric space: metric closure (all-pairs shortest paths) of a
/// random symmetric matrix with zero diagonal, entries bounded by top.
PseudometricSpace random_space(Sampler& rng, std::size_t n, double top);

/// Random distribution over a carrier of the given size with support of at
/// most max_support elements. granularity > 0 draws weights as multiples of
/// 1/granularity, which keeps downstream products and sums exact in doubles.
FinDist random_dist(Sampler& rng, std::size_t carrier, int max_support, int granularity = 0);

StateSet random_subset(Sampler& rng, std::size_t carrier, std::size_t max_size, bool allow_empty);

NfaCoalgebra random_nfa(Sampler& rng, std::size_t max_states, std::size_t max_alphabet);

/// Random probabilistic automaton. Acyclic mode orders the states, lets mass
/// flow only forward, and ends in a single absorbing zero-output state, so
/// every run is eventually constant and truncation is exact.
PaCoalgebra random_pa(Sampler& rng, std::size_t max_states, std::size_t max_alphabet, bool acyclic);

}  // namespace pmet
