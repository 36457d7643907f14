#include "pmet/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace pmet {

std::uint64_t Sampler::raw() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Sampler::uniform(double lo, double hi) {
    const double u = static_cast<double>(raw() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

std::size_t Sampler::index(std::size_t n) { return n ? raw() % n : 0; }

int Sampler::range(int lo, int hi) { return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo + 1))); }

bool Sampler::chance(double p) { return uniform() < p; }

PseudometricSpace random_space(Sampler& rng, std::size_t n, double top) {
    const double hi = std::isinf(top) ? 4.0 : top;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = rng.chance(0.15) ? 0.0 : rng.uniform(0.0, hi);
            d[i * n + j] = d[j * n + i] = v;
        }
    // metric closure
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "e" + std::to_string(i);
    return PseudometricSpace(std::move(names), top, std::move(d));
}

namespace {

std::vector<std::size_t> distinct_indices(Sampler& rng, std::size_t carrier, std::size_t count) {
    std::vector<std::size_t> all(carrier);
    for (std::size_t i = 0; i < carrier; ++i) all[i] = i;
    for (std::size_t i = 0; i + 1 < carrier; ++i) {
        const std::size_t j = i + rng.index(carrier - i);
        std::swap(all[i], all[j]);
    }
    all.resize(std::min(count, carrier));
    return all;
}

}  // namespace

FinDist random_dist(Sampler& rng, std::size_t carrier, int max_support, int granularity) {
    const std::size_t cap = std::min<std::size_t>(carrier, static_cast<std::size_t>(max_support));
    std::size_t s = 1 + rng.index(cap);
    std::vector<FinDist::Entry> entries;

    if (granularity > 0) {
        s = std::min<std::size_t>(s, static_cast<std::size_t>(granularity));
        auto support = distinct_indices(rng, carrier, s);
        // composition of `granularity` into s positive parts
        std::vector<int> cuts;
        while (cuts.size() + 1 < s) {
            const int c = 1 + static_cast<int>(rng.index(static_cast<std::size_t>(granularity - 1)));
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
        }
        cuts.push_back(0);
        cuts.push_back(granularity);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            entries.push_back({support[i], static_cast<double>(cuts[i + 1] - cuts[i]) /
                                               static_cast<double>(granularity)});
        return FinDist(std::move(entries));
    }

    auto support = distinct_indices(rng, carrier, s);
    std::vector<double> w(s);
    double total = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        w[i] = rng.uniform(0.05, 1.0);
        total += w[i];
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < s; ++i) {
        w[i] /= total;
        partial += w[i];
        entries.push_back({support[i], w[i]});
    }
    entries.push_back({support[s - 1], 1.0 - partial});
    return FinDist(std::move(entries));
}

StateSet random_subset(Sampler& rng, std::size_t carrier, std::size_t max_size, bool allow_empty) {
    const std::size_t lo = allow_empty ? 0 : 1;
    const std::size_t size = lo + rng.index(std::min(max_size, carrier) - lo + 1);
    return canonical_set(distinct_indices(rng, carrier, size));
}

NfaCoalgebra random_nfa(Sampler& rng, std::size_t max_states, std::size_t max_alphabet) {
    NfaCoalgebra nfa;
    const std::size_t n = 2 + rng.index(max_states - 1);
    const std::size_t k = 1 + rng.index(max_alphabet);
    for (std::size_t i = 0; i < n; ++i) nfa.states.push_back("q" + std::to_string(i));
    for (std::size_t a = 0; a < k; ++a) nfa.alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
    nfa.accepting.resize(n);
    for (std::size_t i = 0; i < n; ++i) nfa.accepting[i] = rng.chance(0.35) ? 1 : 0;
    nfa.succ.assign(n, std::vector<StateSet>(k));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<std::size_t> targets;
            for (std::size_t y = 0; y < n; ++y)
                if (rng.chance(0.3)) targets.push_back(y);
            nfa.succ[x][a] = canonical_set(std::move(targets));
        }
    return nfa;
}

PaCoalgebra random_pa(Sampler& rng, std::size_t max_states, std::size_t max_alphabet, bool acyclic) {
    PaCoalgebra pa;
    const std::size_t n = 2 + rng.index(max_states - 1);
    const std::size_t k = 1 + rng.index(max_alphabet);
    for (std::size_t i = 0; i < n; ++i) pa.states.push_back("q" + std::to_string(i));
    for (std::size_t a = 0; a < k; ++a) pa.alphabet.push_back(std::string(1, static_cast<char>('a' + a)));
    pa.output.resize(n);
    for (std::size_t i = 0; i < n; ++i) pa.output[i] = rng.uniform(0.0, 1.0);

    for (std::size_t x = 0; x < n; ++x) {
        std::vector<FinDist> row;
        for (std::size_t a = 0; a < k; ++a) {
            if (acyclic && x + 1 == n) {
                row.push_back(FinDist::dirac(x));  // absorbing sink
            } else if (acyclic) {
                // forward-only mass: targets strictly after x
                const std::size_t span = n - x - 1;
                auto picked = distinct_indices(rng, span, 1 + rng.index(std::min<std::size_t>(span, 3)));
                std::vector<FinDist::Entry> entries;
                double partial = 0.0;
                for (std::size_t i = 0; i < picked.size(); ++i) {
                    const std::size_t target = x + 1 + picked[i];
                    if (i + 1 == picked.size()) {
                        entries.push_back({target, 1.0 - partial});
                    } else {
                        const double w = rng.uniform(0.05, 0.95) * (1.0 - partial);
                        partial += w;
                        entries.push_back({target, w});
                    }
                }
                row.push_back(FinDist(std::move(entries)));
            } else {
                row.push_back(random_dist(rng, n, 3));
            }
        }
        pa.succ.push_back(std::move(row));
    }
    if (acyclic) pa.output[n - 1] = 0.0;  // sink emits nothing, so deep word weights vanish
    return pa;
}

}  // namespace pmet
