#include "pmet/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace pmet {

namespace {

constexpr std::size_t kMaxWordTable = 200'000'000;

}  // namespace

std::size_t WordSemantics::word_count(std::size_t alphabet_size, int max_len) {
    if (alphabet_size == 0) throw std::invalid_argument("word semantics: empty alphabet");
    if (max_len < 0) throw std::invalid_argument("word semantics: negative length bound");
    std::size_t total = 0, level = 1;
    for (int k = 0; k <= max_len; ++k) {
        total += level;
        if (total > kMaxWordTable) throw std::invalid_argument("word semantics: length bound too large");
        level *= alphabet_size;
    }
    return total;
}

std::vector<std::size_t> WordSemantics::word_at(std::size_t index) const {
    std::size_t level = 1, offset = 0;
    int len = 0;
    while (offset + level <= index) {
        offset += level;
        level *= alphabet_size;
        ++len;
    }
    std::size_t rank = index - offset;
    std::vector<std::size_t> word(len);
    for (int pos = len - 1; pos >= 0; --pos) {
        word[pos] = rank % alphabet_size;
        rank /= alphabet_size;
    }
    return word;
}

int WordSemantics::length_of(std::size_t index) const {
    std::size_t level = 1, offset = 0;
    int len = 0;
    while (offset + level <= index) {
        offset += level;
        level *= alphabet_size;
        ++len;
    }
    return len;
}

WordSemantics nfa_language(const NfaCoalgebra& nfa, const StateSet& seed, int max_len) {
    for (std::size_t x : seed)
        if (x >= nfa.state_count()) throw std::invalid_argument("nfa language: undeclared seed state");
    const std::size_t n = nfa.state_count();
    const std::size_t k = nfa.alphabet_size();
    if (n > 64) throw std::invalid_argument("nfa language: carrier larger than 64 states");

    WordSemantics sem;
    sem.alphabet_size = k;
    sem.max_len = max_len;
    sem.valuation.assign(WordSemantics::word_count(k, max_len), 0.0);

    std::uint64_t accept_mask = 0;
    for (std::size_t x = 0; x < n; ++x)
        if (nfa.accepting[x]) accept_mask |= std::uint64_t{1} << x;
    // per state and symbol, the successor set as a bit mask
    std::vector<std::uint64_t> step(n * k, 0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t y : nfa.succ[x][a]) step[x * k + a] |= std::uint64_t{1} << y;

    std::uint64_t seed_mask = 0;
    for (std::size_t x : seed) seed_mask |= std::uint64_t{1} << x;

    std::vector<std::size_t> level_offset(static_cast<std::size_t>(max_len) + 1, 0);
    {
        std::size_t level = 1;
        for (int d = 1; d <= max_len; ++d) {
            level_offset[d] = level_offset[d - 1] + level;
            level *= k;
        }
    }

    // Depth-first walk over the word tree.
    std::function<void(int, std::size_t, std::uint64_t)> walk = [&](int depth, std::size_t rank,
                                                                    std::uint64_t mask) {
        sem.valuation[level_offset[depth] + rank] = (mask & accept_mask) ? 1.0 : 0.0;
        if (depth == max_len) return;
        for (std::size_t a = 0; a < k; ++a) {
            std::uint64_t next = 0;
            std::uint64_t rest = mask;
            while (rest) {
                const std::size_t x = static_cast<std::size_t>(__builtin_ctzll(rest));
                rest &= rest - 1;
                next |= step[x * k + a];
            }
            walk(depth + 1, rank * k + a, next);
        }
    };
    walk(0, 0, seed_mask);
    return sem;
}

WordSemantics pa_word_weights(const PaCoalgebra& pa, const FinDist& seed, int max_len) {
    if (seed.max_index() >= pa.state_count())
        throw std::invalid_argument("pa word weights: undeclared seed state");
    const std::size_t n = pa.state_count();
    const std::size_t k = pa.alphabet_size();

    WordSemantics sem;
    sem.alphabet_size = k;
    sem.max_len = max_len;
    sem.valuation.assign(WordSemantics::word_count(k, max_len), 0.0);

    std::vector<std::vector<double>> weight(static_cast<std::size_t>(max_len) + 1,
                                            std::vector<double>(n, 0.0));
    for (const auto& [x, w] : seed.entries()) weight[0][x] = w;

    std::vector<std::size_t> level_offset(static_cast<std::size_t>(max_len) + 1, 0);
    {
        std::size_t level = 1;
        for (int d = 1; d <= max_len; ++d) {
            level_offset[d] = level_offset[d - 1] + level;
            level *= k;
        }
    }

    std::function<void(int, std::size_t)> walk = [&](int depth, std::size_t rank) {
        double expected = 0.0;
        for (std::size_t x = 0; x < n; ++x) expected += weight[depth][x] * pa.output[x];
        sem.valuation[level_offset[depth] + rank] = expected;
        if (depth == max_len) return;
        for (std::size_t a = 0; a < k; ++a) {
            auto& next = weight[depth + 1];
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t x = 0; x < n; ++x) {
                const double w = weight[depth][x];
                if (w == 0.0) continue;
                for (const auto& [y, v] : pa.succ[x][a].entries()) next[y] += w * v;
            }
            walk(depth + 1, rank * k + a);
        }
    };
    walk(0, 0);
    return sem;
}

NfaClosedForm closed_form_nfa_distance(const WordSemantics& sem1, const WordSemantics& sem2,
                                       double c) {
    if (sem1.alphabet_size != sem2.alphabet_size || sem1.max_len != sem2.max_len)
        throw std::invalid_argument("closed form: mismatched semantics bounds");
    std::size_t level = 1, offset = 0;
    double power = 1.0;  // c^len by repeated multiplication
    for (int len = 0; len <= sem1.max_len; ++len) {
        for (std::size_t r = 0; r < level; ++r)
            if (sem1.valuation[offset + r] != sem2.valuation[offset + r]) return {power, true};
        offset += level;
        level *= sem1.alphabet_size;
        power *= c;
    }
    return {0.0, false};
}

PaClosedForm closed_form_pa_distance(const WordSemantics& sem1, const WordSemantics& sem2,
                                     double c1, double c2, std::size_t alphabet_size) {
    if (sem1.alphabet_size != sem2.alphabet_size || sem1.max_len != sem2.max_len)
        throw std::invalid_argument("closed form: mismatched semantics bounds");
    if (alphabet_size != sem1.alphabet_size)
        throw std::invalid_argument("closed form: alphabet size mismatch");

    double value = 0.0;
    double factor = c1;  // c1 * (c2/|A|)^len
    const double ratio = c2 / static_cast<double>(alphabet_size);
    std::size_t level = 1, offset = 0;
    for (int len = 0; len <= sem1.max_len; ++len) {
        double level_sum = 0.0;
        for (std::size_t r = 0; r < level; ++r)
            level_sum += std::abs(sem1.valuation[offset + r] - sem2.valuation[offset + r]);
        value += factor * level_sum;
        offset += level;
        level *= alphabet_size;
        factor *= ratio;
    }

    double tail = kInf;
    if (c2 < 1.0) {
        double pow_c2 = 1.0;
        for (int len = 0; len <= sem1.max_len; ++len) pow_c2 *= c2;
        pow_c2 *= c2;  // c2^(bound+1)
        tail = c1 * pow_c2 / (1.0 - c2);
    }
    return {value, tail};
}

RelationCoupling min_max_relation(const std::vector<double>& cost, std::size_t nl, std::size_t nr,
                                  double top) {
    if (nl == 0 && nr == 0) return {0.0, true, {}};
    if (nl == 0 || nr == 0) return {top, false, {}};
    if (nl * nr > 16) throw std::invalid_argument("relation enumeration: instance too large");
    if (cost.size() != nl * nr) throw std::invalid_argument("relation enumeration: bad cost table");

    RelationCoupling best;
    best.value = kInf;
    const std::size_t cells = nl * nr;
    for (std::size_t maskbits = 1; maskbits < (std::size_t{1} << cells); ++maskbits) {
        std::size_t rows = 0, cols = 0;
        double worst = 0.0;
        for (std::size_t cell = 0; cell < cells; ++cell) {
            if (!(maskbits & (std::size_t{1} << cell))) continue;
            rows |= std::size_t{1} << (cell / nr);
            cols |= std::size_t{1} << (cell % nr);
            worst = std::max(worst, cost[cell]);
        }
        if (rows != (std::size_t{1} << nl) - 1 || cols != (std::size_t{1} << nr) - 1) continue;
        if (worst < best.value) {
            best.value = worst;
            best.has_witness = true;
            best.relation.clear();
            for (std::size_t cell = 0; cell < cells; ++cell)
                if (maskbits & (std::size_t{1} << cell)) best.relation.push_back({cell / nr, cell % nr});
        }
    }
    if (!best.has_witness) best.value = top;  // unreachable: full relation always projects fully
    return best;
}

RelationCoupling enumerate_set_couplings(const PseudometricSpace& space, const StateSet& s1,
                                         const StateSet& s2) {
    if (space.size() > 5 || s1.size() > 3 || s2.size() > 3)
        throw std::invalid_argument("set coupling enumeration: instance too large");
    for (std::size_t x : s1)
        if (x >= space.size()) throw std::invalid_argument("set coupling enumeration: element not in carrier");
    for (std::size_t x : s2)
        if (x >= space.size()) throw std::invalid_argument("set coupling enumeration: element not in carrier");
    std::vector<double> cost(s1.size() * s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        for (std::size_t j = 0; j < s2.size(); ++j) cost[i * s2.size() + j] = space.dist(s1[i], s2[j]);
    return min_max_relation(cost, s1.size(), s2.size(), space.top());
}

VertexCoupling enumerate_dist_couplings(const PseudometricSpace& space, const FinDist& p1,
                                        const FinDist& p2) {
    const auto& e1 = p1.entries();
    const auto& e2 = p2.entries();
    const std::size_t n = e1.size(), m = e2.size();
    if (n > 3 || m > 3) throw std::invalid_argument("vertex enumeration: support too large");
    if (p1.max_index() >= space.size() || p2.max_index() >= space.size())
        throw std::invalid_argument("vertex enumeration: support not in carrier");

    std::vector<double> cost(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j) cost[i * m + j] = space.dist(e1[i].first, e2[j].first);

    const std::size_t cells = n * m;
    const std::size_t basis_size = n + m - 1;
    VertexCoupling best;
    best.value = kInf;

    // Every vertex of the transportation polytope is the flow of some
    // spanning-tree basis; enumerate them all and keep the feasible minimum.
    for (std::size_t mask = 0; mask < (std::size_t{1} << cells); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != basis_size) continue;

        std::vector<std::pair<std::size_t, std::size_t>> edges;  // (supplier, n + consumer)
        for (std::size_t cell = 0; cell < cells; ++cell)
            if (mask & (std::size_t{1} << cell)) edges.push_back({cell / m, n + cell % m});

        // Connectivity over n+m nodes with n+m-1 edges implies a tree.
        std::vector<std::size_t> parent(n + m);
        for (std::size_t v = 0; v < n + m; ++v) parent[v] = v;
        std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
            while (parent[v] != v) v = parent[v] = parent[parent[v]];
            return v;
        };
        bool acyclic = true;
        for (auto [u, v] : edges) {
            const std::size_t ru = find(u), rv = find(v);
            if (ru == rv) {
                acyclic = false;
                break;
            }
            parent[ru] = rv;
        }
        if (!acyclic) continue;

        // Leaf peeling determines the unique flow of the basis.
        std::vector<double> rem(n + m);
        for (std::size_t i = 0; i < n; ++i) rem[i] = e1[i].second;
        for (std::size_t j = 0; j < m; ++j) rem[n + j] = e2[j].second;
        std::vector<int> degree(n + m, 0);
        std::vector<bool> used(edges.size(), false);
        for (auto [u, v] : edges) {
            ++degree[u];
            ++degree[v];
        }
        std::vector<double> flow(edges.size(), 0.0);
        bool feasible = true;
        for (std::size_t round = 0; round < edges.size(); ++round) {
            std::ptrdiff_t pick = -1;
            for (std::size_t e = 0; e < edges.size() && pick < 0; ++e) {
                if (used[e]) continue;
                if (degree[edges[e].first] == 1 || degree[edges[e].second] == 1)
                    pick = static_cast<std::ptrdiff_t>(e);
            }
            if (pick < 0) {
                feasible = false;
                break;
            }
            const std::size_t e = static_cast<std::size_t>(pick);
            auto [u, v] = edges[e];
            const std::size_t leaf = degree[u] == 1 ? u : v;
            const std::size_t other = degree[u] == 1 ? v : u;
            flow[e] = rem[leaf];
            if (flow[e] < -1e-9) {
                feasible = false;
                break;
            }
            rem[other] -= rem[leaf];
            rem[leaf] = 0.0;
            used[e] = true;
            --degree[u];
            --degree[v];
        }
        if (!feasible) continue;

        double objective = 0.0;
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const double f = std::max(flow[e], 0.0);
            if (f == 0.0) continue;  // avoids inf * 0 when the ground metric has top = inf
            objective += cost[edges[e].first * m + (edges[e].second - n)] * f;
        }
        if (objective < best.value) {
            best.value = objective;
            best.flow.assign(n * m, 0.0);
            for (std::size_t e = 0; e < edges.size(); ++e)
                best.flow[edges[e].first * m + (edges[e].second - n)] = std::max(flow[e], 0.0);
        }
    }
    if (!std::isfinite(best.value) && !std::isinf(space.top()))
        throw std::runtime_error("vertex enumeration: no feasible basis found");
    return best;
}

}  // namespace pmet
