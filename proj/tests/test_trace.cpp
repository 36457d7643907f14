#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "pmet/oracle.hpp"
#include "pmet/sampling.hpp"
#include "pmet/trace.hpp"

using namespace pmet;

namespace {

// L(u) = {aa} (3-state chain) vs L(v) = {} (2-state chain), one shared alphabet
NfaCoalgebra aa_vs_empty() {
    NfaCoalgebra nfa;
    nfa.states = {"u", "u1", "uacc", "v", "v1"};
    nfa.alphabet = {"a"};
    nfa.accepting = {0, 0, 1, 0, 0};
    nfa.succ = {{{1}}, {{2}}, {{}}, {{4}}, {{}}};
    nfa.validate();
    return nfa;
}

NfaCoalgebra classic_pair() {
    NfaCoalgebra nfa;
    nfa.states = {"p", "q1", "q2", "pp", "qq", "f"};
    nfa.alphabet = {"a", "b", "c"};
    nfa.accepting = {0, 0, 0, 0, 0, 1};
    nfa.succ.assign(6, std::vector<StateSet>(3));
    nfa.succ[0][0] = {1, 2};  // p -a-> {q1, q2}
    nfa.succ[1][1] = {5};     // q1 -b-> f
    nfa.succ[2][2] = {5};     // q2 -c-> f
    nfa.succ[3][0] = {4};     // pp -a-> {qq}
    nfa.succ[4][1] = {5};     // qq -b-> f
    nfa.succ[4][2] = {5};     // qq -c-> f
    nfa.validate();
    return nfa;
}

// q0 (out 0) -> q1 (out 1) -> q2 (out 0, absorbing)
PaCoalgebra output_chain() {
    PaCoalgebra pa;
    pa.states = {"q0", "q1", "q2"};
    pa.alphabet = {"a"};
    pa.output = {0.0, 1.0, 0.0};
    pa.succ.push_back({FinDist::dirac(1)});
    pa.succ.push_back({FinDist::dirac(2)});
    pa.succ.push_back({FinDist::dirac(2)});
    pa.validate();
    return pa;
}

LiftParams nfa_params(double c = 0.5) {
    LiftParams p;
    p.eval = EvalKind::Max;
    p.c = c;
    return p;
}

LiftParams pa_params(double c1 = 0.5, double c2 = 0.5, double top = 1.0) {
    LiftParams p;
    p.eval = EvalKind::Convex;
    p.c1 = c1;
    p.c2 = c2;
    p.top = top;
    return p;
}

}  // namespace

TEST_CASE("nfa trace distance on the chain pair") {
    const NfaCoalgebra nfa = aa_vs_empty();
    const NfaTraceResult result = nfa_trace_distance(nfa, nfa_params());
    CHECK(result.value(0, 3) == 0.25);  // shortest distinguishing word is aa
    CHECK(result.table.converged);
    CHECK(result.table.error_bound == 0.0);

    // epsilon distinguishes an accepting from a non-accepting state
    CHECK(result.value(2, 3) == 1.0);
    // u1 accepts exactly "a", v1 accepts nothing: first disagreement at length one
    CHECK(result.value(1, 4) == 0.5);
    // identical languages (both empty) sit at distance zero
    CHECK(result.value(3, 4) == 0.0);
}

TEST_CASE("nfa trace distance parameter validation") {
    const NfaCoalgebra nfa = aa_vs_empty();
    CHECK_THROWS_AS(nfa_trace_distance(nfa, nfa_params(1.0)), std::invalid_argument);
    CHECK_THROWS_AS(nfa_trace_distance(nfa, nfa_params(0.0)), std::invalid_argument);
    LiftParams bad_top = nfa_params();
    bad_top.top = kInf;
    CHECK_THROWS_AS(nfa_trace_distance(nfa, bad_top), std::invalid_argument);
    const std::vector<std::pair<std::size_t, std::size_t>> bad_seed{{0, 99}};
    CHECK_THROWS_AS(nfa_trace_distance(nfa, nfa_params(), &bad_seed), std::invalid_argument);
}

TEST_CASE("nfa trace iteration is a monotone pseudometric chain") {
    Sampler rng(640);
    for (int it = 0; it < 25; ++it) {
        const NfaCoalgebra nfa = random_nfa(rng, 6, 3);
        std::vector<double> previous;
        bool monotone = true, axioms = true;
        const auto observer = [&](const DistTable& table) {
            if (!previous.empty())
                for (std::size_t k = 0; k < table.values.size(); ++k)
                    if (table.values[k] < previous[k]) monotone = false;
            if (!validate_distance_matrix(table.size(), table.values, 1.0).empty()) axioms = false;
            previous = table.values;
        };
        nfa_trace_distance(nfa, nfa_params(), nullptr, observer);
        CHECK(monotone);
        CHECK(axioms);
    }
}

TEST_CASE("nfa trace values live on the power grid") {
    Sampler rng(99);
    for (int it = 0; it < 30; ++it) {
        const NfaCoalgebra nfa = random_nfa(rng, 6, 3);
        const double c = 0.5;
        const NfaTraceResult result = nfa_trace_distance(nfa, nfa_params(c));
        std::vector<double> grid{0.0};
        double power = 1.0;
        for (int k = 0; k <= result.table.depth + 1; ++k) {
            grid.push_back(power);
            power *= c;
        }
        for (double v : result.table.values) {
            bool on_grid = false;
            for (double g : grid)
                if (v == g) on_grid = true;  // exact membership, no tolerance
            CHECK(on_grid);
        }
    }
}

TEST_CASE("nfa trace fixpoint is exact") {
    Sampler rng(1000);
    for (int it = 0; it < 20; ++it) {
        const NfaCoalgebra nfa = random_nfa(rng, 5, 2);
        const NfaTraceResult result = nfa_trace_distance(nfa, nfa_params());
        REQUIRE(result.table.converged);

        // one more update reproduces the table bit for bit
        const std::size_t m = result.subsets.size();
        for (std::size_t i = 0; i < m; ++i) {
            const NfaStep si = determinize_step_nfa(nfa, result.subsets[i]);
            for (std::size_t j = 0; j < m; ++j) {
                const NfaStep sj = determinize_step_nfa(nfa, result.subsets[j]);
                double v = si.output != sj.output ? 1.0 : 0.0;
                for (std::size_t a = 0; a < nfa.alphabet_size(); ++a) {
                    std::ptrdiff_t ti = -1, tj = -1;
                    for (std::size_t k = 0; k < m; ++k) {
                        if (result.subsets[k] == si.succ[a]) ti = static_cast<std::ptrdiff_t>(k);
                        if (result.subsets[k] == sj.succ[a]) tj = static_cast<std::ptrdiff_t>(k);
                    }
                    REQUIRE(ti >= 0);
                    REQUIRE(tj >= 0);
                    v = std::max(v, 0.5 * result.table.at(static_cast<std::size_t>(ti),
                                                          static_cast<std::size_t>(tj)));
                }
                CHECK(v == result.table.at(i, j));
            }
        }
    }
}

TEST_CASE("nfa branching distance") {
    SUBCASE("syntactically equal rows") {
        NfaCoalgebra nfa;
        nfa.states = {"x", "y"};
        nfa.alphabet = {"a"};
        nfa.accepting = {0, 0};
        nfa.succ = {{{0, 1}}, {{0, 1}}};
        const DistTable t = nfa_branching_distance(nfa, nfa_params(), 1e-6);
        CHECK(t.at(0, 1) == 0.0);
        CHECK(t.converged);
    }
    SUBCASE("output mismatch dominates") {
        NfaCoalgebra nfa;
        nfa.states = {"x", "y"};
        nfa.alphabet = {"a"};
        nfa.accepting = {1, 0};
        nfa.succ = {{{}}, {{}}};
        CHECK(nfa_branching_distance(nfa, nfa_params(), 1e-6).at(0, 1) == 1.0);
    }
    SUBCASE("classic pair separates branching from trace") {
        const NfaCoalgebra nfa = classic_pair();
        const DistTable branching = nfa_branching_distance(nfa, nfa_params(), 1e-6);
        CHECK(branching.at(0, 3) == 0.25);  // missing c-move under q1 costs Hausdorff 1
        const NfaTraceResult trace = nfa_trace_distance(nfa, nfa_params());
        CHECK(trace.value(0, 3) == 0.0);
    }
    SUBCASE("monotone pseudometric chain") {
        Sampler rng(460);
        for (int it = 0; it < 15; ++it) {
            const NfaCoalgebra nfa = random_nfa(rng, 6, 3);
            std::vector<double> previous;
            bool monotone = true, axioms = true;
            const auto observer = [&](const DistTable& table) {
                if (!previous.empty())
                    for (std::size_t k = 0; k < table.values.size(); ++k)
                        if (table.values[k] < previous[k]) monotone = false;
                if (!validate_distance_matrix(table.size(), table.values, 1.0).empty())
                    axioms = false;
                previous = table.values;
            };
            nfa_branching_distance(nfa, nfa_params(), 1e-6, observer);
            CHECK(monotone);
            CHECK(axioms);
        }
    }
}

TEST_CASE("pa trace distance") {
    const PaCoalgebra pa = output_chain();
    SUBCASE("identical states") {
        const PaTraceValue v = pa_trace_distance(pa, pa_params(), 1, 1, 1e-9, 0);
        CHECK(v.value == 0.0);
        CHECK(v.error_bound == 0.0);
        CHECK(v.converged);
    }
    SUBCASE("total variation on the chain") {
        // top = inf, c1 = 1/2, c2 = |A| = 1: weights differ by 1 at epsilon and at a
        const PaTraceValue v =
            pa_trace_distance(pa, pa_params(0.5, 1.0, kInf), 0, 1, std::nullopt, 10);
        CHECK(v.value == 1.0);
        CHECK(v.error_bound == 0.0);  // both runs are absorbed, detected identical
        CHECK(v.converged);
    }
    SUBCASE("identical rows give zero with a tail certificate") {
        PaCoalgebra twin;
        twin.states = {"x", "y", "z"};
        twin.alphabet = {"a"};
        twin.output = {0.7, 0.7, 0.2};
        twin.succ.push_back({FinDist::dirac(2)});
        twin.succ.push_back({FinDist::dirac(2)});
        twin.succ.push_back({FinDist::dirac(2)});
        const PaTraceValue v = pa_trace_distance(twin, pa_params(), 0, 1, 1e-9, 0);
        CHECK(v.value == 0.0);
        CHECK(v.error_bound == 0.0);
    }
    SUBCASE("epsilon needs c2 below one") {
        CHECK_THROWS_AS(pa_trace_distance(pa, pa_params(0.5, 1.0, kInf), 0, 1, 1e-6, 0),
                        std::invalid_argument);
        CHECK_THROWS_AS(pa_trace_distance(pa, pa_params(), 0, 1, -1.0, 0), std::invalid_argument);
    }
    SUBCASE("certified tail bound") {
        PaCoalgebra loop;  // two exchanging states, never identical
        loop.states = {"x", "y"};
        loop.alphabet = {"a"};
        loop.output = {1.0, 0.0};
        loop.succ.push_back({FinDist::dirac(1)});
        loop.succ.push_back({FinDist::dirac(0)});
        const PaTraceValue v = pa_trace_distance(loop, pa_params(), 0, 1, 1e-6, 0);
        CHECK(v.error_bound <= 1e-6);
        CHECK(!v.converged);
        // geometric series: sum_k 0.5 * 0.5^k = 1
        CHECK(v.value == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("pa branching distance") {
    SUBCASE("identical rows") {
        PaCoalgebra twin;
        twin.states = {"x", "y"};
        twin.alphabet = {"a"};
        twin.output = {0.3, 0.3};
        twin.succ.push_back({FinDist::dirac(0)});
        twin.succ.push_back({FinDist::dirac(0)});
        const DistTable t = pa_branching_distance(twin, pa_params(), 1e-6);
        CHECK(t.at(0, 1) == 0.0);
        CHECK(t.converged);
    }
    SUBCASE("only the output term survives") {
        PaCoalgebra pa;
        pa.states = {"x", "y", "z"};
        pa.alphabet = {"a"};
        pa.output = {1.0, 0.0, 0.5};
        pa.succ.push_back({FinDist::dirac(2)});
        pa.succ.push_back({FinDist::dirac(2)});
        pa.succ.push_back({FinDist::dirac(2)});
        const DistTable t = pa_branching_distance(pa, pa_params(), 1e-9);
        CHECK(t.at(0, 1) == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(t.converged);  // successor term vanishes at every iteration
    }
    SUBCASE("c2 at one is rejected") {
        CHECK_THROWS_AS(pa_branching_distance(output_chain(), pa_params(0.5, 1.0, kInf), 1e-6),
                        std::invalid_argument);
    }
    SUBCASE("monotone pseudometric chain") {
        Sampler rng(22);
        for (int it = 0; it < 10; ++it) {
            const PaCoalgebra pa = random_pa(rng, 5, 2, false);
            std::vector<double> previous;
            bool monotone = true, axioms = true;
            const auto observer = [&](const DistTable& table) {
                if (!previous.empty())
                    for (std::size_t k = 0; k < table.values.size(); ++k)
                        if (table.values[k] < previous[k] - 1e-12) monotone = false;
                if (!validate_distance_matrix(table.size(), table.values, 1.0).empty())
                    axioms = false;
                previous = table.values;
            };
            pa_branching_distance(pa, pa_params(), 1e-6, observer);
            CHECK(monotone);
            CHECK(axioms);
        }
    }
}

TEST_CASE("pa trace truncation certificate on acyclic automata") {
    Sampler rng(31337);
    for (int it = 0; it < 15; ++it) {
        const PaCoalgebra pa = random_pa(rng, 6, 2, true);
        const std::size_t x = rng.index(pa.state_count());
        const std::size_t y = rng.index(pa.state_count());
        const PaTraceValue engine = pa_trace_distance(pa, pa_params(), x, y, 1e-9, 0);
        CHECK(engine.error_bound == 0.0);

        const WordSemantics s1 = pa_word_weights(pa, dist_unit(x), 10);
        const WordSemantics s2 = pa_word_weights(pa, dist_unit(y), 10);
        const PaClosedForm oracle = closed_form_pa_distance(s1, s2, 0.5, 0.5, pa.alphabet_size());
        CHECK(std::abs(engine.value - oracle.value) <= 1e-9);
    }
}

TEST_CASE("branching bounds trace") {
    SUBCASE("classic pair") {
        const BranchTraceReport report =
            compare_branching_trace(classic_pair(), nfa_params(), 1e-6);
        CHECK(!report.any_violation);
        bool found = false;
        for (const auto& entry : report.pairs)
            if (entry.x == 0 && entry.y == 3) {
                found = true;
                CHECK(entry.branching == 0.25);
                CHECK(entry.trace == 0.0);
            }
        CHECK(found);
    }
    SUBCASE("random nondeterministic automata") {
        Sampler rng(272);
        for (int it = 0; it < 30; ++it) {
            const BranchTraceReport report =
                compare_branching_trace(random_nfa(rng, 6, 3), nfa_params(), 1e-6);
            CHECK(!report.any_violation);
        }
    }
    SUBCASE("random probabilistic automata") {
        Sampler rng(273);
        for (int it = 0; it < 10; ++it) {
            const BranchTraceReport report =
                compare_branching_trace(random_pa(rng, 5, 2, false), pa_params(), 1e-4);
            CHECK(!report.any_violation);
        }
    }
}
