#include <stdexcept>
#include <cmath>

#include "doctest.h"
#include "pmet/oracle.hpp"
#include "pmet/sampling.hpp"
#include "pmet/transport.hpp"

using namespace pmet;

namespace {

NfaCoalgebra aa_chain() {
    NfaCoalgebra nfa;
    nfa.states = {"u", "u1", "uacc"};
    nfa.alphabet = {"a"};
    nfa.accepting = {0, 0, 1};
    nfa.succ = {{{1}}, {{2}}, {{}}};
    nfa.validate();
    return nfa;
}

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

}  // namespace

TEST_CASE("word indexing is length-lexicographic") {
    WordSemantics sem;
    sem.alphabet_size = 2;
    sem.max_len = 3;
    CHECK(WordSemantics::word_count(2, 3) == 15);
    CHECK(sem.word_at(0).empty());
    CHECK(sem.word_at(1) == std::vector<std::size_t>{0});
    CHECK(sem.word_at(2) == std::vector<std::size_t>{1});
    CHECK(sem.word_at(3) == std::vector<std::size_t>{0, 0});
    CHECK(sem.word_at(6) == std::vector<std::size_t>{1, 1});
    CHECK(sem.length_of(6) == 2);
    CHECK(sem.length_of(7) == 3);
    CHECK(WordSemantics::word_count(1, 5) == 6);
    CHECK_THROWS_AS(WordSemantics::word_count(2, -1), std::invalid_argument);
}

TEST_CASE("nfa language") {
    SUBCASE("empty seed accepts nothing") {
        const WordSemantics sem = nfa_language(aa_chain(), {}, 4);
        for (double v : sem.valuation) CHECK(v == 0.0);
    }
    SUBCASE("accepting self-loop accepts everything") {
        NfaCoalgebra nfa;
        nfa.states = {"z"};
        nfa.alphabet = {"a"};
        nfa.accepting = {1};
        nfa.succ = {{{0}}};
        const WordSemantics sem = nfa_language(nfa, {0}, 5);
        for (double v : sem.valuation) CHECK(v == 1.0);
    }
    SUBCASE("the aa chain accepts exactly aa") {
        const WordSemantics sem = nfa_language(aa_chain(), {0}, 4);
        for (std::size_t i = 0; i < sem.valuation.size(); ++i)
            CHECK(sem.valuation[i] == (i == 2 ? 1.0 : 0.0));  // index 2 is the word aa
    }
    SUBCASE("undeclared seed") {
        CHECK_THROWS_AS(nfa_language(aa_chain(), {9}, 2), std::invalid_argument);
    }
}

TEST_CASE("pa word weights") {
    const PaCoalgebra pa = output_chain();
    SUBCASE("epsilon weight is the seed expectation") {
        const WordSemantics sem = pa_word_weights(pa, FinDist::dirac(1), 0);
        CHECK(sem.valuation[0] == 1.0);
        const WordSemantics mix = pa_word_weights(pa, FinDist({{0, 0.5}, {1, 0.5}}), 0);
        CHECK(mix.valuation[0] == doctest::Approx(0.5));
    }
    SUBCASE("chain walk") {
        const WordSemantics sem = pa_word_weights(pa, FinDist::dirac(0), 4);
        CHECK(sem.valuation[0] == 0.0);
        CHECK(sem.valuation[1] == 1.0);  // word a
        CHECK(sem.valuation[2] == 0.0);  // word aa
        CHECK(sem.valuation[3] == 0.0);
    }
    SUBCASE("incremental walk equals recomputation from scratch") {
        Sampler rng(1199);
        for (int it = 0; it < 20; ++it) {
            const PaCoalgebra random = random_pa(rng, 5, 2, false);
            const WordSemantics sem = pa_word_weights(random, FinDist::dirac(0), 5);
            const std::size_t index = rng.index(sem.valuation.size());
            const auto word = sem.word_at(index);
            // scratch recomputation with a plain weight vector
            std::vector<double> w(random.state_count(), 0.0);
            w[0] = 1.0;
            for (std::size_t a : word) {
                std::vector<double> next(random.state_count(), 0.0);
                for (std::size_t x = 0; x < random.state_count(); ++x)
                    for (const auto& [y, v] : random.succ[x][a].entries()) next[y] += w[x] * v;
                w = next;
            }
            double expected = 0.0;
            for (std::size_t x = 0; x < random.state_count(); ++x)
                expected += w[x] * random.output[x];
            CHECK(sem.valuation[index] == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-form nfa distance") {
    const WordSemantics a = nfa_language(aa_chain(), {0}, 6);
    SUBCASE("identical semantics") {
        const NfaClosedForm r = closed_form_nfa_distance(a, a, 0.5);
        CHECK(r.value == 0.0);
        CHECK(!r.exact);
    }
    SUBCASE("first disagreement at length two") {
        const WordSemantics empty = nfa_language(aa_chain(), {}, 6);
        const NfaClosedForm r = closed_form_nfa_distance(a, empty, 0.5);
        CHECK(r.value == 0.25);
        CHECK(r.exact);
    }
    SUBCASE("disagreement at epsilon") {
        const WordSemantics acc = nfa_language(aa_chain(), {2}, 6);
        const WordSemantics empty = nfa_language(aa_chain(), {}, 6);
        const NfaClosedForm r = closed_form_nfa_distance(acc, empty, 0.5);
        CHECK(r.value == 1.0);
        CHECK(r.exact);
    }
    SUBCASE("mismatched bounds") {
        const WordSemantics shorter = nfa_language(aa_chain(), {0}, 3);
        CHECK_THROWS_AS(closed_form_nfa_distance(a, shorter, 0.5), std::invalid_argument);
    }
}

TEST_CASE("closed-form pa distance") {
    const PaCoalgebra pa = output_chain();
    const WordSemantics s0 = pa_word_weights(pa, FinDist::dirac(0), 10);
    const WordSemantics s1 = pa_word_weights(pa, FinDist::dirac(1), 10);
    SUBCASE("identical semantics") {
        const PaClosedForm r = closed_form_pa_distance(s0, s0, 0.5, 0.5, 1);
        CHECK(r.value == 0.0);
        CHECK(r.tail_bound > 0.0);
    }
    SUBCASE("chain total variation") {
        // c1 = 1/2, c2 = |A| = 1: 0.5 * (|0-1| + |1-0|) = 1, uncertified tail
        const PaClosedForm r = closed_form_pa_distance(s0, s1, 0.5, 1.0, 1);
        CHECK(r.value == 1.0);
        CHECK(std::isinf(r.tail_bound));
    }
    SUBCASE("single differing weight") {
        PaCoalgebra twin = output_chain();
        twin.output = {0.4, 0.0, 0.0};
        const WordSemantics t0 = pa_word_weights(twin, FinDist::dirac(0), 10);
        const WordSemantics t2 = pa_word_weights(twin, FinDist::dirac(2), 10);
        const PaClosedForm r = closed_form_pa_distance(t0, t2, 0.5, 0.5, 1);
        CHECK(r.value == doctest::Approx(0.2));  // 0.5 * 0.4 at epsilon only
        CHECK(r.tail_bound <= 0.5 * std::pow(0.5, 11) / 0.5 + 1e-15);
    }
    SUBCASE("mismatched bounds") {
        const WordSemantics shorter = pa_word_weights(pa, FinDist::dirac(0), 4);
        CHECK_THROWS_AS(closed_form_pa_distance(s0, shorter, 0.5, 0.5, 1), std::invalid_argument);
    }
}

TEST_CASE("set coupling enumeration") {
    const auto space = PseudometricSpace::discrete({"x", "y", "z"}, 1.0);
    SUBCASE("singleton pair") {
        const RelationCoupling r = enumerate_set_couplings(space, {0}, {0});
        CHECK(r.value == 0.0);
        REQUIRE(r.has_witness);
        CHECK(r.relation == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}});
    }
    SUBCASE("empty vs nonempty") {
        const RelationCoupling r = enumerate_set_couplings(space, {}, {0});
        CHECK(r.value == 1.0);  // top
        CHECK(!r.has_witness);
    }
    SUBCASE("instance guards") {
        const auto big = PseudometricSpace::discrete({"a", "b", "c", "d", "e", "f"}, 1.0);
        CHECK_THROWS_AS(enumerate_set_couplings(big, {0}, {1}), std::invalid_argument);
        CHECK_NOTHROW(enumerate_set_couplings(space, {0, 1, 2}, {0, 1, 2}));
    }
}

TEST_CASE("vertex enumeration matches the flow solver") {
    Sampler rng(5611);
    for (int it = 0; it < 60; ++it) {
        const std::size_t n = 2 + rng.index(4);
        const auto space = random_space(rng, n, 1.0);
        const FinDist p1 = random_dist(rng, n, 3);
        const FinDist p2 = random_dist(rng, n, 3);
        const VertexCoupling vertex = enumerate_dist_couplings(space, p1, p2);

        TransportProblem problem;
        problem.rows = p1.entries().size();
        problem.cols = p2.entries().size();
        problem.cost.resize(problem.rows * problem.cols);
        for (std::size_t i = 0; i < problem.rows; ++i)
            for (std::size_t j = 0; j < problem.cols; ++j)
                problem.cost[i * problem.cols + j] =
                    space.dist(p1.entries()[i].first, p2.entries()[j].first);
        for (const auto& [x, w] : p1.entries()) problem.supply.push_back(w);
        for (const auto& [x, w] : p2.entries()) problem.demand.push_back(w);
        const double solver = solve_transportation(problem).objective;
        CHECK(std::abs(vertex.value - solver) <= 1e-9);
    }
}
