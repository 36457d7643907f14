#include <stdexcept>
#include "doctest.h"
#include "pmet/lifting.hpp"
#include "pmet/sampling.hpp"

using namespace pmet;

TEST_CASE("the functor zoo is well-behaved") {
    const FunctorId all[] = {FunctorId::PowFinMax,   FunctorId::DistExpectation,
                             FunctorId::InputMax,    FunctorId::InputSum,
                             FunctorId::ProductMax,  FunctorId::ProductConvex};
    std::uint64_t seed = 100;
    for (FunctorId id : all) {
        const CheckReport report = check_well_behaved(id, 1000, seed++);
        CHECK_MESSAGE(report.all_passed(), report.first_failure());
    }
}

TEST_CASE("well-behavedness under infinite top") {
    CHECK(check_well_behaved(FunctorId::PowFinMax, 500, 9, kInf).all_passed());
    CHECK(check_well_behaved(FunctorId::InputSum, 500, 10, kInf).all_passed());
}

TEST_CASE("sample count validation") {
    CHECK_THROWS_AS(check_well_behaved(FunctorId::PowFinMax, 0, 1), std::invalid_argument);
}

TEST_CASE("a shifted evaluation breaks the zero condition") {
    const auto broken = [](const std::vector<double>& s) {
        double m = 0.0;
        for (double v : s) m = std::max(m, v);
        return m + 0.1;
    };
    const CheckReport report = check_well_behaved_input(broken, 2, 200, 5);
    CHECK(!report.all_passed());
    bool w3_failed = false;
    for (const auto& item : report.items)
        if (item.name == "W3" && !item.passed) {
            w3_failed = true;
            CHECK(!item.witness.empty());
        }
    CHECK(w3_failed);
}

TEST_CASE("compositionality of the concrete composites") {
    Sampler rng(321);
    SUBCASE("dist over dist") {
        const auto space = random_space(rng, 4, 1.0);
        const CheckReport report = compositionality_check(CompositePair::DistDist, space, 50, 17);
        CHECK_MESSAGE(report.all_passed(), report.first_failure());
    }
    SUBCASE("powerset over powerset") {
        const auto space = random_space(rng, 3, 1.0);
        const CheckReport report = compositionality_check(CompositePair::PowPow, space, 50, 18);
        CHECK_MESSAGE(report.all_passed(), report.first_failure());
    }
    SUBCASE("powerset over the machine endofunctor") {
        const auto space = random_space(rng, 4, 1.0);
        LiftParams params;
        params.c = 0.5;
        const CheckReport report =
            compositionality_check(CompositePair::PowM2, space, 50, 19, params);
        CHECK_MESSAGE(report.all_passed(), report.first_failure());
    }
    SUBCASE("powpow carrier guard") {
        const auto space = random_space(rng, 6, 1.0);
        CHECK_THROWS_AS(compositionality_check(CompositePair::PowPow, space, 5, 1),
                        std::invalid_argument);
    }
}
