#include <stdexcept>
#include "doctest.h"
#include "pmet/metric_space.hpp"
#include "pmet/sampling.hpp"

using namespace pmet;

TEST_CASE("euclidean extended distance") {
    CHECK(euclidean_ext(0.25, 0.75) == 0.5);
    CHECK(euclidean_ext(kInf, kInf) == 0.0);
    CHECK(euclidean_ext(1.0, kInf) == kInf);
    CHECK(euclidean_ext(kInf, 0.0) == kInf);
}

TEST_CASE("discrete metric") {
    const auto one = PseudometricSpace::discrete({"x"}, 1.0);
    CHECK(one.dist(0, 0) == 0.0);

    const auto two = PseudometricSpace::discrete({"x", "y"}, 1.0);
    CHECK(two.dist(0, 1) == 1.0);

    const auto three = PseudometricSpace::discrete({"x", "y", "z"}, kInf);
    CHECK(three.dist(0, 2) == kInf);
    CHECK(three.dist(1, 1) == 0.0);

    CHECK_THROWS_AS(PseudometricSpace::discrete({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PseudometricSpace::discrete({"x"}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(PseudometricSpace::discrete({"x"}, -2.0), std::invalid_argument);
}

TEST_CASE("euclidean interval metric") {
    const auto s = PseudometricSpace::euclidean_interval({0.0, 0.5}, 1.0);
    CHECK(s.dist(0, 1) == 0.5);

    const auto dup = PseudometricSpace::euclidean_interval({0.3, 0.3}, 1.0);
    CHECK(dup.dist(0, 1) == 0.0);

    const auto inf = PseudometricSpace::euclidean_interval({1.0, kInf}, kInf);
    CHECK(inf.dist(0, 1) == kInf);
    CHECK(inf.dist(1, 1) == 0.0);

    CHECK_THROWS_AS(PseudometricSpace::euclidean_interval({1.5}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(PseudometricSpace::euclidean_interval({-0.1}, 1.0), std::invalid_argument);
}

TEST_CASE("euclidean interval metric separates points") {
    const std::vector<double> points{0.0, 0.1, 0.4, 0.9, 1.0};
    const auto s = PseudometricSpace::euclidean_interval(points, 1.0);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j)
            CHECK((s.dist(i, j) == 0.0) == (points[i] == points[j]));
}

TEST_CASE("validate_pseudometric accepts constructor output") {
    CHECK(validate_pseudometric(PseudometricSpace::discrete({"a", "b", "c"}, 1.0)).empty());
    CHECK(validate_pseudometric(PseudometricSpace::discrete({"a", "b"}, kInf)).empty());
    CHECK(validate_pseudometric(PseudometricSpace::euclidean_interval({0.0, 0.25, 1.0}, 1.0)).empty());
    CHECK(validate_pseudometric(PseudometricSpace::euclidean_interval({0.5, kInf}, kInf)).empty());
}

TEST_CASE("validate_pseudometric reports witnesses") {
    SUBCASE("symmetry") {
        const PseudometricSpace s({"x", "y"}, 1.0, {0.0, 1.0, 0.0, 0.0});
        const auto report = validate_pseudometric(s);
        REQUIRE(!report.empty());
        bool found = false;
        for (const auto& v : report)
            if (v.kind == AxiomKind::Symmetry && v.i == 0 && v.j == 1) found = true;
        CHECK(found);
    }
    SUBCASE("triangle") {
        // d(a,c) = 5 > d(a,b) + d(b,c) = 2
        const PseudometricSpace s({"a", "b", "c"}, 10.0,
                                  {0.0, 1.0, 5.0, 1.0, 0.0, 1.0, 5.0, 1.0, 0.0});
        const auto report = validate_pseudometric(s);
        REQUIRE(!report.empty());
        bool found = false;
        for (const auto& v : report)
            if (v.kind == AxiomKind::Triangle && v.k == 1) found = true;
        CHECK(found);
        CHECK(!report.front().describe(s).empty());
    }
    SUBCASE("reflexivity") {
        const PseudometricSpace s({"x"}, 1.0, {0.5});
        const auto report = validate_pseudometric(s);
        REQUIRE(!report.empty());
        CHECK(report.front().kind == AxiomKind::Reflexivity);
    }
    SUBCASE("range") {
        const PseudometricSpace s({"x", "y"}, 1.0, {0.0, 3.0, 3.0, 0.0});
        bool found = false;
        for (const auto& v : validate_pseudometric(s))
            if (v.kind == AxiomKind::Range) found = true;
        CHECK(found);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(validate_distance_matrix(3, {0.0, 1.0}, 1.0), std::invalid_argument);
        CHECK_THROWS_AS(PseudometricSpace({"x", "y"}, 1.0, {0.0}), std::invalid_argument);
    }
}

TEST_CASE("random spaces satisfy the axioms") {
    Sampler rng(2024);
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 2 + rng.index(7);
        const double top = rng.chance(0.25) ? kInf : 1.0;
        CHECK(validate_pseudometric(random_space(rng, n, top)).empty());
    }
}
