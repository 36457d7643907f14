#include <stdexcept>
#include "doctest.h"
#include "pmet/oracle.hpp"
#include "pmet/sampling.hpp"
#include "pmet/transport.hpp"

using namespace pmet;

namespace {

TransportProblem make_problem(std::size_t n, std::size_t m, std::vector<double> cost,
                              std::vector<double> supply, std::vector<double> demand) {
    TransportProblem p;
    p.rows = n;
    p.cols = m;
    p.cost = std::move(cost);
    p.supply = std::move(supply);
    p.demand = std::move(demand);
    return p;
}

// Kantorovich dual of a transportation instance over one shared carrier:
// maximize sum f(x) (p1 - p2)(x) over nonexpansive f bounded in [0, top].
double kantorovich_dual(const PseudometricSpace& space, const std::vector<double>& p1,
                        const std::vector<double>& p2) {
    const std::size_t n = space.size();
    std::vector<double> objective(n);
    for (std::size_t i = 0; i < n; ++i) objective[i] = p1[i] - p2[i];
    std::vector<LpConstraint> constraints;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            LpConstraint con;
            con.coeffs.assign(n, 0.0);
            con.coeffs[x] = 1.0;
            con.coeffs[y] = -1.0;
            con.rhs = space.dist(x, y);
            constraints.push_back(std::move(con));
        }
    std::vector<LpBounds> bounds(n, LpBounds{0.0, space.top()});
    return solve_dense_lp(LpSense::Maximize, objective, constraints, bounds).value;
}

double transport_over_space(const PseudometricSpace& space, const std::vector<double>& p1,
                            const std::vector<double>& p2) {
    const std::size_t n = space.size();
    TransportProblem problem = make_problem(n, n, std::vector<double>(n * n), p1, p2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) problem.cost[i * n + j] = space.dist(i, j);
    return solve_transportation(problem).objective;
}

std::vector<double> dense_weights(Sampler& rng, std::size_t n) {
    const FinDist d = random_dist(rng, n, static_cast<int>(n));
    std::vector<double> w(n, 0.0);
    for (const auto& [x, v] : d.entries()) w[x] = v;
    return w;
}

}  // namespace

TEST_CASE("transportation on a single point") {
    const auto plan = solve_transportation(make_problem(1, 1, {0.0}, {1.0}, {1.0}));
    CHECK(plan.at(0, 0) == doctest::Approx(1.0));
    CHECK(plan.objective == 0.0);
}

TEST_CASE("transportation 2x2 split") {
    // all mass at the first point, half must move at cost 1
    const auto plan =
        solve_transportation(make_problem(2, 2, {0.0, 1.0, 1.0, 0.0}, {1.0, 0.0}, {0.5, 0.5}));
    CHECK(plan.objective == doctest::Approx(0.5).epsilon(1e-12));

    // vertex-enumeration oracle agrees
    const auto space = PseudometricSpace::discrete({"a", "b"}, 1.0);
    const auto vertex = enumerate_dist_couplings(space, FinDist::dirac(0),
                                                 FinDist({{0, 0.5}, {1, 0.5}}));
    CHECK(vertex.value == doctest::Approx(plan.objective).epsilon(1e-12));
}

TEST_CASE("transportation identical marginals") {
    const auto plan =
        solve_transportation(make_problem(2, 2, {0.0, 1.0, 1.0, 0.0}, {0.5, 0.5}, {0.5, 0.5}));
    CHECK(plan.objective == 0.0);
}

TEST_CASE("transportation error cases") {
    CHECK_THROWS_AS(solve_transportation(make_problem(1, 1, {0.0}, {0.7}, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_transportation(make_problem(1, 1, {kInf}, {1.0}, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_transportation(make_problem(2, 1, {0.0}, {0.5, 0.5}, {1.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_transportation(make_problem(1, 1, {-1.0}, {1.0}, {1.0})),
                    std::invalid_argument);
}

TEST_CASE("restricted arcs report infeasibility") {
    // only the diagonal is available but the marginals need cross traffic
    const std::vector<TransportArc> arcs{{0, 0, 0.0}, {1, 1, 0.0}};
    const auto plan = solve_transportation_arcs(2, 2, arcs, {1.0, 0.0}, {0.5, 0.5});
    CHECK(!plan.has_value());
    const auto ok = solve_transportation_arcs(2, 2, arcs, {0.5, 0.5}, {0.5, 0.5});
    REQUIRE(ok.has_value());
    CHECK(ok->objective == 0.0);
}

TEST_CASE("dense lp basics") {
    SUBCASE("maximize x with x <= 1") {
        LpConstraint con{{1.0}, Relation::LessEq, 1.0};
        const auto sol = solve_dense_lp(LpSense::Maximize, {1.0}, {con}, {LpBounds{0.0, kInf}});
        CHECK(sol.value == doctest::Approx(1.0));
        CHECK(sol.x[0] == doctest::Approx(1.0));
    }
    SUBCASE("degenerate zero objective") {
        const auto sol = solve_dense_lp(LpSense::Maximize, {0.0, 0.0}, {},
                                        {LpBounds{0.0, 1.0}, LpBounds{0.0, 1.0}});
        CHECK(sol.value == 0.0);
    }
    SUBCASE("equality and geq constraints") {
        // min x + y  s.t.  x + y >= 2, x = 0.5
        LpConstraint geq{{1.0, 1.0}, Relation::GreaterEq, 2.0};
        LpConstraint eq{{1.0, 0.0}, Relation::Equal, 0.5};
        const auto sol = solve_dense_lp(LpSense::Minimize, {1.0, 1.0}, {geq, eq},
                                        {LpBounds{0.0, kInf}, LpBounds{0.0, kInf}});
        CHECK(sol.value == doctest::Approx(2.0));
        CHECK(sol.x[0] == doctest::Approx(0.5));
    }
    SUBCASE("infeasible") {
        LpConstraint a{{1.0}, Relation::GreaterEq, 2.0};
        LpConstraint b{{1.0}, Relation::LessEq, 1.0};
        CHECK_THROWS_AS(solve_dense_lp(LpSense::Maximize, {1.0}, {a, b}, {LpBounds{0.0, kInf}}),
                        LpInfeasible);
    }
    SUBCASE("unbounded") {
        CHECK_THROWS_AS(solve_dense_lp(LpSense::Maximize, {1.0}, {}, {LpBounds{0.0, kInf}}),
                        LpUnbounded);
    }
    SUBCASE("dimension mismatch") {
        LpConstraint bad{{1.0, 2.0}, Relation::LessEq, 1.0};
        CHECK_THROWS_AS(solve_dense_lp(LpSense::Maximize, {1.0}, {bad}, {LpBounds{}}),
                        std::invalid_argument);
    }
}

TEST_CASE("kantorovich dual equals transportation on the running example") {
    const auto space = PseudometricSpace::discrete({"a", "b"}, 1.0);
    const double dual = kantorovich_dual(space, {1.0, 0.0}, {0.5, 0.5});
    CHECK(dual == doctest::Approx(0.5).epsilon(1e-9));
    const double degenerate = kantorovich_dual(space, {0.5, 0.5}, {0.5, 0.5});
    CHECK(degenerate == doctest::Approx(0.0));
}

TEST_CASE("strong duality on random desk-scale instances") {
    Sampler rng(411);
    for (int it = 0; it < 120; ++it) {
        const std::size_t n = 2 + rng.index(7);
        const auto space = random_space(rng, n, 1.0);
        const auto p1 = dense_weights(rng, n);
        const auto p2 = dense_weights(rng, n);
        const double primal = transport_over_space(space, p1, p2);
        const double dual = kantorovich_dual(space, p1, p2);
        CHECK(std::abs(primal - dual) <= 1e-6);
    }
}

TEST_CASE("objective invariant under row and column permutation") {
    Sampler rng(77);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n = 2 + rng.index(4), m = 2 + rng.index(4);
        std::vector<double> cost(n * m);
        for (auto& c : cost) c = rng.uniform(0.0, 2.0);
        const auto supply = dense_weights(rng, n);
        const auto demand = dense_weights(rng, m);
        const double base =
            solve_transportation(make_problem(n, m, cost, supply, demand)).objective;

        std::vector<std::size_t> rows(n), cols(m);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
        for (std::size_t j = 0; j < m; ++j) cols[j] = j;
        for (std::size_t i = 0; i + 1 < n; ++i) std::swap(rows[i], rows[i + rng.index(n - i)]);
        for (std::size_t j = 0; j + 1 < m; ++j) std::swap(cols[j], cols[j + rng.index(m - j)]);

        std::vector<double> pcost(n * m), psupply(n), pdemand(m);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) pcost[i * m + j] = cost[rows[i] * m + cols[j]];
        for (std::size_t i = 0; i < n; ++i) psupply[i] = supply[rows[i]];
        for (std::size_t j = 0; j < m; ++j) pdemand[j] = demand[cols[j]];
        const double permuted =
            solve_transportation(make_problem(n, m, pcost, psupply, pdemand)).objective;
        CHECK(std::abs(base - permuted) <= 1e-9);
    }
}

TEST_CASE("weak duality against the witness family") {
    Sampler rng(90125);
    for (int it = 0; it < 60; ++it) {
        const std::size_t n = 2 + rng.index(6);
        const auto space = random_space(rng, n, 1.0);
        const auto p1 = dense_weights(rng, n);
        const auto p2 = dense_weights(rng, n);
        const double primal = transport_over_space(space, p1, p2);
        for (std::size_t x = 0; x < n; ++x) {  // f = d(x, .) is nonexpansive
            double value = 0.0;
            for (std::size_t y = 0; y < n; ++y) value += space.dist(x, y) * (p1[y] - p2[y]);
            CHECK(std::abs(value) <= primal + 1e-9);
        }
    }
}

TEST_CASE("plans are feasible") {
    Sampler rng(5150);
    for (int it = 0; it < 40; ++it) {
        const std::size_t n = 1 + rng.index(5), m = 1 + rng.index(5);
        std::vector<double> cost(n * m);
        for (auto& c : cost) c = rng.uniform(0.0, 3.0);
        const auto supply = dense_weights(rng, n);
        const auto demand = dense_weights(rng, m);
        const auto plan = solve_transportation(make_problem(n, m, cost, supply, demand));
        for (std::size_t i = 0; i < n; ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                CHECK(plan.at(i, j) >= -1e-12);
                row += plan.at(i, j);
            }
            CHECK(std::abs(row - supply[i]) <= 1e-9);
        }
        for (std::size_t j = 0; j < m; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < n; ++i) col += plan.at(i, j);
            CHECK(std::abs(col - demand[j]) <= 1e-9);
        }
        double obj = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) obj += cost[i * m + j] * plan.at(i, j);
        CHECK(std::abs(obj - plan.objective) <= 1e-9);
    }
}
