#include "pmet/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pmet/transport.hpp"

namespace pmet {

StateSet canonical_set(std::vector<std::size_t> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

FinDist::FinDist(std::vector<Entry> weighted_support) {
    std::sort(weighted_support.begin(), weighted_support.end());
    double total = 0.0;
    for (std::size_t k = 0; k < weighted_support.size(); ++k) {
        auto [x, w] = weighted_support[k];
        if (std::isnan(w) || w < 0.0) throw std::invalid_argument("distribution weight must be nonnegative");
        total += w;
        if (!entries_.empty() && entries_.back().first == x)
            entries_.back().second += w;
        else if (w > 0.0)
            entries_.push_back({x, w});
    }
    if (std::abs(total - 1.0) > kEpsNum)
        throw std::invalid_argument("distribution mass is " + std::to_string(total) + ", expected 1");
    if (entries_.empty()) throw std::invalid_argument("distribution has empty support");
}

FinDist FinDist::dirac(std::size_t x) { return FinDist({{x, 1.0}}); }

double FinDist::weight_of(std::size_t x) const {
    for (const auto& [y, w] : entries_)
        if (y == x) return w;
    return 0.0;
}

std::size_t FinDist::max_index() const { return entries_.back().first; }

void LiftParams::validate() const {
    if (!(top > 0.0)) throw std::invalid_argument("lift params: top must be positive");
    if (!(c > 0.0) || c > 1.0) throw std::invalid_argument("lift params: c must lie in (0,1]");
    if (!(c1 > 0.0) || !(c2 > 0.0)) throw std::invalid_argument("lift params: c1, c2 must be positive");
    if (std::isinf(top)) return;  // infinite top lifts the c1, c2 <= 1 constraints
    if (c1 > 1.0 || c2 > 1.0) throw std::invalid_argument("lift params: c1, c2 must lie in (0,1]");
    if (eval == EvalKind::Convex && c1 + c2 > 1.0 + kEpsNum)
        throw std::invalid_argument("lift params: convex convention needs c1 + c2 <= 1");
}

namespace {

void require_in_carrier(const PseudometricSpace& space, const StateSet& s, const char* what) {
    for (std::size_t x : s)
        if (x >= space.size()) throw std::invalid_argument(std::string(what) + ": element not in carrier");
}

}  // namespace

double hausdorff_on_costs(const std::vector<double>& cost, std::size_t nl, std::size_t nr,
                          double top) {
    if (nl == 0 && nr == 0) return 0.0;
    if (nl == 0 || nr == 0) return top;
    double worst = 0.0;
    for (std::size_t i = 0; i < nl; ++i) {
        double best = kInf;
        for (std::size_t j = 0; j < nr; ++j) best = std::min(best, cost[i * nr + j]);
        worst = std::max(worst, best);
    }
    for (std::size_t j = 0; j < nr; ++j) {
        double best = kInf;
        for (std::size_t i = 0; i < nl; ++i) best = std::min(best, cost[i * nr + j]);
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff_lift(const PseudometricSpace& space, const StateSet& s1, const StateSet& s2) {
    require_in_carrier(space, s1, "hausdorff");
    require_in_carrier(space, s2, "hausdorff");
    if (s1.empty() && s2.empty()) return 0.0;
    if (s1.empty() || s2.empty()) return space.top();
    std::vector<double> cost(s1.size() * s2.size());
    for (std::size_t i = 0; i < s1.size(); ++i)
        for (std::size_t j = 0; j < s2.size(); ++j) cost[i * s2.size() + j] = space.dist(s1[i], s2[j]);
    return hausdorff_on_costs(cost, s1.size(), s2.size(), space.top());
}

double wasserstein_dist_lift(const PseudometricSpace& space, const FinDist& p1, const FinDist& p2) {
    if (p1.max_index() >= space.size() || p2.max_index() >= space.size())
        throw std::invalid_argument("wasserstein: support not contained in carrier");
    const auto& e1 = p1.entries();
    const auto& e2 = p2.entries();

    std::vector<double> supply(e1.size()), demand(e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i) supply[i] = e1[i].second;
    for (std::size_t j = 0; j < e2.size(); ++j) demand[j] = e2[j].second;

    bool has_infinite_cost = false;
    std::vector<TransportArc> arcs;
    arcs.reserve(e1.size() * e2.size());
    for (std::size_t i = 0; i < e1.size(); ++i)
        for (std::size_t j = 0; j < e2.size(); ++j) {
            const double d = space.dist(e1[i].first, e2[j].first);
            if (std::isinf(d))
                has_infinite_cost = true;
            else
                arcs.push_back({i, j, d});
        }

    if (!has_infinite_cost) {
        TransportProblem problem;
        problem.rows = e1.size();
        problem.cols = e2.size();
        problem.supply = supply;
        problem.demand = demand;
        problem.cost.assign(e1.size() * e2.size(), 0.0);
        for (const auto& a : arcs) problem.cost[a.i * e2.size() + a.j] = a.cost;
        return solve_transportation(problem).objective;
    }
    // top = inf ground: any plan that must ship across an infinite-cost pair
    // has value top; otherwise the finite-arc optimum is the distance.
    auto plan = solve_transportation_arcs(e1.size(), e2.size(), arcs, supply, demand);
    return plan ? plan->objective : space.top();
}

double kantorovich_dist_lift(const PseudometricSpace& space, const FinDist& p1, const FinDist& p2) {
    if (std::isinf(space.top()))
        throw std::invalid_argument("kantorovich: requires a finite top element");
    if (p1.max_index() >= space.size() || p2.max_index() >= space.size())
        throw std::invalid_argument("kantorovich: support not contained in carrier");

    const std::size_t n = space.size();
    // max  sum_x (p1 - p2)(x) f(x)
    // s.t. f(x) - f(y) <= d(x,y),  0 <= f <= top.
    // The feasible set is closed under f -> top - f, so one direction of the
    // objective already yields the absolute value.
    std::vector<double> objective(n, 0.0);
    for (const auto& [x, w] : p1.entries()) objective[x] += w;
    for (const auto& [x, w] : p2.entries()) objective[x] -= w;

    std::vector<LpConstraint> constraints;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            LpConstraint con;
            con.coeffs.assign(n, 0.0);
            con.coeffs[x] = 1.0;
            con.coeffs[y] = -1.0;
            con.rel = Relation::LessEq;
            con.rhs = space.dist(x, y);
            constraints.push_back(std::move(con));
        }
    std::vector<LpBounds> bounds(n, LpBounds{0.0, space.top()});
    return solve_dense_lp(LpSense::Maximize, objective, constraints, bounds).value;
}

double input_lift(const LiftParams& params, const PseudometricSpace& space,
                  const std::vector<std::size_t>& s1, const std::vector<std::size_t>& s2) {
    if (s1.size() != s2.size()) throw std::invalid_argument("input lift: alphabet mismatch");
    require_in_carrier(space, s1, "input lift");
    require_in_carrier(space, s2, "input lift");
    double acc = 0.0;
    for (std::size_t a = 0; a < s1.size(); ++a) {
        const double d = space.dist(s1[a], s2[a]);
        acc = params.eval == EvalKind::Max ? std::max(acc, d) : acc + d;
    }
    return acc;
}

double machine_value(const LiftParams& params, double output_dist,
                     const std::vector<double>& succ_dists) {
    if (params.eval == EvalKind::Max) {
        double worst = 0.0;
        for (double d : succ_dists) worst = std::max(worst, d);
        return std::max(params.c1 * output_dist, params.c2 * worst);
    }
    double sum = 0.0;
    for (double d : succ_dists) sum += d;
    const double scale = succ_dists.empty() ? 0.0 : params.c2 / static_cast<double>(succ_dists.size());
    return params.c1 * output_dist + scale * sum;
}

double machine_lift(const LiftParams& params, const PseudometricSpace& d_B,
                    const PseudometricSpace& d_X, const MachineElem& t1, const MachineElem& t2) {
    if (t1.succ.size() != t2.succ.size()) throw std::invalid_argument("machine lift: alphabet mismatch");
    if (t1.output >= d_B.size() || t2.output >= d_B.size())
        throw std::invalid_argument("machine lift: output not in output carrier");
    require_in_carrier(d_X, t1.succ, "machine lift");
    require_in_carrier(d_X, t2.succ, "machine lift");
    std::vector<double> succ_dists(t1.succ.size());
    for (std::size_t a = 0; a < t1.succ.size(); ++a)
        succ_dists[a] = d_X.dist(t1.succ[a], t2.succ[a]);
    return machine_value(params, d_B.dist(t1.output, t2.output), succ_dists);
}

double m2_lift(const LiftParams& params, const PseudometricSpace& space, int o1,
               const std::vector<std::size_t>& s1, int o2, const std::vector<std::size_t>& s2) {
    if (s1.size() != s2.size()) throw std::invalid_argument("m2 lift: alphabet mismatch");
    if (o1 != o2) return params.top;
    require_in_carrier(space, s1, "m2 lift");
    require_in_carrier(space, s2, "m2 lift");
    double worst = 0.0;
    for (std::size_t a = 0; a < s1.size(); ++a) worst = std::max(worst, space.dist(s1[a], s2[a]));
    return params.c * worst;
}

}  // namespace pmet
