#include "pmet/transport.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace pmet {

namespace {

constexpr double kMassSlack = 1e-12;

struct ResidualArc {
    std::size_t supplier, consumer;
    double cost;
    double flow = 0.0;
};

// Multi-source Dijkstra over the residual bipartite graph with node
// potentials keeping reduced costs nonnegative.
struct SspState {
    std::size_t rows, cols;
    std::vector<ResidualArc> arcs;
    std::vector<std::vector<std::size_t>> by_supplier;  // arc indices
    std::vector<std::vector<std::size_t>> by_consumer;
    std::vector<double> rem_supply, rem_demand;
    std::vector<double> potential;  // suppliers then consumers

    std::size_t node_count() const { return rows + cols; }
    std::size_t consumer_node(std::size_t j) const { return rows + j; }
};

// One shortest-path augmentation. Returns false when no consumer with
// remaining demand is reachable from any supplier with remaining supply.
bool augment(SspState& st) {
    const std::size_t nn = st.node_count();
    std::vector<double> dist(nn, kInf);
    std::vector<std::ptrdiff_t> via_arc(nn, -1);  // arc used to enter node
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    for (std::size_t i = 0; i < st.rows; ++i)
        if (st.rem_supply[i] > kMassSlack) {
            dist[i] = 0.0;
            heap.push({0.0, i});
        }
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u] + 1e-15) continue;
        if (u < st.rows) {
            for (std::size_t ai : st.by_supplier[u]) {
                const auto& a = st.arcs[ai];
                const std::size_t v = st.consumer_node(a.consumer);
                const double w = a.cost + st.potential[u] - st.potential[v];
                const double cand = d + std::max(w, 0.0);
                if (cand + 1e-15 < dist[v]) {
                    dist[v] = cand;
                    via_arc[v] = static_cast<std::ptrdiff_t>(ai);
                    heap.push({cand, v});
                }
            }
        } else {
            for (std::size_t ai : st.by_consumer[u - st.rows]) {
                const auto& a = st.arcs[ai];
                if (a.flow <= kMassSlack) continue;  // backward residual
                const std::size_t v = a.supplier;
                const double w = -a.cost + st.potential[u] - st.potential[v];
                const double cand = d + std::max(w, 0.0);
                if (cand + 1e-15 < dist[v]) {
                    dist[v] = cand;
                    via_arc[v] = static_cast<std::ptrdiff_t>(ai);
                    heap.push({cand, v});
                }
            }
        }
    }

    std::ptrdiff_t best = -1;
    for (std::size_t j = 0; j < st.cols; ++j) {
        const std::size_t v = st.consumer_node(j);
        if (st.rem_demand[j] > kMassSlack && dist[v] < kInf &&
            (best < 0 || dist[v] < dist[st.consumer_node(static_cast<std::size_t>(best))]))
            best = static_cast<std::ptrdiff_t>(j);
    }
    if (best < 0) return false;
    const std::size_t sink_j = static_cast<std::size_t>(best);

    // Walk the path backwards to find the bottleneck.
    double delta = st.rem_demand[sink_j];
    std::vector<std::pair<std::size_t, bool>> path;  // (arc, forward?)
    std::size_t node = st.consumer_node(sink_j);
    while (via_arc[node] >= 0) {
        const std::size_t ai = static_cast<std::size_t>(via_arc[node]);
        const auto& a = st.arcs[ai];
        const bool forward = node >= st.rows && st.consumer_node(a.consumer) == node;
        path.push_back({ai, forward});
        if (forward) {
            node = a.supplier;
        } else {
            delta = std::min(delta, a.flow);
            node = st.consumer_node(a.consumer);
        }
    }
    delta = std::min(delta, st.rem_supply[node]);
    if (delta <= 0.0) return false;

    for (auto [ai, forward] : path) {
        auto& a = st.arcs[ai];
        a.flow += forward ? delta : -delta;
        if (a.flow < 0.0) a.flow = 0.0;
    }
    st.rem_supply[node] -= delta;
    st.rem_demand[sink_j] -= delta;

    for (std::size_t v = 0; v < st.node_count(); ++v)
        if (dist[v] < kInf) st.potential[v] += dist[v];
    return true;
}

std::optional<TransportPlan> run_ssp(std::size_t rows, std::size_t cols,
                                     const std::vector<TransportArc>& arcs,
                                     const std::vector<double>& supply,
                                     const std::vector<double>& demand) {
    SspState st;
    st.rows = rows;
    st.cols = cols;
    st.by_supplier.resize(rows);
    st.by_consumer.resize(cols);
    for (const auto& arc : arcs) {
        if (arc.i >= rows || arc.j >= cols) throw std::invalid_argument("transport arc out of range");
        if (!(arc.cost >= 0.0) || std::isinf(arc.cost))
            throw std::invalid_argument("transport arc cost must be finite and nonnegative");
        st.by_supplier[arc.i].push_back(st.arcs.size());
        st.by_consumer[arc.j].push_back(st.arcs.size());
        st.arcs.push_back({arc.i, arc.j, arc.cost});
    }
    st.rem_supply = supply;
    st.rem_demand = demand;
    st.potential.assign(rows + cols, 0.0);

    const double total_supply = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double total_demand = std::accumulate(demand.begin(), demand.end(), 0.0);
    // Route min(supply, demand); a sub-tolerance imbalance is left unshipped.
    const double leftover = total_supply - std::min(total_supply, total_demand);
    const double stop_at = leftover + kMassSlack * std::max(1.0, total_supply);
    const std::size_t cap = 8 * (rows + cols) * std::max<std::size_t>(arcs.size(), 1) + 64;
    std::size_t steps = 0;
    auto remaining = [&] { return std::accumulate(st.rem_supply.begin(), st.rem_supply.end(), 0.0); };
    while (remaining() > stop_at) {
        if (++steps > cap) throw std::runtime_error("transportation solver failed to converge");
        if (!augment(st)) return std::nullopt;
    }

    TransportPlan plan;
    plan.rows = rows;
    plan.cols = cols;
    plan.flow.assign(rows * cols, 0.0);
    double objective = 0.0;
    for (const auto& a : st.arcs) {
        plan.flow[a.supplier * cols + a.consumer] += a.flow;
        objective += a.cost * a.flow;
    }
    plan.objective = objective;
    return plan;
}

}  // namespace

std::optional<TransportPlan> solve_transportation_arcs(std::size_t rows, std::size_t cols,
                                                       const std::vector<TransportArc>& arcs,
                                                       const std::vector<double>& supply,
                                                       const std::vector<double>& demand) {
    if (supply.size() != rows || demand.size() != cols)
        throw std::invalid_argument("transportation: marginal dimension mismatch");
    for (double s : supply)
        if (!(s >= 0.0) || std::isinf(s)) throw std::invalid_argument("transportation: bad supply entry");
    for (double d : demand)
        if (!(d >= 0.0) || std::isinf(d)) throw std::invalid_argument("transportation: bad demand entry");
    const double ssum = std::accumulate(supply.begin(), supply.end(), 0.0);
    const double dsum = std::accumulate(demand.begin(), demand.end(), 0.0);
    if (std::abs(ssum - dsum) > kEpsNum)
        throw std::invalid_argument("transportation: supply and demand totals differ beyond tolerance");
    return run_ssp(rows, cols, arcs, supply, demand);
}

TransportPlan solve_transportation(const TransportProblem& problem) {
    const std::size_t n = problem.rows, m = problem.cols;
    if (problem.cost.size() != n * m || problem.supply.size() != n || problem.demand.size() != m)
        throw std::invalid_argument("transportation: dimension mismatch");
    const double ssum = std::accumulate(problem.supply.begin(), problem.supply.end(), 0.0);
    const double dsum = std::accumulate(problem.demand.begin(), problem.demand.end(), 0.0);
    if (std::abs(ssum - 1.0) > kEpsNum || std::abs(dsum - 1.0) > kEpsNum)
        throw std::invalid_argument("transportation: marginals must each sum to one");

    // supp-only carrier: zero-mass rows and columns are dropped up front.
    std::vector<std::size_t> live_rows, live_cols;
    for (std::size_t i = 0; i < n; ++i) {
        if (problem.supply[i] < 0.0) throw std::invalid_argument("transportation: negative supply");
        if (problem.supply[i] > 0.0) live_rows.push_back(i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (problem.demand[j] < 0.0) throw std::invalid_argument("transportation: negative demand");
        if (problem.demand[j] > 0.0) live_cols.push_back(j);
    }

    std::vector<TransportArc> arcs;
    arcs.reserve(live_rows.size() * live_cols.size());
    std::vector<double> supply, demand;
    for (std::size_t a = 0; a < live_rows.size(); ++a) supply.push_back(problem.supply[live_rows[a]]);
    for (std::size_t b = 0; b < live_cols.size(); ++b) demand.push_back(problem.demand[live_cols[b]]);
    for (std::size_t a = 0; a < live_rows.size(); ++a)
        for (std::size_t b = 0; b < live_cols.size(); ++b) {
            const double c = problem.cost[live_rows[a] * m + live_cols[b]];
            if (std::isinf(c)) throw std::invalid_argument("transportation: infinite cost entry");
            if (!(c >= 0.0)) throw std::invalid_argument("transportation: costs must be nonnegative");
            arcs.push_back({a, b, c});
        }

    auto reduced = run_ssp(live_rows.size(), live_cols.size(), arcs, supply, demand);
    if (!reduced) throw std::invalid_argument("transportation: infeasible marginals");

    TransportPlan plan;
    plan.rows = n;
    plan.cols = m;
    plan.flow.assign(n * m, 0.0);
    for (std::size_t a = 0; a < live_rows.size(); ++a)
        for (std::size_t b = 0; b < live_cols.size(); ++b)
            plan.flow[live_rows[a] * m + live_cols[b]] = reduced->at(a, b);
    plan.objective = reduced->objective;
    return plan;
}

// ---------------------------------------------------------------------------
// Dense two-phase simplex.

namespace {

struct Tableau {
    std::size_t nrows = 0, ncols = 0;  // ncols includes rhs column
    std::vector<double> a;
    std::vector<std::size_t> basis;  // basic variable per row

    double& at(std::size_t r, std::size_t c) { return a[r * ncols + c]; }
    double at(std::size_t r, std::size_t c) const { return a[r * ncols + c]; }
};

constexpr double kPivotEps = 1e-10;

void pivot(Tableau& t, std::size_t prow, std::size_t pcol) {
    const double pv = t.at(prow, pcol);
    for (std::size_t c = 0; c < t.ncols; ++c) t.at(prow, c) /= pv;
    for (std::size_t r = 0; r < t.nrows; ++r) {
        if (r == prow) continue;
        const double f = t.at(r, pcol);
        if (std::abs(f) < 1e-14) continue;
        for (std::size_t c = 0; c < t.ncols; ++c) t.at(r, c) -= f * t.at(prow, c);
    }
    t.basis[prow] = pcol;
}

// Minimizes cost over the tableau rows; Bland's rule keeps it cycle-free.
// Returns false when unbounded.
bool simplex_min(Tableau& t, std::vector<double>& cost, double& value) {
    const std::size_t nvars = t.ncols - 1;
    std::vector<double> reduced(nvars);
    while (true) {
        // reduced costs: c_j - c_B . B^{-1} A_j  (tableau rows are B^{-1} A)
        for (std::size_t j = 0; j < nvars; ++j) {
            double r = cost[j];
            for (std::size_t row = 0; row < t.nrows; ++row) r -= cost[t.basis[row]] * t.at(row, j);
            reduced[j] = r;
        }
        std::ptrdiff_t entering = -1;
        for (std::size_t j = 0; j < nvars; ++j)
            if (reduced[j] < -kPivotEps) {
                entering = static_cast<std::ptrdiff_t>(j);
                break;
            }
        if (entering < 0) break;
        const std::size_t pcol = static_cast<std::size_t>(entering);

        std::ptrdiff_t prow = -1;
        double best_ratio = kInf;
        for (std::size_t r = 0; r < t.nrows; ++r) {
            const double coef = t.at(r, pcol);
            if (coef > kPivotEps) {
                const double ratio = t.at(r, t.ncols - 1) / coef;
                if (ratio < best_ratio - 1e-12 ||
                    (ratio < best_ratio + 1e-12 && (prow < 0 || t.basis[r] < t.basis[static_cast<std::size_t>(prow)]))) {
                    best_ratio = ratio;
                    prow = static_cast<std::ptrdiff_t>(r);
                }
            }
        }
        if (prow < 0) return false;
        pivot(t, static_cast<std::size_t>(prow), pcol);
    }
    value = 0.0;
    for (std::size_t r = 0; r < t.nrows; ++r) value += cost[t.basis[r]] * t.at(r, t.ncols - 1);
    return true;
}

}  // namespace

LpSolution solve_dense_lp(LpSense sense, const std::vector<double>& objective,
                          const std::vector<LpConstraint>& constraints,
                          const std::vector<LpBounds>& bounds) {
    const std::size_t nvars = objective.size();
    if (bounds.size() != nvars) throw std::invalid_argument("lp: bounds dimension mismatch");
    for (const auto& c : constraints)
        if (c.coeffs.size() != nvars) throw std::invalid_argument("lp: constraint dimension mismatch");
    for (const auto& b : bounds) {
        if (std::isinf(b.lo)) throw std::invalid_argument("lp: lower bounds must be finite");
        if (b.hi < b.lo) throw LpInfeasible();
    }

    // Shift x = lo + y with y >= 0; finite upper bounds become rows.
    struct Row {
        std::vector<double> a;
        Relation rel;
        double rhs;
    };
    std::vector<Row> rows;
    for (const auto& c : constraints) {
        double shift = 0.0;
        for (std::size_t j = 0; j < nvars; ++j) shift += c.coeffs[j] * bounds[j].lo;
        rows.push_back({c.coeffs, c.rel, c.rhs - shift});
    }
    for (std::size_t j = 0; j < nvars; ++j) {
        if (std::isinf(bounds[j].hi)) continue;
        std::vector<double> a(nvars, 0.0);
        a[j] = 1.0;
        rows.push_back({std::move(a), Relation::LessEq, bounds[j].hi - bounds[j].lo});
    }

    for (auto& r : rows)
        if (r.rhs < 0.0) {
            for (auto& v : r.a) v = -v;
            r.rhs = -r.rhs;
            if (r.rel == Relation::LessEq)
                r.rel = Relation::GreaterEq;
            else if (r.rel == Relation::GreaterEq)
                r.rel = Relation::LessEq;
        }

    const std::size_t m = rows.size();
    std::size_t nslack = 0;
    for (const auto& r : rows)
        if (r.rel != Relation::Equal) ++nslack;
    const std::size_t total = nvars + nslack + m;  // structural, slack/surplus, artificial

    Tableau t;
    t.nrows = m;
    t.ncols = total + 1;
    t.a.assign(t.nrows * t.ncols, 0.0);
    t.basis.assign(m, 0);

    std::size_t slack_at = nvars;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t j = 0; j < nvars; ++j) t.at(r, j) = rows[r].a[j];
        if (rows[r].rel == Relation::LessEq)
            t.at(r, slack_at++) = 1.0;
        else if (rows[r].rel == Relation::GreaterEq)
            t.at(r, slack_at++) = -1.0;
        t.at(r, nvars + nslack + r) = 1.0;  // artificial
        t.basis[r] = nvars + nslack + r;
        t.at(r, total) = rows[r].rhs;
    }

    std::vector<double> phase1(total, 0.0);
    for (std::size_t r = 0; r < m; ++r) phase1[nvars + nslack + r] = 1.0;
    double infeas = 0.0;
    if (!simplex_min(t, phase1, infeas)) throw LpUnbounded();  // cannot happen: phase 1 bounded
    if (infeas > 1e-7) throw LpInfeasible();

    // Drive any leftover artificial out of the basis, or drop its row.
    for (std::size_t r = 0; r < m; ++r) {
        if (t.basis[r] < nvars + nslack) continue;
        bool pivoted = false;
        for (std::size_t j = 0; j < nvars + nslack && !pivoted; ++j)
            if (std::abs(t.at(r, j)) > kPivotEps) {
                pivot(t, r, j);
                pivoted = true;
            }
        if (!pivoted)
            for (std::size_t c = 0; c < t.ncols; ++c) t.at(r, c) = 0.0;  // redundant row
    }

    std::vector<double> phase2(total, 0.0);
    for (std::size_t j = 0; j < nvars; ++j)
        phase2[j] = (sense == LpSense::Maximize) ? -objective[j] : objective[j];
    // Forbid artificials from re-entering.
    for (std::size_t r = nvars + nslack; r < total; ++r) phase2[r] = 1e18;

    double value = 0.0;
    if (!simplex_min(t, phase2, value)) throw LpUnbounded();

    LpSolution sol;
    sol.x.assign(nvars, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (t.basis[r] < nvars) sol.x[t.basis[r]] = t.at(r, t.ncols - 1);
    for (std::size_t j = 0; j < nvars; ++j) sol.x[j] += bounds[j].lo;
    sol.value = 0.0;
    for (std::size_t j = 0; j < nvars; ++j) sol.value += objective[j] * sol.x[j];
    return sol;
}

}  // namespace pmet
