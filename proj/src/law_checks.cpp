#include "pmet/law_checks.hpp"

#include <cmath>
#include <sstream>

#include "pmet/sampling.hpp"
#include "pmet/transport.hpp"

namespace pmet {

namespace {

constexpr int kDyadic = 64;  // weight granularity that keeps flattening exact

void record(CheckReport& report, const std::string& name, bool ok, const std::string& witness) {
    for (auto& item : report.items)
        if (item.name == name) {
            if (!ok && item.passed) {
                item.passed = false;
                item.witness = witness;
            }
            return;
        }
    report.items.push_back({name, ok, ok ? std::string{} : witness});
}

std::string show_pair(std::size_t x, std::size_t y, double lhs, double rhs) {
    std::ostringstream out;
    out << "(" << x << "," << y << "): " << lhs << " vs " << rhs;
    return out.str();
}

// --- finite powerset monad -------------------------------------------------

std::vector<StateSet> random_family(Sampler& rng, std::size_t carrier, std::size_t max_outer) {
    std::vector<StateSet> family;
    const std::size_t outer = rng.index(max_outer + 1);
    for (std::size_t i = 0; i < outer; ++i) family.push_back(random_subset(rng, carrier, 3, true));
    std::sort(family.begin(), family.end());
    family.erase(std::unique(family.begin(), family.end()), family.end());
    return family;
}

double nested_hausdorff(const PseudometricSpace& space, const std::vector<StateSet>& t1,
                        const std::vector<StateSet>& t2) {
    std::vector<double> cost(t1.size() * t2.size());
    for (std::size_t i = 0; i < t1.size(); ++i)
        for (std::size_t j = 0; j < t2.size(); ++j)
            cost[i * t2.size() + j] = hausdorff_lift(space, t1[i], t2[j]);
    return hausdorff_on_costs(cost, t1.size(), t2.size(), space.top());
}

void check_powfin(CheckReport& report, const PseudometricSpace& space, int instances, Sampler& rng) {
    for (std::size_t x = 0; x < space.size(); ++x)
        for (std::size_t y = 0; y < space.size(); ++y) {
            const double lifted = hausdorff_lift(space, pow_unit(x), pow_unit(y));
            record(report, "unit-isometry", lifted == space.dist(x, y),
                   show_pair(x, y, lifted, space.dist(x, y)));
        }

    for (int it = 0; it < instances; ++it) {
        const auto t1 = random_family(rng, space.size(), 3);
        const auto t2 = random_family(rng, space.size(), 3);
        const double flat = hausdorff_lift(space, pow_mult(t1), pow_mult(t2));
        const double nested = nested_hausdorff(space, t1, t2);
        record(report, "mult-nonexpansive", flat <= nested + 1e-6,
               "flattened " + std::to_string(flat) + " > nested " + std::to_string(nested));

        // unit laws on a random set
        const StateSet s = random_subset(rng, space.size(), 3, true);
        record(report, "unit-law-left", pow_mult({s}) == s, "mu({S}) != S");
        std::vector<StateSet> singletons;
        for (std::size_t x : s) singletons.push_back(pow_unit(x));
        record(report, "unit-law-right", pow_mult(singletons) == s, "mu(P eta S) != S");

        // associativity on a random three-level family
        std::vector<std::vector<StateSet>> family3;
        const std::size_t outer = rng.index(3 + 1);
        for (std::size_t i = 0; i < outer; ++i) family3.push_back(random_family(rng, space.size(), 3));
        std::vector<StateSet> flattened_outer;  // mu_TX: union of the families
        for (const auto& fam : family3)
            flattened_outer.insert(flattened_outer.end(), fam.begin(), fam.end());
        std::sort(flattened_outer.begin(), flattened_outer.end());
        flattened_outer.erase(std::unique(flattened_outer.begin(), flattened_outer.end()),
                              flattened_outer.end());
        std::vector<StateSet> mapped;  // T mu: flatten each member family
        for (const auto& fam : family3) mapped.push_back(pow_mult(fam));
        record(report, "mult-associative", pow_mult(flattened_outer) == pow_mult(mapped),
               "mu . mu_T != mu . T mu");
    }
}

// --- distribution monad ----------------------------------------------------

MetaDist random_meta(Sampler& rng, const PseudometricSpace& space) {
    const std::size_t outer = 1 + rng.index(3);
    const FinDist outer_weights = random_dist(rng, outer, static_cast<int>(outer), kDyadic);
    MetaDist meta;
    for (const auto& [slot, w] : outer_weights.entries()) {
        (void)slot;
        meta.push_back({random_dist(rng, space.size(), 3, kDyadic), w});
    }
    return meta;
}

double nested_wasserstein(const PseudometricSpace& space, const MetaDist& m1, const MetaDist& m2) {
    TransportProblem problem;
    problem.rows = m1.size();
    problem.cols = m2.size();
    problem.cost.resize(m1.size() * m2.size());
    for (std::size_t i = 0; i < m1.size(); ++i)
        for (std::size_t j = 0; j < m2.size(); ++j)
            problem.cost[i * m2.size() + j] = wasserstein_dist_lift(space, m1[i].first, m2[j].first);
    for (const auto& [q, w] : m1) problem.supply.push_back(w);
    for (const auto& [q, w] : m2) problem.demand.push_back(w);
    return solve_transportation(problem).objective;
}

void check_dist(CheckReport& report, const PseudometricSpace& space, int instances, Sampler& rng) {
    for (std::size_t x = 0; x < space.size(); ++x)
        for (std::size_t y = 0; y < space.size(); ++y) {
            const double lifted = wasserstein_dist_lift(space, dist_unit(x), dist_unit(y));
            record(report, "unit-isometry", lifted == space.dist(x, y),
                   show_pair(x, y, lifted, space.dist(x, y)));
        }

    for (int it = 0; it < instances; ++it) {
        const MetaDist m1 = random_meta(rng, space);
        const MetaDist m2 = random_meta(rng, space);
        const double flat = wasserstein_dist_lift(space, dist_mult(m1), dist_mult(m2));
        const double nested = nested_wasserstein(space, m1, m2);
        record(report, "mult-nonexpansive", flat <= nested + 1e-6,
               "flattened " + std::to_string(flat) + " > nested " + std::to_string(nested));

        const FinDist p = random_dist(rng, space.size(), 3, kDyadic);
        record(report, "unit-law-left", dist_mult({{p, 1.0}}) == p, "mu(eta P) != P");
        MetaDist diracs;
        for (const auto& [x, w] : p.entries()) diracs.push_back({dist_unit(x), w});
        record(report, "unit-law-right", dist_mult(diracs) == p, "mu(T eta P) != P");

        // associativity: flatten a three-level distribution both ways
        std::vector<std::pair<MetaDist, double>> meta3;
        const FinDist outer = random_dist(rng, 3, 3, kDyadic);
        for (const auto& [slot, w] : outer.entries()) {
            (void)slot;
            meta3.push_back({random_meta(rng, space), w});
        }
        MetaDist outer_flat;  // mu_TX: reweight the inner metas
        for (const auto& [meta, w] : meta3)
            for (const auto& [q, v] : meta) outer_flat.push_back({q, w * v});
        MetaDist mapped;  // T mu: flatten each meta first
        for (const auto& [meta, w] : meta3) mapped.push_back({dist_mult(meta), w});
        record(report, "mult-associative", dist_mult(outer_flat) == dist_mult(mapped),
               "mu . mu_T != mu . T mu");
    }
}

// --- EM-law checks ----------------------------------------------------------

struct RawMachine {
    double output = 0.0;  // bit for the powerset law, [0,1] for the distribution law
    std::vector<double> values;  // successor values in [0, top]
};

void check_em_nfa(CheckReport& report, const PseudometricSpace& space, const LiftParams& params,
                  int instances, Sampler& rng) {
    for (int it = 0; it < instances; ++it) {
        const std::size_t alphabet = 1 + rng.index(3);

        // (a) evaluation equality on a random finite S in P(2 x [0,top]^A)
        std::vector<RawMachine> raw(rng.index(4));
        for (auto& t : raw) {
            t.output = rng.chance(0.5) ? 1.0 : 0.0;
            for (std::size_t a = 0; a < alphabet; ++a)
                t.values.push_back(rng.uniform(0.0, std::isinf(params.top) ? 4.0 : params.top));
        }
        double ev_f = 0.0;  // c * max over elements and symbols, max of empty set is 0
        for (const auto& t : raw)
            for (double v : t.values) ev_f = std::max(ev_f, v);
        ev_f *= params.c;
        double ev_g = 0.0;
        for (std::size_t a = 0; a < alphabet; ++a) {
            double col = 0.0;
            for (const auto& t : raw) col = std::max(col, t.values[a]);
            ev_g = std::max(ev_g, col);
        }
        ev_g *= params.c;
        record(report, "evaluation-equality", ev_f == ev_g,
               "ev_G(lambda S) = " + std::to_string(ev_g) + " != ev_F(S) = " + std::to_string(ev_f));

        // (b) metric nonexpansiveness on sets of machine elements over the space
        auto random_elems = [&](std::size_t count) {
            std::vector<MachineElem> elems(count);
            for (auto& e : elems) {
                e.output = rng.chance(0.5) ? 1 : 0;
                for (std::size_t a = 0; a < alphabet; ++a) e.succ.push_back(rng.index(space.size()));
            }
            return elems;
        };
        const auto t1 = random_elems(rng.index(4));
        const auto t2 = random_elems(rng.index(4));

        std::vector<double> cost(t1.size() * t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i)
            for (std::size_t j = 0; j < t2.size(); ++j)
                cost[i * t2.size() + j] =
                    m2_lift(params, space, static_cast<int>(t1[i].output), t1[i].succ,
                            static_cast<int>(t2[j].output), t2[j].succ);
        const double fg = hausdorff_on_costs(cost, t1.size(), t2.size(), params.top);

        auto lambda_of = [&](const std::vector<MachineElem>& t) {
            int out = 0;
            for (const auto& e : t)
                if (e.output) out = 1;
            std::vector<StateSet> per_symbol(alphabet);
            for (std::size_t a = 0; a < alphabet; ++a) {
                std::vector<std::size_t> targets;
                for (const auto& e : t) targets.push_back(e.succ[a]);
                per_symbol[a] = canonical_set(std::move(targets));
            }
            return std::make_pair(out, per_symbol);
        };
        const auto [o1, s1] = lambda_of(t1);
        const auto [o2, s2] = lambda_of(t2);
        double gf;
        if (o1 != o2) {
            gf = params.top;
        } else {
            double worst = 0.0;
            for (std::size_t a = 0; a < alphabet; ++a)
                worst = std::max(worst, hausdorff_lift(space, s1[a], s2[a]));
            gf = params.c * worst;
        }
        record(report, "metric-nonexpansive", gf <= fg + 1e-6,
               "GF " + std::to_string(gf) + " > FG " + std::to_string(fg));

        // identical arguments sit at distance zero on both sides
        std::vector<double> self_cost(t1.size() * t1.size());
        for (std::size_t i = 0; i < t1.size(); ++i)
            for (std::size_t j = 0; j < t1.size(); ++j)
                self_cost[i * t1.size() + j] =
                    m2_lift(params, space, static_cast<int>(t1[i].output), t1[i].succ,
                            static_cast<int>(t1[j].output), t1[j].succ);
        double gf_self = 0.0;
        for (std::size_t a = 0; a < alphabet; ++a)
            gf_self = std::max(gf_self, params.c * hausdorff_lift(space, s1[a], s1[a]));
        record(report, "identical-zero",
               hausdorff_on_costs(self_cost, t1.size(), t1.size(), params.top) == 0.0 &&
                   gf_self == 0.0,
               "identical arguments at nonzero distance");
    }
}

void check_em_pa(CheckReport& report, const PseudometricSpace& space, const LiftParams& params,
                 int instances, Sampler& rng) {
    for (int it = 0; it < instances; ++it) {
        const std::size_t alphabet = 1 + rng.index(3);

        // (a) evaluation inequality on a random P in D([0,1] x [0,1]^A)
        const std::size_t atoms = 1 + rng.index(3);
        const FinDist weights = random_dist(rng, atoms, static_cast<int>(atoms));
        std::vector<RawMachine> raw(atoms);
        for (auto& t : raw) {
            t.output = rng.uniform(0.0, 1.0);
            for (std::size_t a = 0; a < alphabet; ++a) t.values.push_back(rng.uniform(0.0, 1.0));
        }
        double ev_f = 0.0;
        for (const auto& [slot, w] : weights.entries()) {
            double inner = 0.0;
            for (double v : raw[slot].values) inner += v;
            ev_f += w * (params.c1 * raw[slot].output +
                         params.c2 / static_cast<double>(alphabet) * inner);
        }
        double mean_out = 0.0;
        for (const auto& [slot, w] : weights.entries()) mean_out += w * raw[slot].output;
        double ev_g = params.c1 * mean_out;
        for (std::size_t a = 0; a < alphabet; ++a) {
            double col = 0.0;
            for (const auto& [slot, w] : weights.entries()) col += w * raw[slot].values[a];
            ev_g += params.c2 / static_cast<double>(alphabet) * col;
        }
        record(report, "evaluation-inequality", ev_g <= ev_f + 1e-12,
               "ev_G(lambda P) = " + std::to_string(ev_g) + " > ev_F(P) = " + std::to_string(ev_f));

        // (b) metric nonexpansiveness on distributions over machine elements
        auto random_machine_dist = [&](std::size_t count) {
            const FinDist w = random_dist(rng, count, static_cast<int>(count));
            std::vector<std::pair<MachineElem, double>> out;
            for (const auto& [slot, weight] : w.entries()) {
                (void)slot;
                MachineElem e;
                e.output = 0;
                for (std::size_t a = 0; a < alphabet; ++a) e.succ.push_back(rng.index(space.size()));
                out.push_back({e, weight});
            }
            return out;
        };
        auto p1 = random_machine_dist(1 + rng.index(3));
        auto p2 = random_machine_dist(1 + rng.index(3));
        std::vector<double> outs1(p1.size()), outs2(p2.size());
        for (std::size_t i = 0; i < p1.size(); ++i) outs1[i] = rng.uniform(0.0, 1.0);
        for (std::size_t j = 0; j < p2.size(); ++j) outs2[j] = rng.uniform(0.0, 1.0);

        TransportProblem problem;
        problem.rows = p1.size();
        problem.cols = p2.size();
        problem.cost.resize(p1.size() * p2.size());
        for (std::size_t i = 0; i < p1.size(); ++i)
            for (std::size_t j = 0; j < p2.size(); ++j) {
                std::vector<double> dists(alphabet);
                for (std::size_t a = 0; a < alphabet; ++a)
                    dists[a] = space.dist(p1[i].first.succ[a], p2[j].first.succ[a]);
                problem.cost[i * p2.size() + j] =
                    machine_value(params, std::abs(outs1[i] - outs2[j]), dists);
            }
        for (const auto& [e, w] : p1) problem.supply.push_back(w);
        for (const auto& [e, w] : p2) problem.demand.push_back(w);
        const double fg = solve_transportation(problem).objective;

        double mean1 = 0.0, mean2 = 0.0;
        for (std::size_t i = 0; i < p1.size(); ++i) mean1 += p1[i].second * outs1[i];
        for (std::size_t j = 0; j < p2.size(); ++j) mean2 += p2[j].second * outs2[j];
        std::vector<double> mixture_dists(alphabet);
        for (std::size_t a = 0; a < alphabet; ++a) {
            std::vector<FinDist::Entry> e1, e2;
            for (const auto& [e, w] : p1) e1.push_back({e.succ[a], w});
            for (const auto& [e, w] : p2) e2.push_back({e.succ[a], w});
            mixture_dists[a] =
                wasserstein_dist_lift(space, FinDist(std::move(e1)), FinDist(std::move(e2)));
        }
        const double gf = machine_value(params, std::abs(mean1 - mean2), mixture_dists);
        record(report, "metric-nonexpansive", gf <= fg + 1e-6,
               "GF " + std::to_string(gf) + " > FG " + std::to_string(fg));
    }
}

}  // namespace

CheckReport check_monad_metric_laws(MonadId monad, const PseudometricSpace& space, int instances,
                                    std::uint64_t rng_seed) {
    if (space.size() > 6)
        throw std::invalid_argument("monad law check: carrier too large for exact nested lifting");
    CheckReport report;
    Sampler rng(rng_seed);
    if (monad == MonadId::PowFin)
        check_powfin(report, space, instances, rng);
    else
        check_dist(report, space, instances, rng);
    return report;
}

CheckReport check_em_law_nonexpansive(SystemId system, const PseudometricSpace& space,
                                      const LiftParams& params, int instances,
                                      std::uint64_t rng_seed) {
    if (space.size() > 8)
        throw std::invalid_argument("em law check: carrier too large for powerset enumeration");
    params.validate();
    CheckReport report;
    Sampler rng(rng_seed);
    if (system == SystemId::Nfa) {
        check_em_nfa(report, space, params, instances, rng);
    } else {
        if (params.eval != EvalKind::Convex)
            throw std::invalid_argument("em law check: the distribution law uses the convex convention");
        check_em_pa(report, space, params, instances, rng);
    }
    return report;
}

}  // namespace pmet
