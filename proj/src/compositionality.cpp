#include <cmath>
#include <sstream>

#include "pmet/lifting.hpp"
#include "pmet/oracle.hpp"
#include "pmet/sampling.hpp"
#include "pmet/transport.hpp"

namespace pmet {

namespace {

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

std::string show(double direct, double nested) {
    std::ostringstream out;
    out << "direct " << direct << " vs nested " << nested;
    return out.str();
}

// Direct two-layer distribution lifting, both layers by exhaustive vertex
// enumeration; nested route uses the production transportation solver twice.
void check_dist_dist(CheckReport& report, const PseudometricSpace& space, int instances,
                     Sampler& rng) {
    for (int it = 0; it < instances; ++it) {
        const std::size_t outer1 = 1 + rng.index(3), outer2 = 1 + rng.index(3);
        std::vector<FinDist> inner1, inner2;
        std::vector<double> w1, w2;
        {
            const FinDist o1 = random_dist(rng, outer1, static_cast<int>(outer1));
            const FinDist o2 = random_dist(rng, outer2, static_cast<int>(outer2));
            for (const auto& [slot, w] : o1.entries()) {
                (void)slot;
                inner1.push_back(random_dist(rng, space.size(), 3));
                w1.push_back(w);
            }
            for (const auto& [slot, w] : o2.entries()) {
                (void)slot;
                inner2.push_back(random_dist(rng, space.size(), 3));
                w2.push_back(w);
            }
        }

        // atom space carrying the enumerated inner values
        const std::size_t atoms = inner1.size() + inner2.size();
        std::vector<double> atom_cost(atoms * atoms, 0.0);
        auto inner_at = [&](std::size_t k) -> const FinDist& {
            return k < inner1.size() ? inner1[k] : inner2[k - inner1.size()];
        };
        for (std::size_t i = 0; i < atoms; ++i)
            for (std::size_t j = 0; j < atoms; ++j)
                atom_cost[i * atoms + j] =
                    i == j ? 0.0 : enumerate_dist_couplings(space, inner_at(i), inner_at(j)).value;
        std::vector<std::string> atom_names(atoms);
        for (std::size_t i = 0; i < atoms; ++i) atom_names[i] = "t" + std::to_string(i);
        const PseudometricSpace atom_space(atom_names, space.top(), atom_cost);

        std::vector<FinDist::Entry> e1, e2;
        for (std::size_t i = 0; i < inner1.size(); ++i) e1.push_back({i, w1[i]});
        for (std::size_t j = 0; j < inner2.size(); ++j) e2.push_back({inner1.size() + j, w2[j]});
        const double direct =
            enumerate_dist_couplings(atom_space, FinDist(std::move(e1)), FinDist(std::move(e2))).value;

        TransportProblem nested_problem;
        nested_problem.rows = inner1.size();
        nested_problem.cols = inner2.size();
        nested_problem.supply = w1;
        nested_problem.demand = w2;
        nested_problem.cost.resize(inner1.size() * inner2.size());
        for (std::size_t i = 0; i < inner1.size(); ++i)
            for (std::size_t j = 0; j < inner2.size(); ++j)
                nested_problem.cost[i * inner2.size() + j] =
                    wasserstein_dist_lift(space, inner1[i], inner2[j]);
        const double nested = solve_transportation(nested_problem).objective;

        record(report, "dist-dist", std::abs(direct - nested) <= 1e-6, show(direct, nested));
    }
}

void check_pow_pow(CheckReport& report, const PseudometricSpace& space, int instances,
                   Sampler& rng) {
    if (space.size() > 5)
        throw std::invalid_argument("compositionality: carrier too large for the enumerating variant");
    for (int it = 0; it < instances; ++it) {
        auto family = [&] {
            std::vector<StateSet> f;
            const std::size_t outer = rng.index(4);
            for (std::size_t i = 0; i < outer; ++i) f.push_back(random_subset(rng, space.size(), 3, true));
            std::sort(f.begin(), f.end());
            f.erase(std::unique(f.begin(), f.end()), f.end());
            return f;
        };
        const auto t1 = family();
        const auto t2 = family();

        std::vector<double> direct_cost(t1.size() * t2.size());
        std::vector<double> nested_cost(t1.size() * t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i)
            for (std::size_t j = 0; j < t2.size(); ++j) {
                direct_cost[i * t2.size() + j] = enumerate_set_couplings(space, t1[i], t2[j]).value;
                nested_cost[i * t2.size() + j] = hausdorff_lift(space, t1[i], t2[j]);
            }
        const double direct =
            min_max_relation(direct_cost, t1.size(), t2.size(), space.top()).value;
        const double nested = hausdorff_on_costs(nested_cost, t1.size(), t2.size(), space.top());
        record(report, "pow-pow", std::abs(direct - nested) <= 1e-6, show(direct, nested));
    }
}

void check_pow_m2(CheckReport& report, const PseudometricSpace& space, int instances, Sampler& rng,
                  const LiftParams& params) {
    for (int it = 0; it < instances; ++it) {
        const std::size_t alphabet = 1 + rng.index(2);
        auto family = [&] {
            std::vector<MachineElem> f(rng.index(4));
            for (auto& e : f) {
                e.output = rng.chance(0.5) ? 1 : 0;
                for (std::size_t a = 0; a < alphabet; ++a) e.succ.push_back(rng.index(space.size()));
            }
            return f;
        };
        const auto t1 = family();
        const auto t2 = family();

        // Couplings of two machine elements exist only for equal outputs and
        // are then unique, so the per-pair optimum has a closed form.
        auto pair_value = [&](const MachineElem& u, const MachineElem& v) {
            if (u.output != v.output) return params.top;
            double worst = 0.0;
            for (std::size_t a = 0; a < alphabet; ++a)
                worst = std::max(worst, space.dist(u.succ[a], v.succ[a]));
            return params.c * worst;
        };
        std::vector<double> direct_cost(t1.size() * t2.size());
        std::vector<double> nested_cost(t1.size() * t2.size());
        for (std::size_t i = 0; i < t1.size(); ++i)
            for (std::size_t j = 0; j < t2.size(); ++j) {
                direct_cost[i * t2.size() + j] = pair_value(t1[i], t2[j]);
                nested_cost[i * t2.size() + j] =
                    m2_lift(params, space, static_cast<int>(t1[i].output), t1[i].succ,
                            static_cast<int>(t2[j].output), t2[j].succ);
            }
        const double direct = min_max_relation(direct_cost, t1.size(), t2.size(), params.top).value;
        const double nested = hausdorff_on_costs(nested_cost, t1.size(), t2.size(), params.top);
        record(report, "pow-m2", std::abs(direct - nested) <= 1e-6, show(direct, nested));
    }
}

}  // namespace

CheckReport compositionality_check(CompositePair pair, const PseudometricSpace& space,
                                   int instances, std::uint64_t rng_seed,
                                   const LiftParams& params) {
    CheckReport report;
    Sampler rng(rng_seed);
    switch (pair) {
        case CompositePair::DistDist:
            check_dist_dist(report, space, instances, rng);
            break;
        case CompositePair::PowPow:
            check_pow_pow(report, space, instances, rng);
            break;
        case CompositePair::PowM2:
            check_pow_m2(report, space, instances, rng, params);
            break;
    }
    return report;
}

}  // namespace pmet
