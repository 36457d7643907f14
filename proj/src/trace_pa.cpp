#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "pmet/trace.hpp"

namespace pmet {

namespace {

void check_pa_params(const LiftParams& params) {
    params.validate();
    if (params.eval != EvalKind::Convex)
        throw std::invalid_argument("pa distances use the convex machine convention");
}

// Interned reachable distributions with per-symbol steps and expected outputs.
struct DistRegistry {
    const PaCoalgebra& pa;
    std::unordered_map<PaKey, std::size_t, PaKeyHash> ids;
    std::vector<FinDist> pool;
    std::vector<double> expected_output;
    std::vector<std::vector<std::size_t>> steps;  // [id][symbol], filled lazily

    explicit DistRegistry(const PaCoalgebra& owner) : pa(owner) {}

    std::size_t intern(const FinDist& p) {
        PaKey key = pa_memo_key(p);
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        const std::size_t id = pool.size();
        ids.emplace(std::move(key), id);
        pool.push_back(p);
        double out = 0.0;
        for (const auto& [x, w] : p.entries()) out += w * pa.output[x];
        expected_output.push_back(out);
        steps.emplace_back();
        return id;
    }

    std::size_t step(std::size_t id, std::size_t symbol) {
        if (steps[id].empty()) {
            const PaStep s = determinize_step_pa(pa, pool[id]);
            std::vector<std::size_t> row;  // intern may reallocate steps, fill locally
            row.reserve(s.succ.size());
            for (const auto& q : s.succ) row.push_back(intern(q));
            steps[id] = std::move(row);
        }
        return steps[id][symbol];
    }
};

struct PairKeyHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& p) const {
        return p.first * 0x9e3779b97f4a7c15ULL + p.second;
    }
};

}  // namespace

PaTraceValue pa_trace_distance(const PaCoalgebra& pa, const LiftParams& params, std::size_t x,
                               std::size_t y, std::optional<double> epsilon, int max_depth) {
    pa.validate();
    check_pa_params(params);
    if (x >= pa.state_count() || y >= pa.state_count())
        throw std::invalid_argument("pa trace: undeclared state");

    const double abs_bound = std::min(params.top, 1.0);  // word weights live in [0,1]
    const std::size_t alphabet = pa.alphabet_size();

    int depth_limit = max_depth;
    if (epsilon) {
        if (!(*epsilon > 0.0)) throw std::invalid_argument("pa trace: epsilon must be positive");
        if (params.c2 >= 1.0)
            throw std::invalid_argument("pa trace: epsilon certification needs c2 < 1");
        // smallest N with c1 * bound * c2^N / (1 - c2) <= epsilon
        int n = 0;
        double tail = params.c1 * abs_bound / (1.0 - params.c2);
        while (tail > *epsilon) {
            tail *= params.c2;
            if (++n > 100000) throw std::invalid_argument("pa trace: epsilon too small to certify");
        }
        depth_limit = n;
    } else if (max_depth < 0) {
        throw std::invalid_argument("pa trace: negative depth");
    }

    DistRegistry reg(pa);
    const std::size_t sx = reg.intern(FinDist::dirac(x));
    const std::size_t sy = reg.intern(FinDist::dirac(y));

    using Level = std::unordered_map<std::pair<std::size_t, std::size_t>, double, PairKeyHash>;
    Level level;
    if (sx != sy) level[{sx, sy}] = 1.0;

    PaTraceValue result;
    double factor = params.c1;  // c1 * (c2/|A|)^depth
    const double ratio = params.c2 / static_cast<double>(alphabet);
    int depth = 0;
    while (depth < depth_limit && !level.empty()) {
        double level_sum = 0.0;
        for (const auto& [pair, count] : level)
            level_sum += count * std::abs(reg.expected_output[pair.first] - reg.expected_output[pair.second]);
        result.value += factor * level_sum;

        Level next;
        for (const auto& [pair, count] : level)
            for (std::size_t a = 0; a < alphabet; ++a) {
                const std::size_t u = reg.step(pair.first, a);
                const std::size_t v = reg.step(pair.second, a);
                if (u == v) continue;  // identical processes contribute nothing forever
                next[{u, v}] += count;
            }
        level.swap(next);
        factor *= ratio;
        ++depth;
    }
    if (!level.empty() && depth == depth_limit) {
        // final level still contributes its output term
        double level_sum = 0.0;
        for (const auto& [pair, count] : level)
            level_sum += count * std::abs(reg.expected_output[pair.first] - reg.expected_output[pair.second]);
        result.value += factor * level_sum;
        ++depth;
    }

    result.depth = depth;
    if (level.empty()) {
        result.converged = true;
        result.error_bound = 0.0;
    } else if (params.c2 < 1.0) {
        double pow_c2 = 1.0;
        for (int i = 0; i < depth; ++i) pow_c2 *= params.c2;
        result.error_bound = params.c1 * abs_bound * pow_c2 / (1.0 - params.c2);
    } else {
        result.error_bound = kInf;  // truncated value with an uncertified tail
    }
    return result;
}

DistTable pa_branching_distance(const PaCoalgebra& pa, const LiftParams& params, double epsilon,
                                const IterationObserver& observer) {
    pa.validate();
    check_pa_params(params);
    if (params.c2 >= 1.0) throw std::invalid_argument("pa branching: needs c2 < 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("pa branching: epsilon must be positive");

    const std::size_t n = pa.state_count();
    const double diameter = std::min(params.top, params.c1 / (1.0 - params.c2));

    DistTable table;
    table.top = params.top;
    table.labels = pa.states;
    table.values.assign(n * n, 0.0);

    std::vector<std::string> names = pa.states;
    std::vector<double> next(n * n, 0.0);
    double contraction = diameter;  // c2^depth * diameter
    while (true) {
        const PseudometricSpace ground(names, params.top, table.values);
        bool changed = false;
        for (std::size_t x = 0; x < n; ++x) {
            next[x * n + x] = 0.0;
            for (std::size_t y = x + 1; y < n; ++y) {
                double sum = 0.0;
                for (std::size_t a = 0; a < pa.alphabet_size(); ++a)
                    sum += wasserstein_dist_lift(ground, pa.succ[x][a], pa.succ[y][a]);
                const double v = params.c1 * std::abs(pa.output[x] - pa.output[y]) +
                                 (params.c2 / static_cast<double>(pa.alphabet_size())) * sum;
                next[x * n + y] = next[y * n + x] = v;
                if (v != table.values[x * n + y]) changed = true;
            }
        }
        if (!changed) {
            table.converged = true;
            table.error_bound = 0.0;
            break;
        }
        table.values.swap(next);
        ++table.depth;
        contraction *= params.c2;
        if (observer) observer(table);
        if (contraction <= epsilon) {
            table.converged = false;
            table.error_bound = contraction;
            break;
        }
    }
    return table;
}

BranchTraceReport compare_branching_trace(const PaCoalgebra& pa, const LiftParams& params,
                                          double epsilon) {
    const DistTable branching = pa_branching_distance(pa, params, epsilon);

    BranchTraceReport report;
    for (std::size_t x = 0; x < pa.state_count(); ++x)
        for (std::size_t y = x + 1; y < pa.state_count(); ++y) {
            const PaTraceValue trace = pa_trace_distance(pa, params, x, y, epsilon, 0);
            BranchTracePair entry;
            entry.x = x;
            entry.y = y;
            entry.branching = branching.at(x, y);
            entry.trace = trace.value;
            entry.slack = branching.error_bound + trace.error_bound + 1e-9;
            entry.violation = entry.branching < entry.trace - entry.slack;
            report.any_violation = report.any_violation || entry.violation;
            report.pairs.push_back(entry);
        }
    return report;
}

}  // namespace pmet
