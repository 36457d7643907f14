#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pmet/metric_space.hpp"

namespace pmet {

/// Balanced transportation instance: nonnegative finite costs, marginals
/// summing to one (within kEpsNum) on each side.
struct TransportProblem {
    std::size_t rows = 0, cols = 0;
    std::vector<double> cost;    // rows*cols, row-major
    std::vector<double> supply;  // length rows
    std::vector<double> demand;  // length cols
};

struct TransportPlan {
    std::size_t rows = 0, cols = 0;
    std::vector<double> flow;  // rows*cols, row-major
    double objective = 0.0;

    double at(std::size_t i, std::size_t j) const { return flow[i * cols + j]; }
};

/// Exact minimum-cost plan via successive shortest augmenting paths on the
/// bipartite supply/demand graph. Throws std::invalid_argument on dimension
/// mismatch, marginal sums that differ beyond kEpsNum, or non-finite costs;
/// infinite costs must be resolved by the caller beforehand.
TransportPlan solve_transportation(const TransportProblem& problem);

struct TransportArc {
    std::size_t i = 0, j = 0;
    double cost = 0.0;
};

/// Routing restricted to an explicit arc list. Returns std::nullopt when the
/// marginals cannot be matched using those arcs alone (callers use this to
/// express "no finite-cost coupling exists").
std::optional<TransportPlan> solve_transportation_arcs(std::size_t rows, std::size_t cols,
                                                       const std::vector<TransportArc>& arcs,
                                                       const std::vector<double>& supply,
                                                       const std::vector<double>& demand);

enum class Relation { LessEq, Equal, GreaterEq };
enum class LpSense { Minimize, Maximize };

struct LpConstraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEq;
    double rhs = 0.0;
};

/// Per-variable interval; lo must be finite, hi may be kInf.
struct LpBounds {
    double lo = 0.0;
    double hi = kInf;
};

struct LpSolution {
    double value = 0.0;
    std::vector<double> x;
};

struct LpInfeasible : std::runtime_error {
    LpInfeasible() : std::runtime_error("linear program is infeasible") {}
};
struct LpUnbounded : std::runtime_error {
    LpUnbounded() : std::runtime_error("linear program is unbounded") {}
};

/// Vertex-optimal solution of a small dense LP by two-phase full-tableau
/// simplex with Bland's rule.
LpSolution solve_dense_lp(LpSense sense, const std::vector<double>& objective,
                          const std::vector<LpConstraint>& constraints,
                          const std::vector<LpBounds>& bounds);

}  // namespace pmet
