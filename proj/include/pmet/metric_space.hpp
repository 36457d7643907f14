#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pmet {

/// Global numeric tolerance for equality and axiom checks on finite values.
inline constexpr double kEpsNum = 1e-9;

/// Representable top element; distances live in [0, top] with top possibly infinite.
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Euclidean distance on [0, inf]: |a - b|, with d(x, inf) = inf for x != inf
/// and d(inf, inf) = 0.
double euclidean_ext(double a, double b);

/// A finite pseudometric space: an ordered carrier of named elements, a top
/// element in (0, inf], and a dense symmetric distance matrix.
///
/// The constructor checks shape only; axiom violations are detected by
/// validate_pseudometric, so deliberately broken matrices can be represented.
class PseudometricSpace {
public:
    PseudometricSpace(std::vector<std::string> elements, double top,
                      std::vector<double> dist_row_major);

    /// dist(x, y) = 0 if x == y else top.
    static PseudometricSpace discrete(std::vector<std::string> elements, double top);

    /// Points on [0, top] with the Euclidean distance; element names are p0, p1, ...
    static PseudometricSpace euclidean_interval(const std::vector<double>& points, double top);

    std::size_t size() const { return elements_.size(); }
    double top() const { return top_; }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& element(std::size_t i) const { return elements_.at(i); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    double dist(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }
    const std::vector<double>& matrix() const { return dist_; }

    /// Point value accessor for spaces built by euclidean_interval.
    const std::vector<double>& point_values() const { return points_; }

private:
    std::vector<std::string> elements_;
    double top_ = 1.0;
    std::vector<double> dist_;
    std::vector<double> points_;
};

enum class AxiomKind { Range, Reflexivity, Symmetry, Triangle };

/// One violated axiom with its witness indices. k is used by Triangle only.
struct AxiomViolation {
    AxiomKind kind;
    std::size_t i = 0, j = 0, k = 0;
    double lhs = 0.0, rhs = 0.0;

    std::string describe(const PseudometricSpace& space) const;
};

/// Empty result iff reflexivity, symmetry, the triangle inequality and the
/// range bounds 0 <= d <= top all hold within kEpsNum on finite entries;
/// infinities are compared exactly.
std::vector<AxiomViolation> validate_pseudometric(const PseudometricSpace& space);

/// Raw-matrix variant; throws std::invalid_argument when the matrix is not
/// n-by-n for the given carrier size.
std::vector<AxiomViolation> validate_distance_matrix(std::size_t n,
                                                     const std::vector<double>& dist,
                                                     double top);

}  // namespace pmet
