#include "pmet/metric_space.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pmet {

double euclidean_ext(double a, double b) {
    const bool ia = std::isinf(a), ib = std::isinf(b);
    if (ia && ib) return 0.0;
    if (ia || ib) return kInf;
    return std::abs(a - b);
}

PseudometricSpace::PseudometricSpace(std::vector<std::string> elements, double top,
                                     std::vector<double> dist_row_major)
    : elements_(std::move(elements)), top_(top), dist_(std::move(dist_row_major)) {
    if (elements_.empty()) throw std::invalid_argument("pseudometric space needs a nonempty carrier");
    if (!(top_ > 0.0)) throw std::invalid_argument("top element must be positive");
    if (dist_.size() != elements_.size() * elements_.size())
        throw std::invalid_argument("distance matrix dimension mismatch");
}

PseudometricSpace PseudometricSpace::discrete(std::vector<std::string> elements, double top) {
    const std::size_t n = elements.size();
    if (n == 0) throw std::invalid_argument("discrete metric: empty element list");
    if (!(top > 0.0)) throw std::invalid_argument("discrete metric: top must be positive");
    std::vector<double> d(n * n, top);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
    return PseudometricSpace(std::move(elements), top, std::move(d));
}

PseudometricSpace PseudometricSpace::euclidean_interval(const std::vector<double>& points,
                                                        double top) {
    const std::size_t n = points.size();
    if (n == 0) throw std::invalid_argument("euclidean interval metric: empty point list");
    if (!(top > 0.0)) throw std::invalid_argument("euclidean interval metric: top must be positive");
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::isnan(points[i]) || points[i] < 0.0 || points[i] > top) {
            std::ostringstream msg;
            msg << "euclidean interval metric: point " << points[i] << " outside [0, " << top << "]";
            throw std::invalid_argument(msg.str());
        }
        names[i] = "p" + std::to_string(i);
    }
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = euclidean_ext(points[i], points[j]);
    PseudometricSpace space(std::move(names), top, std::move(d));
    space.points_ = points;
    return space;
}

std::optional<std::size_t> PseudometricSpace::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < elements_.size(); ++i)
        if (elements_[i] == name) return i;
    return std::nullopt;
}

std::string AxiomViolation::describe(const PseudometricSpace& space) const {
    std::ostringstream out;
    switch (kind) {
        case AxiomKind::Range:
            out << "range: d(" << space.element(i) << "," << space.element(j) << ") = " << lhs
                << " outside [0, " << space.top() << "]";
            break;
        case AxiomKind::Reflexivity:
            out << "reflexivity: d(" << space.element(i) << "," << space.element(i) << ") = " << lhs;
            break;
        case AxiomKind::Symmetry:
            out << "symmetry: d(" << space.element(i) << "," << space.element(j) << ") = " << lhs
                << " but d(" << space.element(j) << "," << space.element(i) << ") = " << rhs;
            break;
        case AxiomKind::Triangle:
            out << "triangle: d(" << space.element(i) << "," << space.element(j) << ") = " << lhs
                << " > d(.," << space.element(k) << ") sum = " << rhs;
            break;
    }
    return out.str();
}

std::vector<AxiomViolation> validate_distance_matrix(std::size_t n,
                                                     const std::vector<double>& dist,
                                                     double top) {
    if (dist.size() != n * n) throw std::invalid_argument("validate: distance matrix dimension mismatch");
    std::vector<AxiomViolation> violations;
    auto at = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double d = at(i, j);
            const bool in_range =
                !std::isnan(d) && d >= -kEpsNum && (d <= top + kEpsNum || (std::isinf(d) && std::isinf(top)));
            if (!in_range) violations.push_back({AxiomKind::Range, i, j, 0, d, top});
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!(at(i, i) <= kEpsNum)) violations.push_back({AxiomKind::Reflexivity, i, i, 0, at(i, i), 0.0});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (euclidean_ext(at(i, j), at(j, i)) > kEpsNum)
                violations.push_back({AxiomKind::Symmetry, i, j, 0, at(i, j), at(j, i)});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                const double lhs = at(i, j);
                const double rhs = at(i, k) + at(k, j);  // x + inf = inf
                if (std::isinf(rhs)) continue;
                if (lhs > rhs + kEpsNum) violations.push_back({AxiomKind::Triangle, i, j, k, lhs, rhs});
            }
    return violations;
}

std::vector<AxiomViolation> validate_pseudometric(const PseudometricSpace& space) {
    return validate_distance_matrix(space.size(), space.matrix(), space.top());
}

}  // namespace pmet
