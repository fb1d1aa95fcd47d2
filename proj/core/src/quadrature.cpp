#include "pns/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pns/error.hpp"
#include "pns/summation.hpp"

namespace pns {

AxisRule gauss_legendre_rule(int n, double a, double b) {
    require(n >= 1, ErrorKind::InvalidArgument, "Gauss-Legendre rule needs at least one node");
    require(b > a, ErrorKind::InvalidArgument, "Gauss-Legendre interval must be non-empty");
    const auto zeros = boost::math::legendre_p_zeros<double>(n);
    std::vector<double> x, w;
    for (double z : zeros) {
        const double d = boost::math::legendre_p_prime(n, z);
        const double wt = 2.0 / ((1.0 - z * z) * d * d);
        x.push_back(z);
        w.push_back(wt);
        if (z != 0.0) {
            x.push_back(-z);
            w.push_back(wt);
        }
    }
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
    AxisRule rule;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i : order) {
        rule.nodes.push_back(mid + half * x[i]);
        rule.weights.push_back(half * w[i]);
    }
    return rule;
}

std::string to_string(const Face& face) {
    static constexpr const char* names[] = {"x", "y", "z"};
    return std::string(names[static_cast<int>(face.axis)]) + (face.side == 0 ? "-lower" : "-upper");
}

BoxQuadrature BoxQuadrature::lattice(const SpectralGrid& grid) {
    AxisRule rule;
    for (int i = 0; i < grid.n_modes(); ++i) {
        rule.nodes.push_back(grid.coordinate(i));
        rule.weights.push_back(grid.spacing());
    }
    return BoxQuadrature("lattice", std::move(rule), grid.box_length(), grid);
}

BoxQuadrature BoxQuadrature::gauss_legendre(int nodes_per_axis, double box_length) {
    require(nodes_per_axis >= 2, ErrorKind::InvalidArgument, "Gauss-Legendre box rule needs >= 2 nodes per axis");
    require(std::isfinite(box_length) && box_length > 0.0, ErrorKind::InvalidArgument,
            "box_length must be positive");
    return BoxQuadrature("gauss-legendre", gauss_legendre_rule(nodes_per_axis, 0.0, 2.0 * std::numbers::pi * box_length),
                         box_length, std::nullopt);
}

const SpectralGrid& BoxQuadrature::grid() const {
    if (!grid_) fail(ErrorKind::InvalidState, "quadrature rule is not attached to a spectral grid");
    return *grid_;
}

double BoxQuadrature::upper() const noexcept { return 2.0 * std::numbers::pi * box_length_; }

Point3 BoxQuadrature::point(std::size_t idx) const {
    const std::size_t n = axis_.nodes.size();
    return {axis_.nodes[idx % n], axis_.nodes[(idx / n) % n], axis_.nodes[idx / (n * n)]};
}

double BoxQuadrature::weight(std::size_t idx) const {
    const std::size_t n = axis_.nodes.size();
    return axis_.weights[idx % n] * axis_.weights[(idx / n) % n] * axis_.weights[idx / (n * n)];
}

Point3 BoxQuadrature::face_point(const Face& face, std::size_t idx) const {
    const std::size_t n = axis_.nodes.size();
    const double a = axis_.nodes[idx % n], b = axis_.nodes[idx / n];
    const double wall = face.side == 0 ? lower() : upper();
    switch (face.axis) {
    case Axis::x: return {wall, a, b};
    case Axis::y: return {a, wall, b};
    default: return {a, b, wall};
    }
}

double BoxQuadrature::face_weight(std::size_t idx) const {
    const std::size_t n = axis_.nodes.size();
    return axis_.weights[idx % n] * axis_.weights[idx / n];
}

double BoxQuadrature::integrate(std::span<const double> values) const {
    require(values.size() == size(), ErrorKind::InvalidArgument, "sample count does not match the quadrature rule");
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i) s.add(weight(i) * values[i]);
    return s.value();
}

double BoxQuadrature::integrate_face(std::span<const double> values) const {
    require(values.size() == face_size(), ErrorKind::InvalidArgument, "face sample count does not match the rule");
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i) s.add(face_weight(i) * values[i]);
    return s.value();
}

double BoxQuadrature::l2(std::span<const double> values) const {
    require(values.size() == size(), ErrorKind::InvalidArgument, "sample count does not match the quadrature rule");
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i) s.add(weight(i) * values[i] * values[i]);
    return std::sqrt(std::max(0.0, s.value()));
}

AdaptiveResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    require(tol > 0.0, ErrorKind::InvalidArgument, "quadrature tolerance must be positive");
    AdaptiveResult r;
    if (a == b) return r;
    double leaf_error = 0.0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol, &leaf_error);
    // leaf estimates are in units of the [-1, 1] rescaling of each sub-interval;
    // the full half-width bounds every sub-interval scale
    r.error = leaf_error * 0.5 * std::abs(b - a);
    return r;
}

}  // namespace pns
