#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pns/closed_form.hpp"
#include "pns/grid.hpp"

namespace pns {

/// One-dimensional rule on [lower, upper].
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [a, b].
AxisRule gauss_legendre_rule(int n, double a, double b);

/// A face of the box: axis and side (0 = lower wall, 1 = upper wall).
struct Face {
    Axis axis;
    int side;

    double normal_sign() const noexcept { return side == 0 ? -1.0 : 1.0; }
};

inline constexpr std::array<Face, 6> kFaces{Face{Axis::x, 0}, Face{Axis::x, 1}, Face{Axis::y, 0},
                                            Face{Axis::y, 1}, Face{Axis::z, 0}, Face{Axis::z, 1}};

std::string to_string(const Face& face);

/// Tensor-product rule on the box [0, 2 pi L]^3, x-fastest node order. The lattice
/// variant uses the collocation nodes of a grid (exact for periodic trigonometric
/// polynomials); the Gauss-Legendre variant suits non-periodic closed forms.
class BoxQuadrature {
public:
    static BoxQuadrature lattice(const SpectralGrid& grid);
    static BoxQuadrature gauss_legendre(int nodes_per_axis, double box_length);

    bool is_lattice() const noexcept { return grid_.has_value(); }
    /// The grid of a lattice rule; throws InvalidState otherwise.
    const SpectralGrid& grid() const;
    const std::string& rule_name() const noexcept { return name_; }

    int nodes_per_axis() const noexcept { return static_cast<int>(axis_.nodes.size()); }
    std::size_t size() const noexcept { return axis_.nodes.size() * axis_.nodes.size() * axis_.nodes.size(); }
    std::size_t face_size() const noexcept { return axis_.nodes.size() * axis_.nodes.size(); }
    double box_length() const noexcept { return box_length_; }
    double lower() const noexcept { return 0.0; }
    double upper() const noexcept;
    const AxisRule& axis() const noexcept { return axis_; }

    Point3 point(std::size_t idx) const;
    double weight(std::size_t idx) const;
    /// Node `idx` of a face (x-fastest over the two free axes).
    Point3 face_point(const Face& face, std::size_t idx) const;
    double face_weight(std::size_t idx) const;

    double integrate(std::span<const double> values) const;
    double integrate_face(std::span<const double> values) const;
    /// sqrt(integral of v^2).
    double l2(std::span<const double> values) const;

private:
    BoxQuadrature(std::string name, AxisRule axis, double box_length, std::optional<SpectralGrid> grid)
        : name_(std::move(name)), axis_(std::move(axis)), box_length_(box_length), grid_(std::move(grid)) {}

    std::string name_;
    AxisRule axis_;
    double box_length_;
    std::optional<SpectralGrid> grid_;
};

struct AdaptiveResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 31-point Gauss-Kronrod integration to relative tolerance `tol`.
AdaptiveResult adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol);

}  // namespace pns
