#include "pns/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pns/error.hpp"
#include "pns/format.hpp"
#include "pns/quadrature.hpp"
#include "pns/spectral.hpp"
#include "pns/summation.hpp"

namespace pns {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr const char* kCenterNote = "|x| measured from the box center; f must vanish on the box boundary";

struct Integrals {
    double gradient = 0.0;  // int |grad f|^p
    double weighted = 0.0;  // int |f|^p / |x|^p
    double max_f = 0.0;
    double boundary_max = 0.0;
    std::string rule;
};

void check_exponent(double p, int n) {
    require(n >= 2, ErrorKind::InvalidArgument, "dimension must be at least 2, got " + std::to_string(n));
    require(std::isfinite(p) && p >= 1.0 && p < n, ErrorKind::InvalidExponent,
            "exponent p=" + format_double(p) + " must satisfy 1 <= p < n=" + std::to_string(n));
}

void check_support(const Integrals& in) {
    if (in.boundary_max > 1e-10 * in.max_f)
        fail(ErrorKind::Precondition, "f is not compactly supported in the box: boundary max " +
                                          format_double(in.boundary_max) + " vs max " + format_double(in.max_f));
}

Integrals lattice_integrals(const ScalarField& f_in, double p, double floor) {
    const SpectralGrid& g = f_in.grid();
    const ScalarField f = as_physical(f_in);
    const VectorField grad = to_physical(gradient(as_spectral(f_in)));
    const int n = g.n_modes();
    const double c = 0.5 * g.extent();
    Integrals out;
    out.rule = "lattice N=" + std::to_string(n);
    CompensatedSum sg, sw;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::size_t idx = g.index(i, j, k);
                const double v = f.values()[idx];
                const double gx = grad[0].values()[idx], gy = grad[1].values()[idx], gz = grad[2].values()[idx];
                const double dx = g.coordinate(i) - c, dy = g.coordinate(j) - c, dz = g.coordinate(k) - c;
                const double r = std::max(std::sqrt(dx * dx + dy * dy + dz * dz), floor);
                sg.add(std::pow(std::sqrt(gx * gx + gy * gy + gz * gz), p));
                sw.add(std::pow(std::abs(v) / r, p));
                out.max_f = std::max(out.max_f, std::abs(v));
                if (i == 0 || j == 0 || k == 0) out.boundary_max = std::max(out.boundary_max, std::abs(v));
            }
    out.gradient = sg.value() * g.cell_volume();
    out.weighted = sw.value() * g.cell_volume();
    return out;
}

Integrals line_integrals(const ClosedFormField& f, double p, const HardyOptions& o) {
    require(o.nodes >= 4, ErrorKind::InvalidArgument, "hardy quadrature needs at least 4 nodes");
    require(o.box_length > 0.0, ErrorKind::InvalidArgument, "box length must be positive");
    const double side = 2.0 * kPi * o.box_length, c = 0.5 * side;
    const double reach = std::sqrt(3.0) * c;
    const int n_mu = o.nodes, n_phi = o.nodes, n_r = 4 * o.nodes;
    const AxisRule mu = gauss_legendre_rule(n_mu, -1.0, 1.0);
    const double h = 2.0 * reach / n_r, w_phi = kPi / n_phi;

    Integrals out;
    out.rule = "center lines nodes=" + std::to_string(o.nodes);
    CompensatedSum sg, sw;
    for (int a = 0; a < n_mu; ++a) {
        const double m = mu.nodes[a], s = std::sqrt(std::max(0.0, 1.0 - m * m));
        for (int b = 0; b < n_phi; ++b) {
            const double phi = b * w_phi;
            const double ex = s * std::cos(phi), ey = s * std::sin(phi), ez = m;
            const double w_line = mu.weights[a] * w_phi * h;
            for (int q = 0; q < n_r; ++q) {
                const double r = -reach + (q + 0.5) * h;
                const Point4 pt{c + r * ex, c + r * ey, c + r * ez, o.t};
                if (pt.x < 0 || pt.x > side || pt.y < 0 || pt.y > side || pt.z < 0 || pt.z > side) continue;
                const Jet<1> j = f.jet<1>(pt);
                const double v = j.value();
                const double gx = j.derivative({1, 0, 0, 0}), gy = j.derivative({0, 1, 0, 0}),
                             gz = j.derivative({0, 0, 1, 0});
                const double rr = std::max(std::abs(r), o.radius_floor);
                sg.add(w_line * r * r * std::pow(std::sqrt(gx * gx + gy * gy + gz * gz), p));
                sw.add(w_line * r * r * std::pow(std::abs(v) / rr, p));
                out.max_f = std::max(out.max_f, std::abs(v));
            }
        }
    }
    out.gradient = sg.value();
    out.weighted = sw.value();

    // boundary faces on a uniform lattice
    const int nb = std::max(o.nodes, 16);
    for (const Face face : kFaces) {
        const int ax = static_cast<int>(face.axis);
        for (int u = 0; u <= nb; ++u)
            for (int v = 0; v <= nb; ++v) {
                double xyz[3];
                xyz[ax] = face.side == 0 ? 0.0 : side;
                xyz[(ax + 1) % 3] = side * u / nb;
                xyz[(ax + 2) % 3] = side * v / nb;
                out.boundary_max = std::max(out.boundary_max, std::abs(f.value({xyz[0], xyz[1], xyz[2], o.t})));
            }
    }
    return out;
}

InequalityReport hardy_report(const std::string& name, const Integrals& in, double p, int n) {
    check_support(in);
    InequalityReport r;
    r.name = "hardy:" + name;
    r.p = p;
    r.n = n;
    r.constant = p / (n - p);
    r.lhs = std::pow(in.weighted, 1.0 / p);
    r.rhs = r.constant * std::pow(in.gradient, 1.0 / p);
    r.margin = r.rhs - r.lhs;
    r.satisfied = r.lhs <= r.rhs + 1e-10 * std::max(1.0, r.rhs);
    r.rule = in.rule;
    r.notes = kCenterNote;
    return r;
}

SandwichReport sandwich(const std::string& name, const Integrals& in, double p) {
    check_support(in);
    SandwichReport r;
    r.name = "sandwich:" + name;
    r.p = p;
    r.constant = std::pow((p - 1.0) / p, p);
    r.gradient_term = -in.gradient;
    r.hardy_term = -r.constant * in.weighted;
    const double tol = 1e-10 * std::max({1.0, std::abs(r.gradient_term), std::abs(r.hardy_term)});
    r.clause_nonnegative = 0.0 <= r.gradient_term;
    r.clause_middle = r.gradient_term <= r.hardy_term + tol;
    r.clause_negative = r.hardy_term < 0.0;
    r.chain_holds = r.clause_nonnegative && r.clause_middle && r.clause_negative;
    r.rule = in.rule;
    r.notes = std::string(kCenterNote) + "; finite-volume values only, no volume limit is taken";
    return r;
}

}  // namespace

InequalityReport hardy_check(const ClosedFormField& f, double p, int n, const HardyOptions& options) {
    check_exponent(p, n);
    return hardy_report(f.name(), line_integrals(f, p, options), p, n);
}

InequalityReport hardy_check(const ScalarField& f, double p, int n, double radius_floor) {
    check_exponent(p, n);
    return hardy_report("grid", lattice_integrals(f, p, radius_floor), p, n);
}

SandwichReport sandwich_report(const ScalarField& f, double p, double radius_floor) {
    check_exponent(p, 3);
    return sandwich("grid", lattice_integrals(f, p, radius_floor), p);
}

SandwichReport sandwich_report(const ClosedFormField& f, double p, const HardyOptions& options) {
    check_exponent(p, 3);
    return sandwich(f.name(), line_integrals(f, p, options), p);
}

}  // namespace pns
