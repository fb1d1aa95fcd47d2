#include "pns/residuals.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "pns/error.hpp"
#include "pns/format.hpp"
#include "pns/spectral.hpp"
#include "pns/summation.hpp"

namespace pns {
namespace {

using Values = std::vector<double>;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
    const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ResidualReport make_report(std::string name, const FlowParams& params, double t, int n, double L, std::string rule) {
    ResidualReport r;
    r.name = std::move(name);
    r.n_modes = n;
    r.box_length = L;
    r.rule = std::move(rule);
    r.t = t;
    r.rho = params.rho;
    r.mu = params.mu;
    r.delta = params.delta;
    r.eta = params.eta;
    r.forced = params.force.has_value();
    r.params_hash = params_hash(params);
    r.timestamp = utc_timestamp();
    return r;
}

ResidualReport report_on(std::string name, const FlowParams& params, double t, const BoxQuadrature& rule) {
    return make_report(std::move(name), params, t, rule.nodes_per_axis(), rule.box_length(), rule.rule_name());
}

double l1(const BoxQuadrature& rule, const Values& v) {
    CompensatedSum s;
    for (std::size_t i = 0; i < v.size(); ++i) s.add(rule.weight(i) * std::abs(v[i]));
    return s.value();
}

void fill_norms(ResidualReport& r, const ScalarField& f) {
    r.l2 = norm(f, 2.0);
    r.linf = max_abs(f);
}

// Norms over the unmasked nodes of a rule.
void fill_norms(ResidualReport& r, const BoxQuadrature& rule, const Values& v, const std::vector<bool>* mask = nullptr) {
    CompensatedSum s;
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask && (*mask)[i]) continue;
        s.add(rule.weight(i) * v[i] * v[i]);
        m = std::max(m, std::abs(v[i]));
    }
    r.l2 = std::sqrt(std::max(0.0, s.value()));
    r.linf = m;
}

constexpr MultiIndex D(int x, int y, int z, int t) { return {x, y, z, t}; }

// Velocity partials used repeatedly.
struct Velocity {
    Sampler& s;
    const FieldBundle& u;
    const FieldSource& c(int i) const { return i == 0 ? u.ux : i == 1 ? u.uy : u.uz; }
    const Values& operator()(int i, const MultiIndex& a) const { return s.volume(c(i), a); }
};

// First derivative multi-index along axis a (0..3 with 3 = t).
constexpr MultiIndex d1(int a) { return {a == 0, a == 1, a == 2, a == 3}; }

VectorField sample_force(const FlowParams& params, const BoxQuadrature& rule) {
    require(rule.is_lattice() && params.force->grid() == rule.grid(), ErrorKind::InvalidArgument,
            "a body force needs the lattice rule of its own grid");
    return as_physical(*params.force);
}

}  // namespace

std::string residual_csv_header() { return "name,N,L,t,l2,linf,params_hash"; }

std::string residual_csv_row(const ResidualReport& r) {
    return r.name + "," + std::to_string(r.n_modes) + "," + format_double(r.box_length) + "," + format_double(r.t) +
           "," + format_double(r.l2) + "," + format_double(r.linf) + "," + r.params_hash;
}

MomentumResidual momentum_residual(const VectorField& u_in, const ScalarField& P_in, const FlowParams& params,
                                   const VectorField& dudt_in, double t) {
    params.validate();
    const SpectralGrid& g = u_in.grid();
    require_same_grid(g, P_in.grid(), "momentum_residual pressure");
    require_same_grid(g, dudt_in.grid(), "momentum_residual rate");
    if (params.force) require_same_grid(g, params.force->grid(), "momentum_residual force");

    const VectorField u = as_physical(u_in);
    const VectorField us = as_spectral(u_in);
    const VectorField dudt = as_physical(dudt_in);
    const ScalarField Ps = as_spectral(P_in);

    MomentumResidual out;
    static constexpr const char* names[] = {"momentum-x", "momentum-y", "momentum-z"};
    for (int i = 0; i < 3; ++i) {
        ScalarField advect = ScalarField::zeros(g);
        for (int j = 0; j < 3; ++j)
            advect += hadamard(u[j], to_physical(derivative(us[i], kAxes[j])));
        ScalarField r = params.rho * (dudt[i] + advect) - params.mu * to_physical(laplacian(us[i])) +
                        to_physical(derivative(Ps, kAxes[i]));
        if (params.force) r -= params.rho * as_physical((*params.force)[i]);
        out.momentum[i] = make_report(names[i], params, t, g.n_modes(), g.box_length(), "lattice");
        fill_norms(out.momentum[i], r);
    }
    out.continuity = make_report("continuity", params, t, g.n_modes(), g.box_length(), "lattice");
    fill_norms(out.continuity, to_physical(divergence(us)));
    return out;
}

VectorField snapshot_rate(const std::array<SnapshotSeries, 3>& u, double t) {
    return {FieldSource(u[0]).grid_field(t, 1), FieldSource(u[1]).grid_field(t, 1), FieldSource(u[2]).grid_field(t, 1)};
}

ScalarField pzz_rhs(const ClosedFormField& uz_f, const ClosedFormField& ux_f, const ClosedFormField& uy_f,
                    const SpectralGrid& grid, double delta, double t) {
    const auto rule = BoxQuadrature::lattice(grid);
    Sampler s(rule, t);
    const FieldSource uz(uz_f), ux(ux_f), uy(uy_f);
    const Values& w = s.volume(uz, D(0, 0, 0, 0));
    const Values& wxx = s.volume(uz, D(2, 0, 0, 0));
    const Values& wyy = s.volume(uz, D(0, 2, 0, 0));
    const Values& wzz = s.volume(uz, D(0, 0, 2, 0));
    const Values& wz = s.volume(uz, D(0, 0, 1, 0));
    const Values& wxz = s.volume(uz, D(1, 0, 1, 0));
    const Values& wyz = s.volume(uz, D(0, 1, 1, 0));
    const Values& wzt = s.volume(uz, D(0, 0, 1, 1));
    const Values& wzzz = s.volume(uz, D(0, 0, 3, 0));
    const Values& vx = s.volume(ux, D(0, 0, 0, 0));
    const Values& vy = s.volume(uy, D(0, 0, 0, 0));
    std::vector<double> out(rule.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = -w[i] * (wxx[i] + wyy[i] + wzz[i]) - w[i] * wxx[i] - w[i] * wyy[i] - wz[i] * wz[i] -
                 w[i] * wzz[i] + wxz[i] + wyz[i] - delta * vx[i] * wxz[i] - delta * vy[i] * wyz[i] - wzt[i] -
                 wzzz[i];
    }
    return ScalarField::physical(grid, std::move(out));
}

ResidualReport pzz_residual(const ClosedFormField& uz, const ClosedFormField& ux, const ClosedFormField& uy,
                            const ScalarField& P, const FlowParams& params, double t) {
    params.validate();
    const SpectralGrid& g = P.grid();
    const ScalarField pzz = to_physical(derivative(as_spectral(P), Axis::z, 2));
    auto r = make_report("pzz", params, t, g.n_modes(), g.box_length(), "lattice");
    fill_norms(r, pzz - pzz_rhs(uz, ux, uy, g, params.delta, t));
    return r;
}

double tensor_integrand(double dt_uz, const std::array<double, 3>& b, const std::array<double, 3>& grad_uz) {
    const double bb = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
    const double gg = std::sqrt(grad_uz[0] * grad_uz[0] + grad_uz[1] * grad_uz[1] + grad_uz[2] * grad_uz[2]);
    return std::abs(dt_uz) * bb * gg;
}

GammaTerms gamma_terms(const FieldBundle& u, const FlowParams& params, double t, const BoxQuadrature& rule) {
    params.validate();
    Sampler s(rule, t);
    Velocity v{s, u};
    const double d = params.delta, rho = params.rho, mu = params.mu;
    const double c = 1.0 / d - 1.0;
    const std::size_t n = rule.size();

    const Values& w = v(2, D(0, 0, 0, 0));
    const Values& wt = v(2, D(0, 0, 0, 1));
    const Values& wx = v(2, D(1, 0, 0, 0));
    const Values& wy = v(2, D(0, 1, 0, 0));
    const Values& wz = v(2, D(0, 0, 1, 0));
    const Values& wzt = v(2, D(0, 0, 1, 1));
    const Values& wxx = v(2, D(2, 0, 0, 0));
    const Values& wyy = v(2, D(0, 2, 0, 0));
    const Values& wzz = v(2, D(0, 0, 2, 0));
    const Values& uxt = v(0, D(0, 0, 0, 1));
    const Values& uyt = v(1, D(0, 0, 0, 1));

    GammaTerms out;
    out.k_term_used = u.k_field.has_value();
    const Values* K = out.k_term_used ? &s.volume(*u.k_field, D(0, 0, 0, 0)) : nullptr;
    if (out.k_term_used) out.notes.push_back("K term included from a user-supplied field");
    else out.notes.push_back("K term absent (taken as 0)");

    out.gamma1.resize(n);
    out.gamma2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double g1 = c * wt[i] * wt[i] + mu * wt[i] * (wxx[i] + wyy[i] + wzz[i]) / rho * (1.0 - 1.0 / d);
        if (K) g1 += c * wt[i] * (*K)[i] / rho;
        out.gamma1[i] = g1;
        out.gamma2[i] = w[i] * wz[i] * wt[i] + w[i] * w[i] * wzt[i] +
                        (2.0 * uxt[i] * w[i] * wx[i] + 2.0 * uyt[i] * w[i] * wy[i] + 2.0 * wt[i] * w[i] * wz[i]) / d;
    }
    out.gamma1_integral = rule.integrate(out.gamma1);
    out.gamma2_integral = rule.integrate(out.gamma2);
    out.gamma1_l1 = l1(rule, out.gamma1);
    out.gamma2_l1 = l1(rule, out.gamma2);

    if (!u.pressure) {
        out.notes.push_back("no pressure supplied: Gamma3 not evaluated");
        return out;
    }
    const FieldSource& P = *u.pressure;
    Gamma3 g3;
    CompensatedSum surface, surface_b;
    for (int f = 0; f < 6; ++f) {
        const Face face = kFaces[f];
        const int a = static_cast<int>(face.axis);
        const Values& fw = s.face(u.uz, face, D(0, 0, 0, 0));
        const Values& fpa = s.face(P, face, d1(a));
        const Values& fpz = s.face(P, face, D(0, 0, 1, 0));
        const Values& fua = s.face(v.c(a), face, D(0, 0, 0, 0));
        Values grad_part(rule.face_size()), b_part(rule.face_size());
        for (std::size_t i = 0; i < grad_part.size(); ++i) {
            grad_part[i] = a == 2 ? 0.0 : fw[i] * fw[i] * fpa[i] / (d * rho);
            b_part[i] = (fua[i] / d) * fw[i] * fpz[i] / rho;
        }
        const double gp = face.normal_sign() * rule.integrate_face(grad_part);
        const double bp = face.normal_sign() * rule.integrate_face(b_part);
        g3.faces[f] = gp + bp;
        surface.add(gp + bp);
        surface_b.add(bp);
    }
    g3.surface = surface.value();

    // gradient part through the divergence theorem, with P_xx + P_yy from the
    // two-dimensional pressure Poisson relation
    const Values& px = s.volume(P, D(1, 0, 0, 0));
    const Values& py = s.volume(P, D(0, 1, 0, 0));
    const Values& uxx = v(0, D(1, 0, 0, 0));
    const Values& uxy = v(0, D(0, 1, 0, 0));
    const Values& uyx = v(1, D(1, 0, 0, 0));
    const Values& uyy = v(1, D(0, 1, 0, 0));
    const Values& ux = v(0, D(0, 0, 0, 0));
    const Values& uy = v(1, D(0, 0, 0, 0));
    Values xy(n), tensor(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double source = -rho * (uxx[i] * uxx[i] + 2.0 * uxy[i] * uyx[i] + uyy[i] * uyy[i]);
        xy[i] = (2.0 * w[i] * wx[i] * px[i] + 2.0 * w[i] * wy[i] * py[i] + w[i] * w[i] * source) / (d * rho);
        tensor[i] = tensor_integrand(wt[i], {ux[i] / d, uy[i] / d, w[i] / d}, {wx[i], wy[i], wz[i]});
    }
    g3.surface_xy = rule.integrate(xy) + surface_b.value();
    g3.tensor = rule.integrate(tensor);
    g3.value = g3.surface - g3.tensor;
    g3.value_xy = g3.surface_xy - g3.tensor;
    out.gamma3 = g3;
    out.notes.push_back("surface integrals summed over the six faces with outward normals");
    return out;
}

Omega5Report omega5_identities(const FieldBundle& u, const FlowParams& params, double t, const BoxQuadrature& rule) {
    params.validate();
    Sampler s(rule, t);
    Velocity v{s, u};
    const double d = params.delta;
    const std::size_t n = rule.size();
    Omega5Report out;

    // wall precondition
    for (const Face& face : kFaces) {
        const Values& a = s.face(u.ux, face, D(0, 0, 0, 0));
        const Values& b = s.face(u.uy, face, D(0, 0, 0, 0));
        const Values& c = s.face(u.uz, face, D(0, 0, 0, 0));
        for (std::size_t i = 0; i < a.size(); ++i)
            out.boundary_max = std::max(out.boundary_max, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
    }
    std::array<const Values*, 3> uu{&v(0, D(0, 0, 0, 0)), &v(1, D(0, 0, 0, 0)), &v(2, D(0, 0, 0, 0))};
    Values speed2(n);
    for (std::size_t i = 0; i < n; ++i) {
        speed2[i] = (*uu[0])[i] * (*uu[0])[i] + (*uu[1])[i] * (*uu[1])[i] + (*uu[2])[i] * (*uu[2])[i];
        out.interior_max = std::max(out.interior_max, std::sqrt(speed2[i]));
    }
    if (out.boundary_max > 1e-8 * out.interior_max)
        fail(ErrorKind::Precondition, "velocity does not vanish on the box walls: max boundary |u| = " +
                                          format_double(out.boundary_max) + " vs max |u| = " +
                                          format_double(out.interior_max));

    const Values& w = *uu[2];
    std::array<const Values*, 3> gw{&v(2, d1(0)), &v(2, d1(1)), &v(2, d1(2))};

    try {
        Values lhs(n);
        std::array<const Values*, 3> ut{&v(0, d1(3)), &v(1, d1(3)), &v(2, d1(3))};
        for (std::size_t i = 0; i < n; ++i) {
            double dot = 0.0;
            for (int a = 0; a < 3; ++a) dot += 2.0 * w[i] * (*gw[a])[i] * (*ut[a])[i];
            lhs[i] = dot / d;
        }
        out.lhs_time = rule.integrate(lhs);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint) throw;
        out.lhs_time = kNaN;
        out.lhs_time_singular = true;
        out.notes.push_back(std::string("time-derivative form unavailable: ") + e.what());
    }

    Values sub(n), lap_energy(n);
    const Values& wxx = v(2, D(2, 0, 0, 0));
    const Values& wyy = v(2, D(0, 2, 0, 0));
    const Values& wzz = v(2, D(0, 0, 2, 0));
    std::array<std::array<const Values*, 3>, 3> gu;
    for (int j = 0; j < 3; ++j)
        for (int a = 0; a < 3; ++a) gu[j][a] = &v(j, d1(a));
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0, grad2 = 0.0;
        for (int a = 0; a < 3; ++a) {
            double udu = 0.0;
            for (int j = 0; j < 3; ++j) udu += (*uu[j])[i] * (*gu[j][a])[i];
            acc += 2.0 * w[i] * (*gw[a])[i] * udu;
            grad2 += (*gw[a])[i] * (*gw[a])[i];
        }
        sub[i] = -d * acc;
        lap_energy[i] = 2.0 * (grad2 + w[i] * (wxx[i] + wyy[i] + wzz[i])) * speed2[i];
    }
    out.lhs_substituted = rule.integrate(sub);
    const double volume_term = rule.integrate(lap_energy);
    out.rhs = d * volume_term;

    CompensatedSum walls;
    for (const Face& face : kFaces) {
        const int a = static_cast<int>(face.axis);
        const Values& fw = s.face(u.uz, face, D(0, 0, 0, 0));
        const Values& fwa = s.face(u.uz, face, d1(a));
        const Values& fa = s.face(u.ux, face, D(0, 0, 0, 0));
        const Values& fb = s.face(u.uy, face, D(0, 0, 0, 0));
        Values flux(rule.face_size());
        for (std::size_t i = 0; i < flux.size(); ++i)
            flux[i] = 2.0 * fw[i] * fwa[i] * (fa[i] * fa[i] + fb[i] * fb[i] + fw[i] * fw[i]);
        walls.add(face.normal_sign() * rule.integrate_face(flux));
    }
    out.boundary_printed = -d * walls.value();
    out.rhs_by_parts = 0.5 * d * (volume_term - walls.value());
    out.difference = (out.lhs_time_singular ? out.lhs_substituted : out.lhs_time) - out.rhs;

    Values visc(n);
    const Values& uxxx = v(0, D(3, 0, 0, 0));
    const Values& uyyy = v(1, D(0, 3, 0, 0));
    const Values& wzzz = v(2, D(0, 0, 3, 0));
    for (std::size_t i = 0; i < n; ++i)
        visc[i] = params.mu / (d * params.rho) * w[i] * w[i] * (uxxx[i] + uyyy[i] + wzzz[i]);
    out.extension_viscous = rule.integrate(visc);
    try {
        const Values& wzt = v(2, D(0, 0, 1, 1));
        Values ext(n);
        for (std::size_t i = 0; i < n; ++i) ext[i] = w[i] * w[i] * (wzt[i] + wzzz[i]) / d;
        out.extension_time = rule.integrate(ext);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SingularPoint) throw;
        out.extension_time = kNaN;
    }
    return out;
}

CoupledReport coupled_pde_residual(const FieldBundle& u, const FieldSource& P, const FlowParams& params, double t,
                                   const BoxQuadrature& rule, const CoupledOptions& options) {
    params.validate();
    Sampler s(rule, t);
    Velocity v{s, u};
    const double d = params.delta, rho = params.rho, mu = params.mu;
    const double c = 1.0 / d - 1.0;
    const std::size_t n = rule.size();

    const Values& w = v(2, D(0, 0, 0, 0));
    const Values& wt = v(2, D(0, 0, 0, 1));
    const Values& wx = v(2, D(1, 0, 0, 0));
    const Values& wy = v(2, D(0, 1, 0, 0));
    const Values& wz = v(2, D(0, 0, 1, 0));
    const Values& wxx = v(2, D(2, 0, 0, 0));
    const Values& wyy = v(2, D(0, 2, 0, 0));
    const Values& wzz = v(2, D(0, 0, 2, 0));
    const Values& wzt = v(2, D(0, 0, 1, 1));
    const Values& wzzz = v(2, D(0, 0, 3, 0));
    const Values& wzzx = v(2, D(1, 0, 2, 0));
    const Values& ux = v(0, D(0, 0, 0, 0));
    const Values& uy = v(1, D(0, 0, 0, 0));
    const Values& uxxx = v(0, D(3, 0, 0, 0));
    const Values& uxxy = v(0, D(2, 1, 0, 0));
    const Values& uxxz = v(0, D(2, 0, 1, 0));
    const Values& uyyy = v(1, D(0, 3, 0, 0));
    const Values& uyyx = v(1, D(1, 2, 0, 0));
    const Values& uyzz = v(1, D(0, 1, 2, 0));
    const Values& uyyz = v(1, D(0, 2, 1, 0));
    const Values& pz = s.volume(P, D(0, 0, 1, 0));

    CoupledReport out;
    CompensatedSum surface;
    for (int f = 0; f < 6; ++f) {
        const Face face = kFaces[f];
        const int a = static_cast<int>(face.axis);
        const Values& fw = s.face(u.uz, face, D(0, 0, 0, 0));
        const Values& fpa = s.face(P, face, d1(a));
        const Values& fpz = s.face(P, face, D(0, 0, 1, 0));
        const Values& fua = s.face(v.c(a), face, D(0, 0, 0, 0));
        Values flux(rule.face_size());
        for (std::size_t i = 0; i < flux.size(); ++i)
            flux[i] = (a == 2 ? 0.0 : fw[i] * fw[i] * fpa[i] / (d * rho)) + (fua[i] / d) * fw[i] * fpz[i] / rho;
        out.faces[f] = face.normal_sign() * rule.integrate_face(flux);
        surface.add(out.faces[f]);
    }
    out.surface = surface.value();

    Values tensor(n), bnorm(n);
    for (std::size_t i = 0; i < n; ++i) {
        tensor[i] = tensor_integrand(wt[i], {ux[i] / d, uy[i] / d, w[i] / d}, {wx[i], wy[i], wz[i]});
        bnorm[i] = std::sqrt(ux[i] * ux[i] + uy[i] * uy[i] + w[i] * w[i]) / d;
    }
    out.tensor_integral = rule.integrate(tensor);
    const double T = out.tensor_integral;

    auto add = [&](std::string name, auto&& fn) {
        NamedTerm term{std::move(name), Values(n)};
        for (std::size_t i = 0; i < n; ++i) term.values[i] = fn(i);
        out.terms.push_back(std::move(term));
    };
    add("dt-squared", [&](std::size_t i) { return c * wt[i] * wt[i]; });
    add("viscous-dt", [&](std::size_t i) { return mu * wt[i] * (wxx[i] + wyy[i] + wzz[i]) / rho * (1.0 - 1.0 / d); });
    add("uz2-dzt", [&](std::size_t i) { return w[i] * w[i] * wzt[i]; });
    add("energy-laplacian", [&](std::size_t i) {
        const double e = ux[i] * ux[i] + uy[i] * uy[i] + w[i] * w[i];
        return d * e *
               (2.0 * wx[i] * wx[i] + 2.0 * w[i] * wxx[i] + 2.0 * wy[i] * wy[i] + 2.0 * w[i] * wyy[i] +
                2.0 * wz[i] * wz[i] + 2.0 * w[i] * wzz[i]);
    });
    add("third-order", [&](std::size_t i) {
        return -mu * w[i] * w[i] *
               (uxxx[i] + uyyy[i] + wzzz[i] + uyyx[i] + wzzx[i] + uxxy[i] + uyzz[i] + uxxz[i] + uyyz[i]) / (d * rho);
    });
    add("uz2-dzt-dzzz", [&](std::size_t i) { return w[i] * w[i] * (wzt[i] + wzzz[i]) / d; });
    add("pressure-dz", [&](std::size_t i) { return c / rho * wt[i] * pz[i]; });
    add("surface", [&](std::size_t) { return out.surface; });

    Values force_pointwise(n, 0.0);
    if (params.force) {
        const VectorField F = sample_force(params, rule);
        const ScalarField Fz_s = to_spectral(F[2]);
        const auto fx = F[0].values(), fy = F[1].values(), fz = F[2].values();
        const ScalarField fzx = to_physical(derivative(Fz_s, Axis::x)), fzy = to_physical(derivative(Fz_s, Axis::y)),
                          fzz = to_physical(derivative(Fz_s, Axis::z));
        const auto gx = fzx.values(), gy = fzy.values(), gz = fzz.values();
        const double d2 = d * d, d3 = d2 * d;
        add("force-tangential", [&](std::size_t i) { return d2 * (fx[i] * 2.0 * w[i] * wx[i] + fy[i] * 2.0 * w[i] * wy[i]); });
        add("force-z", [&](std::size_t i) { return -d3 * w[i] * wt[i] * wz[i] * fz[i]; });
        add("force-b", [&](std::size_t i) {
            return d3 * ((ux[i] / d) * (wx[i] * fz[i] + w[i] * gx[i]) + (uy[i] / d) * (wy[i] * fz[i] + w[i] * gy[i]) +
                         (w[i] / d) * (wz[i] * fz[i] + w[i] * gz[i]));
        });
    }

    std::vector<bool> b_mask(n, false);
    add("tensor", [&](std::size_t i) {
        if (bnorm[i] >= 1e-10) return -T / bnorm[i];
        if (T == 0.0) return 0.0;
        b_mask[i] = true;
        return 0.0;
    });

    Values total(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        CompensatedSum acc;
        for (const auto& term : out.terms) acc.add(term.values[i]);
        total[i] = acc.value();
    }
    out.coupled = report_on("coupled", params, t, rule);
    fill_norms(out.coupled, rule, total, &b_mask);
    out.coupled.notes.push_back("surface flux summed over six faces");

    if (!options.divided) return out;

    std::vector<bool> mask(n, false);
    for (std::size_t i = 0; i < n; ++i) mask[i] = w[i] * w[i] < options.uz2_floor || bnorm[i] < 1e-10;
    out.masked = static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
    if (static_cast<double>(out.masked) > options.mask_limit * static_cast<double>(n))
        fail(ErrorKind::DegenerateField, "u_z^2 is below " + format_double(options.uz2_floor) + " on " +
                                             std::to_string(out.masked) + " of " + std::to_string(n) + " nodes");

    const Values& uxt = v(0, d1(3));
    const Values& uyt = v(1, d1(3));
    Values r12(n, 0.0);
    const Values* ftan = nullptr;
    const Values* fzt = nullptr;
    const Values* fb = nullptr;
    for (const auto& term : out.terms) {
        if (term.name == "force-tangential") ftan = &term.values;
        if (term.name == "force-z") fzt = &term.values;
        if (term.name == "force-b") fb = &term.values;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (mask[i]) continue;
        const double w2 = w[i] * w[i];
        const double omega5 = 2.0 * w[i] * (wx[i] * uxt[i] + wy[i] * uyt[i] + wz[i] * wt[i]) / d;
        double lhs = wzt[i] + omega5 / w2 + c * wt[i] * wt[i] / w2 + w[i] * wz[i] * wt[i] / w2 +
                     mu / rho / w2 * (1.0 - 1.0 / d) * wt[i] * (wxx[i] + wyy[i] + wzz[i]) +
                     c / rho / w2 * wt[i] * pz[i] + out.surface / w2;
        if (ftan) lhs += (*ftan)[i] / w2 + (*fzt)[i] / w2 + (*fb)[i];
        r12[i] = lhs - T / (bnorm[i] * w2);
    }
    out.divided = report_on("coupled-divided", params, t, rule);
    fill_norms(*out.divided, rule, r12, &mask);
    out.divided->notes.push_back("divided by u_z^2; " + std::to_string(out.masked) + " nodes masked below floor " +
                              format_double(options.uz2_floor));
    out.divided->notes.push_back("surface flux normalised per face and summed");
    return out;
}

VectorField vorticity(const VectorField& u, VorticityMode mode, const Point3& origin) {
    if (mode == VorticityMode::curl) return as_physical(curl(u));
    const SpectralGrid& g = u.grid();
    const VectorField p = as_physical(u);
    const int n = g.n_modes();
    std::array<std::vector<double>, 3> out;
    for (auto& o : out) o.resize(g.size());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::size_t idx = g.index(i, j, k);
                const double rx = g.coordinate(i) - origin.x, ry = g.coordinate(j) - origin.y,
                             rz = g.coordinate(k) - origin.z;
                const double r2 = rx * rx + ry * ry + rz * rz;
                if (std::sqrt(r2) < 1e-8) fail(ErrorKind::SingularPoint, "angular vorticity is undefined at the origin");
                const double a = p[0].values()[idx], b = p[1].values()[idx], c = p[2].values()[idx];
                out[0][idx] = 2.0 * (ry * c - rz * b) / r2;
                out[1][idx] = 2.0 * (rz * a - rx * c) / r2;
                out[2][idx] = 2.0 * (rx * b - ry * a) / r2;
            }
    return {ScalarField::physical(g, std::move(out[0])), ScalarField::physical(g, std::move(out[1])),
            ScalarField::physical(g, std::move(out[2]))};
}

std::array<double, 3> vorticity_at(const std::array<ClosedFormField, 3>& u, const Point4& p, VorticityMode mode) {
    if (mode == VorticityMode::curl) {
        const auto a = u[0].derivatives(p, 1), b = u[1].derivatives(p, 1), c = u[2].derivatives(p, 1);
        return {c(d1(1)) - b(d1(2)), a(d1(2)) - c(d1(0)), b(d1(0)) - a(d1(1))};
    }
    const double r2 = p.x * p.x + p.y * p.y + p.z * p.z;
    if (std::sqrt(r2) < 1e-8) fail(ErrorKind::SingularPoint, "angular vorticity is undefined at the origin");
    const double a = u[0].value(p), b = u[1].value(p), c = u[2].value(p);
    return {2.0 * (p.y * c - p.z * b) / r2, 2.0 * (p.z * a - p.x * c) / r2, 2.0 * (p.x * b - p.y * a) / r2};
}

double kappa(const ClosedFormField& uz, const ClosedFormField& Ux, const ClosedFormField& Uy, const Point4& p) {
    const double r2 = p.x * p.x + p.y * p.y + p.z * p.z;
    if (std::sqrt(r2) < 1e-8) fail(ErrorKind::SingularPoint, "kappa is undefined at the origin");
    const double w = uz.value(p);
    return 2.0 * (p.y * w - p.z * Uy.value(p) - p.x * w + p.z * Ux.value(p)) / r2;
}

ClosedFormField kappa_field(const ClosedFormField& uz, const ClosedFormField& Ux, const ClosedFormField& Uy) {
    return ClosedFormField::from_expression(
        "kappa", kDependsSpace | uz.dependencies() | Ux.dependencies() | Uy.dependencies(),
        [uz, Ux, Uy](const auto& x, const auto& y, const auto& z, const auto& t) {
            const auto w = uz(x, y, z, t);
            return 2.0 * (y * w - z * Uy(x, y, z, t) - x * w + z * Ux(x, y, z, t)) / (x * x + y * y + z * z);
        });
}

KappaRateReport kappa_rate_check(const ClosedFormField& ux, const ClosedFormField& uy, const ClosedFormField& uz,
                      const ClosedFormField& kap, const std::vector<Point4>& points, double tol) {
    require(!points.empty(), ErrorKind::InvalidArgument, "kappa_rate_check needs at least one point");
    KappaRateReport r;
    for (const auto& p : points) {
        const double l = uy.derivative(p, D(0, 0, 1, 1)) - ux.derivative(p, D(0, 0, 1, 1));
        const double rr = kap.derivative(p, D(0, 0, 0, 1)) - uz.derivative(p, D(0, 1, 0, 1)) +
                          uz.derivative(p, D(1, 0, 0, 1));
        r.lhs.push_back(l);
        r.rhs.push_back(rr);
        r.gaps.push_back(l - rr);
        r.max_gap = std::max(r.max_gap, std::abs(l - rr));
        r.scale = std::max({r.scale, std::abs(l), std::abs(rr)});
    }
    r.satisfied = r.max_gap <= tol;
    return r;
}

namespace {

void floor_check(double v, const char* factor) {
    if (!(std::abs(v) >= 1e-8))
        fail(ErrorKind::SingularPoint, std::string("denominator factor ") + factor + " is below 1e-8 (value " +
                                           format_double(v) + ")");
}

}  // namespace

double nested_bracket(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target,
                       const Point4& p) {
    const auto w = uz.derivatives(p, 3);
    const auto q = partner.derivatives(p, 2);
    // the partner direction: y for the u_x formula, x for the u_y formula
    const MultiIndex dir = target == Reconstruct::ux ? D(0, 1, 0, 0) : D(1, 0, 0, 0);
    const MultiIndex dir_z = target == Reconstruct::ux ? D(0, 1, 1, 0) : D(1, 0, 1, 0);
    const double u = w({}), ut = w(D(0, 0, 0, 1)), uzz = w(D(0, 0, 2, 0)), utz = w(D(0, 0, 1, 1)),
                 utzz = w(D(0, 0, 2, 1)), uz1 = w(D(0, 0, 1, 0)), ud = w(dir), udz = w(dir_z);
    const double vt = q(D(0, 0, 0, 1)), vtz = q(D(0, 0, 1, 1));
    return ut * u * u * utzz - u * u * utz * utz + 3.0 * u * uzz * ut * ut + 2.0 * u * ut * vtz * ud +
           2.0 * ut * u * udz * vt + 2.0 * u * ut * utz * uz1 - 2.0 * u * vt * ud * utz + 3.0 * uz1 * uz1 * ut * ut +
           2.0 * ut * vt * ud * uz1;
}

double nested_integrand(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target,
                         const Point4& p) {
    const double ut = uz.derivative(p, D(0, 0, 0, 1));
    floor_check(ut, "du_z/dt");
    return nested_bracket(uz, partner, target, p) / (ut * ut);
}

ReconstructResult reconstruct_velocity(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target,
                                       double x, double y, double z0, double z1, double t0, double t1, double tol,
                                       const ClosedFormField& F2) {
    require(tol > 0.0, ErrorKind::InvalidArgument, "reconstruct tolerance must be positive");
    const MultiIndex dir = target == Reconstruct::ux ? D(1, 0, 0, 0) : D(0, 1, 0, 0);
    double inner_error = 0.0;
    auto outer = [&](double t) {
        const Point4 p{x, y, z1, t};
        const auto w = uz.derivatives(p, 1);
        floor_check(w({}), "u_z");
        floor_check(w(dir), target == Reconstruct::ux ? "du_z/dx" : "du_z/dy");
        floor_check(w(D(0, 0, 0, 1)), "du_z/dt");
        const auto inner = adaptive_integrate(
            [&](double z) { return nested_integrand(uz, partner, target, {x, y, z, t}); }, z0, z1, tol);
        const double factor = -w(D(0, 0, 0, 1)) / (2.0 * w(dir) * w({}));
        inner_error = std::max(inner_error, std::abs(factor) * inner.error);
        return factor * inner.value;
    };
    const auto res = adaptive_integrate(outer, t0, t1, tol);
    ReconstructResult r;
    r.value = F2.value({x, y, z1, t1}) + res.value;
    r.error = res.error + inner_error * std::abs(t1 - t0);
    return r;
}

}  // namespace pns
