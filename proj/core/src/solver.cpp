#include "pns/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "pns/error.hpp"
#include "pns/format.hpp"
#include "pns/spectral.hpp"

namespace pns {
namespace {

// ARS(3,4,3). gamma is the middle root of 6g^3 - 18g^2 + 9g - 1; the remaining
// entries follow from the third-order conditions so they hold in double precision.
struct Tableau {
    double g, b1, b2, c3;
    std::array<std::array<double, 4>, 4> ex{}, im{};
    std::array<double, 4> b{};
};

Tableau make_tableau() {
    Tableau s;
    const double g = 0.435866521508458999;
    s.g = g;
    s.b1 = -1.5 * g * g + 4.0 * g - 0.25;
    s.b2 = 1.5 * g * g - 5.0 * g + 1.25;
    s.c3 = 0.5 * (1.0 + g);
    const double a32 = 0.3966543747;
    const double a4 = (1.0 / 6.0 - s.b2 * a32 * g) / (g * (g + s.c3));
    s.ex[1] = {g, 0, 0, 0};
    s.ex[2] = {s.c3 - a32, a32, 0, 0};
    s.ex[3] = {1.0 - 2.0 * a4, a4, a4, 0};
    s.im[1] = {0, g, 0, 0};
    s.im[2] = {0, 0.5 * (1.0 - g), g, 0};
    s.im[3] = {0, s.b1, s.b2, g};
    s.b = {0, s.b1, s.b2, g};
    return s;
}

const Tableau& tableau() {
    static const Tableau t = make_tableau();
    return t;
}

using Modes = std::array<std::vector<Complex>, 3>;

Modes modes_of(const VectorField& v) {
    Modes m;
    for (int c = 0; c < 3; ++c) {
        auto s = v[c].coefficients();
        m[c].assign(s.begin(), s.end());
    }
    return m;
}

VectorField field_of(const SpectralGrid& g, Modes m) {
    return {ScalarField::spectral(g, std::move(m[0])), ScalarField::spectral(g, std::move(m[1])),
            ScalarField::spectral(g, std::move(m[2]))};
}

std::vector<double> k_squared(const SpectralGrid& g) {
    const int n = g.n_modes();
    const auto& k = g.wavenumbers();
    std::vector<double> out(g.size());
    for (int c = 0; c < n; ++c)
        for (int b = 0; b < n; ++b)
            for (int a = 0; a < n; ++a) out[g.index(a, b, c)] = k[a] * k[a] + k[b] * k[b] + k[c] * k[c];
    return out;
}

VectorField cross(const VectorField& a, const VectorField& b) {
    return {hadamard(a[1], b[2]) - hadamard(a[2], b[1]), hadamard(a[2], b[0]) - hadamard(a[0], b[2]),
            hadamard(a[0], b[1]) - hadamard(a[1], b[0])};
}

VectorField dealias(const VectorField& v) { return {dealias(v[0]), dealias(v[1]), dealias(v[2])}; }

// u x omega + f, dealiased, before projection.
VectorField rotational_term(const VectorField& us, const FlowParams& params) {
    const VectorField u = to_physical(us);
    VectorField r = cross(u, to_physical(curl(us)));
    if (params.force) r = r + as_physical(*params.force);
    return dealias(to_spectral(r));
}

struct Tables {
    std::vector<int> mirror;   // axis index of -m
    std::vector<char> keep;    // two-thirds mask per axis
    std::vector<double> k2;
};

Tables make_tables(const SpectralGrid& g) {
    const int n = g.n_modes();
    Tables t;
    t.mirror.resize(n);
    t.keep.resize(n);
    for (int q = 0; q < n; ++q) {
        t.mirror[q] = (n - q) % n;
        t.keep[q] = g.dealias_axis()[q];
    }
    t.k2 = k_squared(g);
    return t;
}

struct Explicit {
    Modes term;
    double speed = 0.0;  // max |u|+|v|+|w|
};

// Projected, dealiased u x omega + f. Two real fields share each complex transform.
Explicit explicit_term(const SpectralGrid& g, const Tables& tb, const Modes& u, const FlowParams& params) {
    const int n = g.n_modes();
    const std::size_t size = g.size();
    const auto& k = g.odd_wavenumbers();
    const Complex I{0.0, 1.0};

    Modes packed;
    for (auto& c : packed) c.resize(size);
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const std::size_t idx = g.index(i, j, l);
                const Complex ux = u[0][idx], uy = u[1][idx], uz = u[2][idx];
                const Complex wx = I * (k[j] * uz - k[l] * uy);
                const Complex wy = I * (k[l] * ux - k[i] * uz);
                const Complex wz = I * (k[i] * uy - k[j] * ux);
                packed[0][idx] = ux + I * wx;
                packed[1][idx] = uy + I * wy;
                packed[2][idx] = uz + I * wz;
            }
    for (auto& c : packed) fft_backward(g, c);

    std::vector<double> fx, fy, fz;
    if (params.force) {
        const VectorField f = as_physical(*params.force);
        auto copy = [](std::span<const double> v) { return std::vector<double>(v.begin(), v.end()); };
        fx = copy(f[0].values());
        fy = copy(f[1].values());
        fz = copy(f[2].values());
    }
    Explicit out;
    std::vector<Complex> rxy(size), rz(size);
    for (std::size_t i = 0; i < size; ++i) {
        const double ax = packed[0][i].real(), ay = packed[1][i].real(), az = packed[2][i].real();
        const double bx = packed[0][i].imag(), by = packed[1][i].imag(), bz = packed[2][i].imag();
        out.speed = std::max(out.speed, std::abs(ax) + std::abs(ay) + std::abs(az));
        double rx = ay * bz - az * by, ry = az * bx - ax * bz, r3 = ax * by - ay * bx;
        if (params.force) {
            rx += fx[i];
            ry += fy[i];
            r3 += fz[i];
        }
        rxy[i] = {rx, ry};
        rz[i] = {r3, 0.0};
    }
    fft_forward(g, rxy);
    fft_forward(g, rz);

    const double scale = 1.0 / static_cast<double>(size);
    for (auto& c : out.term) c.assign(size, Complex{});
    for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                if (!(tb.keep[i] && tb.keep[j] && tb.keep[l])) continue;
                const std::size_t idx = g.index(i, j, l);
                const Complex z = rxy[idx], zm = std::conj(rxy[g.index(tb.mirror[i], tb.mirror[j], tb.mirror[l])]);
                Complex cx = 0.5 * scale * (z + zm), cy = -0.5 * scale * I * (z - zm), cz = scale * rz[idx];
                const double kx = k[i], ky = k[j], kz = k[l];
                const double kk = kx * kx + ky * ky + kz * kz;
                if (kk != 0.0) {
                    const Complex dot = (kx * cx + ky * cy + kz * cz) / kk;
                    cx -= kx * dot;
                    cy -= ky * dot;
                    cz -= kz * dot;
                }
                out.term[0][idx] = cx;
                out.term[1][idx] = cy;
                out.term[2][idx] = cz;
            }
    return out;
}

double max_vorticity(const SolverState& s) { return norm(to_physical(curl(s.u)), INFINITY); }

bool all_finite(const Modes& m) {
    for (const auto& c : m)
        for (const auto& z : c)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

void DiagnosticSeries::append(const DiagnosticSample& s) {
    times.push_back(s.t);
    energy.push_back(s.energy);
    enstrophy.push_back(s.enstrophy);
    max_vorticity.push_back(s.max_vorticity);
    bkm_integral.push_back(s.bkm_integral);
    min_pressure.push_back(s.min_pressure);
}

DiagnosticSample DiagnosticSeries::at(std::size_t i) const {
    return {times.at(i), energy.at(i), enstrophy.at(i), max_vorticity.at(i), bkm_integral.at(i), min_pressure.at(i)};
}

SolverState init(const VectorField& u0, FlowParams params, double dt) {
    params.validate();
    require(std::isfinite(dt) && dt > 0.0, ErrorKind::InvalidArgument, "dt must be positive, got " + format_double(dt));
    if (params.force) require_same_grid(u0.grid(), params.force->grid(), "init force");
    const VectorField p = as_physical(u0);
    for (int c = 0; c < 3; ++c)
        for (double v : p[c].values())
            require(std::isfinite(v), ErrorKind::InvalidArgument, "initial velocity has non-finite values");
    return {leray_project(as_spectral(u0)), 0.0, 0, std::move(params), dt};
}

SolverState step(const SolverState& state, const SolverOptions& options) {
    const auto& ab = tableau();
    const SpectralGrid& g = state.u.grid();
    const double dt = state.dt, nu = state.params.nu();

    const Tables tb = make_tables(g);
    const Modes un = modes_of(state.u);
    const std::size_t size = g.size();
    std::array<Modes, 4> ex, im;  // explicit terms and nu*lap(Y) per stage
    Explicit first = explicit_term(g, tb, un, state.params);

    const double cfl = dt * first.speed / g.spacing();
    if (cfl > options.cfl_limit) {
        const double suggested = 0.9 * options.cfl_limit * g.spacing() / first.speed;
        fail(ErrorKind::StepRejected, "CFL number " + format_double(cfl) + " exceeds " +
                                          format_double(options.cfl_limit) + " at t=" + format_double(state.t) +
                                          "; suggested dt " + format_double(suggested));
    }
    ex[0] = std::move(first.term);

    const auto& k2 = tb.k2;
    for (int s = 1; s < 4; ++s) {
        Modes y = un;
        const double denom_scale = dt * ab.im[s][s] * nu;
        for (int c = 0; c < 3; ++c) {
            auto& yc = y[c];
            for (int j = 0; j < s; ++j) {
                const double ae = dt * ab.ex[s][j], ai = dt * ab.im[s][j];
                if (ae != 0.0)
                    for (std::size_t i = 0; i < size; ++i) yc[i] += ae * ex[j][c][i];
                if (ai != 0.0)
                    for (std::size_t i = 0; i < size; ++i) yc[i] += ai * im[j][c][i];
            }
            for (std::size_t i = 0; i < size; ++i) yc[i] /= 1.0 + denom_scale * k2[i];
        }
        im[s] = y;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < size; ++i) im[s][c][i] *= -nu * k2[i];
        ex[s] = explicit_term(g, tb, y, state.params).term;
    }

    Modes next = un;
    for (int c = 0; c < 3; ++c)
        for (int j = 0; j < 4; ++j) {
            const double w = dt * ab.b[j];
            if (w == 0.0) continue;
            for (std::size_t i = 0; i < size; ++i) next[c][i] += w * (ex[j][c][i] + im[j][c][i]);
        }
    const double t_next = state.t + dt;
    if (!all_finite(next)) fail(ErrorKind::Divergence, "non-finite velocity at t=" + format_double(t_next));

    SolverState out = state;
    out.u = leray_project(field_of(g, std::move(next)));
    out.t = t_next;
    out.step_count = state.step_count + 1;
    return out;
}

ScalarField pressure(const SolverState& state) {
    const VectorField rot = rotational_term(state.u, state.params);
    const ScalarField pi = to_physical(solve_poisson(divergence(rot)));
    const VectorField u = to_physical(state.u);
    ScalarField ke = 0.5 * (hadamard(u[0], u[0]) + hadamard(u[1], u[1]) + hadamard(u[2], u[2]));
    ScalarField p = state.params.rho * (pi - ke);
    const double m = mean(p);
    for (double& v : p.values()) v -= m;
    return p;
}

DiagnosticSample diagnose(const SolverState& state) {
    const SpectralGrid& g = state.u.grid();
    const double volume = std::pow(g.extent(), 3);
    const VectorField w = curl(state.u);
    DiagnosticSample d;
    d.t = state.t;
    for (int c = 0; c < 3; ++c) {
        d.energy += 0.5 * volume * spectral_energy(state.u[c]);
        d.enstrophy += 0.5 * volume * spectral_energy(w[c]);
    }
    d.max_vorticity = norm(to_physical(w), INFINITY);
    const ScalarField p = pressure(state);
    const auto pv = p.values();
    d.min_pressure = *std::min_element(pv.begin(), pv.end());
    return d;
}

RunResult run(SolverState state, double t_end, const SolverOptions& options, const Observer& observer) {
    require(options.sample_every >= 1, ErrorKind::InvalidArgument, "sample_every must be at least 1");
    const double span = t_end - state.t;
    const long steps = std::lround(span / state.dt);
    require(steps >= 0 && std::abs(steps * state.dt - span) <= 1e-9 * std::max(1.0, std::abs(t_end)),
            ErrorKind::InvalidArgument,
            "t_end " + format_double(t_end) + " is not a whole number of steps of " + format_double(state.dt));

    RunResult r{state, {}, false, {}};
    const double t0 = state.t;
    const long n0 = state.step_count;
    auto record = [&](DiagnosticSample d) {
        r.series.append(d);
        if (observer) observer(static_cast<const SolverState&>(state), d);
    };

    DiagnosticSample prev = diagnose(state);
    record(prev);
    for (long k = 1; k <= steps; ++k) {
        state = step(state, options);
        state.t = t0 + static_cast<double>(k) * state.dt;
        const double wmax = max_vorticity(state);
        const double bkm = prev.bkm_integral + 0.5 * state.dt * (prev.max_vorticity + wmax);
        const bool ceiling = wmax > options.vorticity_ceiling;
        DiagnosticSample d{state.t, 0.0, 0.0, wmax, bkm, 0.0};
        if (ceiling || k == steps || (state.step_count - n0) % options.sample_every == 0) {
            d = diagnose(state);
            d.bkm_integral = bkm;
            record(d);
        }
        prev = d;
        if (ceiling) {
            r.halted = true;
            r.halt_reason = "vorticity maximum " + format_double(d.max_vorticity) + " exceeds ceiling " +
                            format_double(options.vorticity_ceiling) + " at t=" + format_double(d.t) +
                            "; BKM integral " + format_double(d.bkm_integral);
            break;
        }
    }
    r.state = std::move(state);
    return r;
}

}  // namespace pns
