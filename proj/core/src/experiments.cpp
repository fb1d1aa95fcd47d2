#include "pns/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "pns/blowup.hpp"
#include "pns/error.hpp"
#include "pns/format.hpp"
#include "pns/inequality.hpp"
#include "pns/pnsf1.hpp"
#include "pns/residuals.hpp"
#include "pns/solver.hpp"
#include "pns/spectral.hpp"
#include "pns/wave.hpp"

namespace pns {

namespace {

constexpr double kPi = std::numbers::pi;

CheckResult check(std::string name, bool ok, std::string detail) { return {std::move(name), ok, std::move(detail)}; }

void emit(ExperimentOutcome& out, const std::filesystem::path& dir, const std::string& rel, const CsvTable& table) {
    std::filesystem::create_directories((dir / rel).parent_path());
    table.write(dir / rel);
    out.files.push_back(rel);
}

ClosedFormField wall_factor(double n) {
    return ClosedFormField::from_expression("sin(y/n) sin(z/n)", kDependsY | kDependsZ,
                                            [n](const auto&, const auto& y, const auto& z, const auto&) {
                                                return sin(y / n) * sin(z / n);
                                            });
}

ClosedFormField random_closed_form(UnitStream& rng) {
    const double a = rng.uniform(-1.5, 1.5), b = rng.uniform(-1.5, 1.5), c = rng.uniform(-1.5, 1.5),
                 d = rng.uniform(-1.5, 1.5), e = rng.uniform(-1.5, 1.5);
    return ClosedFormField::from_expression("random", kDependsAll,
                                            [=](const auto& x, const auto& y, const auto& z, const auto& t) {
                                                return a * sin(b * x + y) * cos(c * z - t) +
                                                       d * exp(0.3 * e * t) * cos(x + e * y) + x * y * t * t;
                                            });
}

// -------------------------------------------------------------------------

void residuals_taylor_green(const RunConfig& config, const std::filesystem::path& dir, ExperimentOutcome& out) {
    const SpectralGrid grid = config.grid();
    require(grid.box_length() == 1.0, ErrorKind::Validation,
            "grid.box_length: the Taylor-Green solution is 2 pi periodic, use 1");
    const FlowParams flow = config.flow();
    const double t = config.real("residual.t"), tol = config.real("residual.tolerance");
    const TaylorGreen tg = taylor_green(flow.nu(), flow.rho);
    const auto r = momentum_residual(tg.sample_velocity(grid, t), tg.sample_pressure(grid, t), flow,
                                     tg.sample_velocity_rate(grid, t), t);

    CsvTable table({"name", "N", "L", "t", "l2", "linf", "params_hash"});
    std::vector<ResidualReport> rows(r.momentum.begin(), r.momentum.end());
    rows.push_back(r.continuity);
    double worst = 0.0;
    for (const auto& row : rows) {
        table.add({row.name, cell(row.n_modes), cell(row.box_length), cell(row.t), cell(row.l2), cell(row.linf),
                   row.params_hash});
        worst = std::max({worst, row.l2, row.linf});
    }
    emit(out, dir, "residuals.csv", table);
    out.checks.push_back(check("taylor_green_residuals", worst <= tol,
                               "max norm " + format_double(worst) + " <= " + format_double(tol)));
}

void residuals_lattice(const RunConfig& config, const std::filesystem::path& dir, ExperimentOutcome& out) {
    const double n = config.real("lattice.n");
    const FlowParams flow = config.flow();
    const F4Params f4 = config.f4();
    const double t = config.real("residual.t");
    require(t >= 0.0 && t < f4.C1, ErrorKind::Validation, "residual.t: must lie in [0, f4.C1) for the lattice family");
    const int nodes = static_cast<int>(config.integer("residual.rule_nodes"));
    require(nodes >= 24, ErrorKind::Validation, "residual.rule_nodes: need at least 24");

    const FieldBundle b = stationary_separable_bundle(n, f4);
    const auto fine = gamma_terms(b, flow, t, BoxQuadrature::gauss_legendre(nodes, n / 2));
    const auto coarse = gamma_terms(b, flow, t, BoxQuadrature::gauss_legendre(nodes - 16, n / 2));
    double g1max = 0.0;
    for (double v : fine.gamma1) g1max = std::max(g1max, std::abs(v));
    const double drift = std::abs(fine.gamma2_integral - coarse.gamma2_integral);

    CsvTable gamma({"quantity", "nodes", "value"});
    for (const auto* g : {&coarse, &fine}) {
        const std::size_t m = g == &fine ? nodes : nodes - 16;
        gamma.add({"gamma1_integral", cell(m), cell(g->gamma1_integral)});
        gamma.add({"gamma1_l1", cell(m), cell(g->gamma1_l1)});
        gamma.add({"gamma2_integral", cell(m), cell(g->gamma2_integral)});
        gamma.add({"gamma2_l1", cell(m), cell(g->gamma2_l1)});
    }
    gamma.add({"gamma1_max_abs", cell(static_cast<std::size_t>(nodes)), cell(g1max)});
    emit(out, dir, "gamma.csv", gamma);
    out.checks.push_back(check("gamma1_pointwise_zero", g1max <= 1e-13, "max |gamma1| " + format_double(g1max)));
    out.checks.push_back(check("gamma2_refinement", drift <= 1e-6 * fine.gamma2_l1,
                               "|I(" + std::to_string(nodes) + ") - I(" + std::to_string(nodes - 16) +
                                   ")| = " + format_double(drift) + ", scale " + format_double(fine.gamma2_l1)));

    const auto o = omega5_identities(wall_lattice_bundle(n, flow.eta), flow, 1.0,
                                     BoxQuadrature::gauss_legendre(nodes, n / 2));
    CsvTable omega({"quantity", "value"});
    omega.add({"lhs_time", cell(o.lhs_time)});
    omega.add({"lhs_time_singular", cell(o.lhs_time_singular)});
    omega.add({"lhs_substituted", cell(o.lhs_substituted)});
    omega.add({"rhs", cell(o.rhs)});
    omega.add({"rhs_by_parts", cell(o.rhs_by_parts)});
    omega.add({"boundary_printed", cell(o.boundary_printed)});
    omega.add({"difference", cell(o.difference)});
    omega.add({"extension_viscous", cell(o.extension_viscous)});
    omega.add({"extension_time", cell(o.extension_time)});
    omega.add({"boundary_max", cell(o.boundary_max)});
    omega.add({"interior_max", cell(o.interior_max)});
    emit(out, dir, "omega5.csv", omega);
    const double scale = std::max(std::abs(o.rhs), 1e-300);
    out.checks.push_back(check("omega5_identity", std::abs(o.difference) <= 1e-6 * scale,
                               "lhs - rhs = " + format_double(o.difference) + ", rhs " + format_double(o.rhs)));
    for (const auto& note : o.notes) out.notes.push_back("omega5: " + note);
}

// -------------------------------------------------------------------------

std::vector<Point4> wave_points(UnitStream& rng, int count, double extent) {
    std::vector<Point4> pts;
    for (int i = 0; i < count; ++i)
        pts.push_back({rng.uniform(0, extent), rng.uniform(0, extent), rng.uniform(0, extent), rng.uniform(0, 2)});
    return pts;
}

Axis axis_of(const std::string& s) { return s == "x" ? Axis::x : s == "y" ? Axis::y : Axis::z; }

ScalarField physical_of(const ScalarField& f) { return f.is_physical() ? f : to_physical(f); }

}  // namespace

double UnitStream::next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

VectorField random_velocity(const SpectralGrid& grid, std::uint64_t seed, double amplitude) {
    UnitStream rng(seed);
    struct Mode {
        int kx, ky, kz;
        double a, phase;
    };
    const double L = grid.box_length();
    std::array<ScalarField, 3> comps{ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid)};
    for (int c = 0; c < 3; ++c) {
        std::vector<Mode> modes;
        for (int kx = -2; kx <= 2; ++kx)
            for (int ky = -2; ky <= 2; ++ky)
                for (int kz = 0; kz <= 2; ++kz) {
                    const int k2 = kx * kx + ky * ky + kz * kz;
                    if (k2 == 0 || k2 > 4) continue;
                    modes.push_back({kx, ky, kz, amplitude * rng.uniform(-1, 1) / k2, rng.uniform(0, 2 * kPi)});
                }
        comps[c] = ScalarField::sample(grid, [&](double x, double y, double z) {
            double s = 0.0;
            for (const auto& m : modes) s += m.a * std::cos((m.kx * x + m.ky * y + m.kz * z) / L + m.phase);
            return s;
        });
    }
    return {comps[0], comps[1], comps[2]};
}

std::vector<std::pair<Point3, double>> bump_family(int count, std::uint64_t seed, double box_length) {
    require(count >= 1, ErrorKind::InvalidArgument, "bump count must be positive");
    const double h = kPi * box_length;  // half side
    std::vector<std::pair<Point3, double>> out{{{h, h, h}, 0.5 * h}};
    UnitStream rng(seed);
    for (int i = 1; i < count; ++i) {
        const double r = rng.uniform(0.4 * h, 0.6 * h);
        const Point3 c{h + rng.uniform(-0.35, 0.35) * h, h + rng.uniform(-0.35, 0.35) * h,
                       h + rng.uniform(-0.35, 0.35) * h};
        out.push_back({c, r});
    }
    return out;
}

FieldBundle wall_lattice_bundle(double n, double eta) {
    LatticeParams lp{n, eta};
    lp.F_x = lp.F_y = wall_factor(n);
    FieldBundle b;
    b.ux = lattice_field(lp, LatticeComponent::x);
    b.uy = lattice_field(lp, LatticeComponent::y);
    b.uz = ClosedFormField::from_expression("sin-product exp(-t)", kDependsAll,
                                            [n](const auto& x, const auto& y, const auto& z, const auto& t) {
                                                return sin(x / n) * sin(y / n) * sin(z / n) * exp(-t);
                                            });
    return b;
}

FieldBundle stationary_separable_bundle(double n, const F4Params& f4) {
    LatticeParams lp{n, 1.0};
    lp.F_x = lp.F_y = wall_factor(n);
    FieldBundle b;
    b.ux = lattice_product(lp, LatticeComponent::x);
    b.uy = lattice_product(lp, LatticeComponent::y);
    b.uz = separable_uz(f4_field(f4), sin_product(n));
    return b;
}

ClosedFormField standing_wave(double c, double amp) {
    const double w = std::sqrt(3 * c);
    return ClosedFormField::from_expression("standing wave", kDependsAll,
                                            [=](const auto& x, const auto& y, const auto& z, const auto& t) {
                                                return amp * sin(x) * sin(y) * sin(z) * cos(w * t);
                                            });
}

bool ExperimentOutcome::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ExperimentOutcome verify_residuals(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const std::string family = config.text("family.velocity");
    if (family == "taylor_green")
        residuals_taylor_green(config, dir, out);
    else if (family == "lattice")
        residuals_lattice(config, dir, out);
    else
        fail(ErrorKind::Validation, "family.velocity: '" + family + "' has no exact residual, use run-dns");
    return out;
}

ExperimentOutcome run_dns(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const SpectralGrid grid = config.grid();
    const FlowParams flow = config.flow();
    const std::string family = config.text("family.velocity");
    const double dt = config.real("solver.dt"), t_end = config.real("solver.t_end");
    const SolverOptions options = config.solver_options();
    const long snap = config.integer("solver.snapshot_every");
    require(snap >= 0, ErrorKind::Validation, "solver.snapshot_every: must be >= 0");
    require(snap == 0 || snap % options.sample_every == 0, ErrorKind::Validation,
            "solver.snapshot_every: must be a multiple of solver.sample_every");

    VectorField u0 = VectorField::zeros(grid);
    std::optional<TaylorGreen> tg;
    if (family == "taylor_green") {
        tg = taylor_green(flow.nu(), flow.rho);
        const double L = grid.box_length();
        const auto& v = tg->velocity;
        // rescaled to the box: u(x / L)
        std::array<ScalarField, 3> c{ScalarField::zeros(grid), ScalarField::zeros(grid), ScalarField::zeros(grid)};
        for (int i = 0; i < 3; ++i)
            c[i] = ScalarField::sample(grid, [&](double x, double y, double z) {
                return v[i].value({x / L, y / L, z / L, 0.0});
            });
        u0 = VectorField(c[0], c[1], c[2]);
    } else if (family == "random") {
        u0 = random_velocity(grid, config.seed(), config.real("family.amplitude"));
    } else {
        fail(ErrorKind::Validation, "family.velocity: run-dns supports taylor_green and random, got '" + family + "'");
    }

    Observer observer;
    if (snap > 0) {
        observer = [&](const SolverState& s, const DiagnosticSample&) {
            if (s.step_count % snap != 0) return;
            const char* names[3] = {"ux", "uy", "uz"};
            for (int c = 0; c < 3; ++c) {
                char rel[64];
                std::snprintf(rel, sizeof rel, "snapshots/%s_%08ld.pnsf1", names[c], s.step_count);
                std::filesystem::create_directories(dir / "snapshots");
                write_pnsf1(dir / rel, physical_of(s.u[c]), s.t, names[c]);
                out.files.push_back(rel);
            }
        };
    }
    const RunResult r = run(init(u0, flow, dt), t_end, options, observer);

    CsvTable table({"t", "energy", "enstrophy", "max_vorticity", "bkm_integral", "min_pressure"});
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        const auto s = r.series.at(i);
        table.add({cell(s.t), cell(s.energy), cell(s.enstrophy), cell(s.max_vorticity), cell(s.bkm_integral),
                   cell(s.min_pressure)});
    }
    emit(out, dir, "diagnostics.csv", table);
    out.checks.push_back(check("no_halt", !r.halted, r.halted ? r.halt_reason : "reached t_end"));
    if (r.halted) out.notes.push_back("halted: " + r.halt_reason);
    if (tg) {
        const double L = grid.box_length();
        const double expected = std::exp(-4.0 * flow.nu() * r.state.t / (L * L));
        const double ratio = r.series.energy.back() / r.series.energy.front();
        const double rel = std::abs(ratio - expected) / expected;
        const double tol = config.real("solver.energy_tolerance");
        out.checks.push_back(check("taylor_green_energy_decay", rel <= tol,
                                   "E(t)/E(0) = " + format_double(ratio) + ", expected " + format_double(expected) +
                                       ", rel " + format_double(rel)));
    }
    return out;
}

ExperimentOutcome blowup_report(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const F4Params f4 = config.f4();
    const auto orders = config.integer_list("blowup.orders");
    for (int m : orders) require(m >= 0 && m <= 4, ErrorKind::Validation, "blowup.orders: entries must lie in 0..4");
    const auto grid = blowup_curve_grid(f4, static_cast<int>(config.integer("blowup.points_before")),
                                   static_cast<int>(config.integer("blowup.points_after")),
                                   config.real("blowup.t_max_factor") * f4.C1);
    const auto fig = blowup_curves(f4, orders, grid);
    std::vector<std::string> header{"t"};
    for (int m : fig.orders) header.push_back("abs_d" + std::to_string(m));
    CsvTable curves(header);
    for (std::size_t k = 0; k < fig.t.size(); ++k) {
        std::vector<std::string> row{cell(fig.t[k])};
        for (std::size_t i = 0; i < fig.orders.size(); ++i) row.push_back(cell(fig.values[i][k]));
        curves.add(std::move(row));
    }
    emit(out, dir, "blowup_curves.csv", curves);

    const int j_min = static_cast<int>(config.integer("blowup.j_min")),
              j_max = static_cast<int>(config.integer("blowup.j_max"));
    const double tol = config.real("blowup.tolerance");
    CsvTable fits({"m", "fitted_slope", "expected_slope", "rel_error", "j_min", "j_max"});
    for (int m = 1; m <= 3; ++m) {
        const auto f = fit_blowup_exponent(f4, m, j_min, j_max);
        fits.add({cell(m), cell(f.fitted_slope), cell(f.expected_slope), cell(f.rel_error), cell(j_min), cell(j_max)});
        out.checks.push_back(check("slope_m" + std::to_string(m), f.rel_error <= tol,
                                   "fitted " + format_double(f.fitted_slope) + ", expected " +
                                       format_double(f.expected_slope)));
        if (m == 2)
            out.checks.push_back(check("slope_m2_eleven_sixths",
                                       std::abs(-f.fitted_slope - 11.0 / 6.0) <= tol * 11.0 / 6.0,
                                       "|slope| " + format_double(-f.fitted_slope) + " vs 11/6"));
    }
    emit(out, dir, "exponent_fit.csv", fits);

    const auto ode = ode_crosscheck(f4, config.real("blowup.ode_stop_frac"));
    CsvTable odet({"t_stop", "points", "max_rel_deviation", "tolerance", "passed"});
    odet.add({cell(ode.t_stop), cell(ode.points), cell(ode.max_rel_deviation), cell(ode.tolerance), cell(ode.passed)});
    emit(out, dir, "ode_crosscheck.csv", odet);
    out.checks.push_back(check("ode_crosscheck", ode.passed, "max rel deviation " + format_double(ode.max_rel_deviation)));
    if (!ode.notes.empty()) out.notes.push_back(ode.notes);
    return out;
}

ExperimentOutcome inequality_report(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const double p = config.real("inequality.p");
    const int n = static_cast<int>(config.integer("inequality.n"));
    const double L = config.real("grid.box_length");
    HardyOptions coarse{static_cast<int>(config.integer("inequality.nodes")), L};
    HardyOptions fine{static_cast<int>(config.integer("inequality.refine_nodes")), L};
    const double refine_tol = config.real("inequality.refine_tolerance");
    const auto bumps = bump_family(static_cast<int>(config.integer("inequality.bumps")), config.seed(), L);

    struct Result {
        InequalityReport hardy, refined;
        SandwichReport sandwich;
        std::exception_ptr error;
    };
    std::vector<Result> results(bumps.size() + 1);
    const auto work = [&](std::size_t i) {
        try {
            const ClosedFormField f = i < bumps.size()
                                          ? bump_field(bumps[i].first, bumps[i].second).renamed("bump" + std::to_string(i))
                                          : ClosedFormField().renamed("zero");
            results[i].hardy = hardy_check(f, p, n, coarse);
            results[i].refined = hardy_check(f, p, n, fine);
            results[i].sandwich = sandwich_report(f, p, coarse);
        } catch (...) {
            results[i].error = std::current_exception();
        }
    };
    const long jobs = std::max<long>(1, std::min<long>(config.integer("run.jobs"), static_cast<long>(results.size())));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (long j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < results.size();) work(i);
        });
    for (auto& th : pool) th.join();
    for (const auto& r : results)
        if (r.error) std::rethrow_exception(r.error);

    CsvTable hardy({"name", "p", "n", "lhs", "rhs", "constant", "satisfied", "margin", "lhs_refined", "rhs_refined",
                    "refine_rel"});
    CsvTable sandwich({"name", "p", "gradient_term", "hardy_term", "constant", "clause_nonnegative", "clause_middle",
                       "clause_negative", "chain_holds"});
    bool all_ok = true;
    double worst_refine = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& h = results[i].hardy;
        const auto& r = results[i].refined;
        const auto& s = results[i].sandwich;
        const double scale = std::max(std::abs(r.lhs), std::abs(r.rhs));
        const double rel =
            scale > 0 ? std::max(std::abs(h.lhs - r.lhs), std::abs(h.rhs - r.rhs)) / scale : 0.0;
        hardy.add({h.name, cell(h.p), cell(h.n), cell(h.lhs), cell(h.rhs), cell(h.constant), cell(h.satisfied),
                   cell(h.margin), cell(r.lhs), cell(r.rhs), cell(rel)});
        sandwich.add({s.name, cell(s.p), cell(s.gradient_term), cell(s.hardy_term), cell(s.constant),
                      cell(s.clause_nonnegative), cell(s.clause_middle), cell(s.clause_negative), cell(s.chain_holds)});
        if (i < bumps.size()) {
            all_ok = all_ok && h.satisfied && r.satisfied;
            worst_refine = std::max(worst_refine, rel);
        }
    }
    emit(out, dir, "hardy.csv", hardy);
    emit(out, dir, "sandwich.csv", sandwich);
    out.checks.push_back(check("hardy_satisfied", all_ok, std::to_string(bumps.size()) + " bumps"));
    out.checks.push_back(check("hardy_refinement", worst_refine <= refine_tol,
                               "max relative change " + format_double(worst_refine)));
    const auto& z = results.back().hardy;
    out.checks.push_back(check("zero_field", z.lhs == 0.0 && z.rhs == 0.0 && z.satisfied, "lhs = rhs = 0"));
    for (const auto& r : results)
        if (!r.sandwich.chain_holds && !r.sandwich.notes.empty()) out.notes.push_back(r.sandwich.name + ": " + r.sandwich.notes);
    return out;
}

ExperimentOutcome wave_check(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const WaveParams w = config.wave();
    const Axis axis = axis_of(config.text("wave.direction"));
    const int count = static_cast<int>(config.integer("wave.samples"));
    require(count >= 1, ErrorKind::Validation, "wave.samples: must be positive");
    const double tol = config.real("wave.tolerance");
    UnitStream rng(config.seed());
    const auto pts = wave_points(rng, count, 2 * kPi * config.real("grid.box_length"));

    const auto u = standing_wave(w.c, 1.0);
    const auto uz = standing_wave(w.c, -1.0 / 3.0);
    const auto pair = reduction_check(uz, u, axis, w, pts, tol);
    const auto ra = random_closed_form(rng), rb = random_closed_form(rng);
    const auto random = reduction_check(ra, rb, axis, w, pts, tol);

    CsvTable table({"case", "direction", "c", "form", "samples", "max_l3", "max_l3w", "max_wave", "identity_gap",
                    "applicable", "violations", "implication_holds"});
    const std::string form = w.form == L3Form::c2_laplacian ? "c2_laplacian" : "c_time";
    for (const auto& [name, r] : {std::pair{"constructed", &pair}, std::pair{"random", &random}})
        table.add({name, config.text("wave.direction"), cell(r->c), form, cell(r->samples), cell(r->max_l3),
                   cell(r->max_l3w), cell(r->max_wave), cell(r->identity_gap), cell(r->applicable),
                   cell(r->violations), cell(r->implication_holds)});
    emit(out, dir, "wave.csv", table);

    const double gap = std::max(pair.identity_gap, random.identity_gap);
    if (w.form == L3Form::c2_laplacian)
        out.checks.push_back(check("identity", gap <= 1e-12, "gap " + format_double(gap)));
    else
        out.notes.push_back("c_time form: L3 + L3_W differs from c * wave, relative gap " + format_double(gap));
    out.checks.push_back(check("manufactured_wave", pair.max_wave <= 1e-10, "max |wave| " + format_double(pair.max_wave)));
    if (pair.applicable > 0)
        out.checks.push_back(check("pair_implication", pair.implication_holds,
                                   std::to_string(pair.applicable) + " applicable points"));
    else
        out.notes.push_back("constructed pair does not satisfy the " + form + " auxiliary equations at c = " +
                            format_double(w.c));
    if (!pair.notes.empty()) out.notes.push_back(pair.notes);
    return out;
}

ExperimentOutcome dump_fields(const RunConfig& config, const std::filesystem::path& dir) {
    ExperimentOutcome out;
    const SpectralGrid grid = config.grid();
    const double t = config.real("dump.t");
    const std::string family = config.text("dump.family");
    std::vector<std::pair<std::string, ScalarField>> fields;
    if (family == "taylor_green") {
        const FlowParams flow = config.flow();
        const auto tg = taylor_green(flow.nu(), flow.rho);
        require(grid.box_length() == 1.0, ErrorKind::Validation, "grid.box_length: Taylor-Green dumps need 1");
        const auto v = tg.sample_velocity(grid, t);
        fields = {{"ux", v[0]}, {"uy", v[1]}, {"uz", v[2]}, {"p", tg.sample_pressure(grid, t)}};
    } else if (family == "lattice") {
        require(t <= 1.0, ErrorKind::Validation, "dump.t: the lattice family is defined for t <= 1");
        const auto b = wall_lattice_bundle(config.real("lattice.n"), config.real("flow.eta"));
        fields = {{"ux", sample(*b.ux.closed_form(), grid, t)},
                  {"uy", sample(*b.uy.closed_form(), grid, t)},
                  {"uz", sample(*b.uz.closed_form(), grid, t)}};
    } else if (family == "f4_separable") {
        const auto uz = separable_uz(f4_field(config.f4()), sin_product(config.real("lattice.n")));
        fields = {{"uz", sample(uz, grid, t)}};
    } else {
        const double h = kPi * grid.box_length();
        fields = {{"bump", sample(bump_field({h, h, h}, 0.5 * h), grid, t)}};
    }
    std::filesystem::create_directories(dir);
    for (const auto& [name, f] : fields) {
        const std::string rel = name + ".pnsf1";
        write_pnsf1(dir / rel, physical_of(f), t, name);
        out.files.push_back(rel);
    }
    out.checks.push_back(check("fields_written", !fields.empty(), std::to_string(fields.size()) + " fields"));
    return out;
}

}  // namespace pns
