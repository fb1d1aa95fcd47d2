#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pns/bundle.hpp"
#include "pns/closed_form.hpp"
#include "pns/config.hpp"
#include "pns/report_io.hpp"

namespace pns {

/// Deterministic stream of doubles in [0, 1) (splitmix64), identical on every platform.
class UnitStream {
public:
    explicit UnitStream(std::uint64_t seed) : state_(seed) {}
    double next();
    double uniform(double a, double b) { return a + (b - a) * next(); }

private:
    std::uint64_t state_;
};

/// Smooth random velocity: a few low Fourier modes per component with random
/// amplitudes and phases. Not projected.
VectorField random_velocity(const SpectralGrid& grid, std::uint64_t seed, double amplitude);

/// Bumps supported strictly inside [0, 2 pi L]^3; the first is centered.
std::vector<std::pair<Point3, double>> bump_family(int count, std::uint64_t seed, double box_length);

/// Lattice velocity family with F_x = F_y = sin(y/n) sin(z/n) and
/// u_z = sin(x/n) sin(y/n) sin(z/n) exp(-t); on the box of side n*pi (L = n/2) every
/// component vanishes on the walls at t = 1.
FieldBundle wall_lattice_bundle(double n, double eta);

/// Stationary U_x, U_y lattice products with the same F and u_z = F4(t) F5 with
/// F5 = sin(x/n) sin(y/n) sin(z/n).
FieldBundle stationary_separable_bundle(double n, const F4Params& f4);

/// amp sin x sin y sin z cos(sqrt(3c) t): solves u_tt = c lap u. With amp = 1 and
/// amp = -1/3 the two copies satisfy both auxiliary equations.
ClosedFormField standing_wave(double c, double amp);

struct ExperimentOutcome {
    std::vector<std::string> files;  // relative to the output directory
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;
    bool passed() const;
};

ExperimentOutcome verify_residuals(const RunConfig& config, const std::filesystem::path& dir);
/// StepRejected from the CFL guard propagates.
ExperimentOutcome run_dns(const RunConfig& config, const std::filesystem::path& dir);
ExperimentOutcome blowup_report(const RunConfig& config, const std::filesystem::path& dir);
ExperimentOutcome inequality_report(const RunConfig& config, const std::filesystem::path& dir);
ExperimentOutcome wave_check(const RunConfig& config, const std::filesystem::path& dir);
ExperimentOutcome dump_fields(const RunConfig& config, const std::filesystem::path& dir);

}  // namespace pns
