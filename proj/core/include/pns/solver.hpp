#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pns/field.hpp"
#include "pns/flow.hpp"

namespace pns {

/// Velocity is kept spectral and divergence-free. The body force in params, if
/// any, is per unit mass and constant in time.
struct SolverState {
    VectorField u;
    double t = 0.0;
    long step_count = 0;
    FlowParams params;
    double dt = 0.0;
};

struct DiagnosticSample {
    double t = 0.0;
    double energy = 0.0;
    double enstrophy = 0.0;
    double max_vorticity = 0.0;
    double bkm_integral = 0.0;
    double min_pressure = 0.0;
};

struct DiagnosticSeries {
    std::vector<double> times;
    std::vector<double> energy;
    std::vector<double> enstrophy;
    std::vector<double> max_vorticity;
    std::vector<double> bkm_integral;
    std::vector<double> min_pressure;

    void append(const DiagnosticSample& s);
    std::size_t size() const noexcept { return times.size(); }
    DiagnosticSample at(std::size_t i) const;
};

struct SolverOptions {
    /// Largest accepted dt * max(|u|+|v|+|w|) / h.
    double cfl_limit = 1.0;
    /// Halt once the vorticity maximum exceeds this.
    double vorticity_ceiling = 1e8;
    /// Diagnostics are recorded every this many steps (and at the start and end).
    int sample_every = 1;
};

SolverState init(const VectorField& u0, FlowParams params, double dt);

/// One IMEX step: diffusion implicit, rotational-form advection explicit and
/// dealiased, projection after every stage. Throws StepRejected when the CFL
/// number exceeds the limit and Divergence on non-finite values.
SolverState step(const SolverState& state, const SolverOptions& options = {});

/// Pressure with zero mean, recovered from the Poisson equation.
ScalarField pressure(const SolverState& state);

/// Diagnostics except the BKM integral, which needs the history.
DiagnosticSample diagnose(const SolverState& state);

using Observer = std::function<void(const SolverState&, const DiagnosticSample&)>;

struct RunResult {
    SolverState state;
    DiagnosticSeries series;
    bool halted = false;
    std::string halt_reason;
};

/// Fixed-step run to t_end, which must be a whole number of steps away. The
/// observer sees every recorded sample and cannot modify the state.
RunResult run(SolverState state, double t_end, const SolverOptions& options = {}, const Observer& observer = {});

}  // namespace pns
