#pragma once

#include <span>
#include <string>

#include "pns/closed_form.hpp"

namespace pns {

/// Where c multiplies the first auxiliary equation. `c2_laplacian` is the form whose sum
/// with L3_W gives the wave equation; `c_time` is c d4u_z/dt4 - lap(u_dir).
enum class L3Form { c2_laplacian, c_time };

struct WaveParams {
    double c = 1.0;
    L3Form form = L3Form::c2_laplacian;
    void validate() const;
};

/// c2_laplacian: d4u_z/dt4 - c^2 lap(u_dir)
double l3_residual(const ClosedFormField& uz, const ClosedFormField& u_dir, const WaveParams& params, const Point3& x,
                   double t);
/// c d2u_dir/dt2 - d4u_z/dt4
double l3w_residual(const ClosedFormField& uz, const ClosedFormField& u_dir, const WaveParams& params, const Point3& x,
                    double t);
/// d2u_dir/dt2 - c lap(u_dir)
double wave_residual(const ClosedFormField& u_dir, const WaveParams& params, const Point3& x, double t);

struct ReductionReport {
    Axis direction = Axis::y;
    double c = 1.0;
    L3Form form = L3Form::c2_laplacian;
    double tol = 0.0;
    double max_l3 = 0.0;
    double max_l3w = 0.0;
    double max_wave = 0.0;
    /// max |l3 + l3w - c*wave| relative to the largest term involved.
    double identity_gap = 0.0;
    std::size_t samples = 0;
    /// Points where both auxiliaries are within tol.
    std::size_t applicable = 0;
    std::size_t violations = 0;
    /// True when applicable > 0 and every applicable point has |wave| <= 2 tol / c.
    bool implication_holds = false;
    std::string notes;
};

/// Throws InvalidArgument for an empty sample set.
ReductionReport reduction_check(const ClosedFormField& uz, const ClosedFormField& u_dir, Axis direction,
                                const WaveParams& params, std::span<const Point4> samples, double tol = 1e-8);

}  // namespace pns
