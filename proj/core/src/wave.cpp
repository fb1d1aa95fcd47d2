#include "pns/wave.hpp"

#include <algorithm>
#include <cmath>

#include "pns/error.hpp"
#include "pns/format.hpp"

namespace pns {
namespace {

struct Terms {
    double uz_t4 = 0.0;
    double u_tt = 0.0;
    double lap = 0.0;
};

Terms terms(const ClosedFormField* uz, const ClosedFormField& u, const Point3& x, double t) {
    const Point4 p{x.x, x.y, x.z, t};
    Terms s;
    if (uz) s.uz_t4 = uz->derivative(p, {0, 0, 0, 4});
    s.u_tt = u.derivative(p, {0, 0, 0, 2});
    s.lap = u.derivative(p, {2, 0, 0, 0}) + u.derivative(p, {0, 2, 0, 0}) + u.derivative(p, {0, 0, 2, 0});
    return s;
}

double l3_of(const Terms& s, const WaveParams& w) {
    return w.form == L3Form::c2_laplacian ? s.uz_t4 - w.c * w.c * s.lap : w.c * s.uz_t4 - s.lap;
}
double l3w_of(const Terms& s, const WaveParams& w) { return w.c * s.u_tt - s.uz_t4; }
double wave_of(const Terms& s, const WaveParams& w) { return s.u_tt - w.c * s.lap; }

}  // namespace

void WaveParams::validate() const {
    require(std::isfinite(c) && c > 0.0, ErrorKind::InvalidArgument, "wave.c must be positive, got " + format_double(c));
}

double l3_residual(const ClosedFormField& uz, const ClosedFormField& u_dir, const WaveParams& params, const Point3& x,
                   double t) {
    params.validate();
    return l3_of(terms(&uz, u_dir, x, t), params);
}

double l3w_residual(const ClosedFormField& uz, const ClosedFormField& u_dir, const WaveParams& params, const Point3& x,
                    double t) {
    params.validate();
    return l3w_of(terms(&uz, u_dir, x, t), params);
}

double wave_residual(const ClosedFormField& u_dir, const WaveParams& params, const Point3& x, double t) {
    params.validate();
    return wave_of(terms(nullptr, u_dir, x, t), params);
}

ReductionReport reduction_check(const ClosedFormField& uz, const ClosedFormField& u_dir, Axis direction,
                                const WaveParams& params, std::span<const Point4> samples, double tol) {
    params.validate();
    require(!samples.empty(), ErrorKind::InvalidArgument, "reduction_check needs at least one sample point");
    require(std::isfinite(tol) && tol > 0.0, ErrorKind::InvalidArgument, "tolerance must be positive");

    ReductionReport r;
    r.direction = direction;
    r.c = params.c;
    r.form = params.form;
    r.tol = tol;
    r.samples = samples.size();
    const double bound = 2.0 * tol / params.c;
    for (const Point4& p : samples) {
        const Terms s = terms(&uz, u_dir, {p.x, p.y, p.z}, p.t);
        const double a = l3_of(s, params), b = l3w_of(s, params), w = wave_of(s, params);
        r.max_l3 = std::max(r.max_l3, std::abs(a));
        r.max_l3w = std::max(r.max_l3w, std::abs(b));
        r.max_wave = std::max(r.max_wave, std::abs(w));
        const double scale = std::max({std::abs(s.uz_t4), params.c * params.c * std::abs(s.lap),
                                       params.c * std::abs(s.u_tt), std::abs(s.lap), 1e-300});
        r.identity_gap = std::max(r.identity_gap, std::abs(a + b - params.c * w) / scale);
        if (std::abs(a) <= tol && std::abs(b) <= tol) {
            ++r.applicable;
            if (std::abs(w) > bound) ++r.violations;
        }
    }
    r.implication_holds = r.applicable > 0 && r.violations == 0;
    if (r.applicable == 0) r.notes = "auxiliary equations not satisfied at any sample; implication not applicable";
    if (direction == Axis::z) {
        if (!r.notes.empty()) r.notes += "; ";
        r.notes += "z direction by symmetry with x and y (extrapolated)";
    }
    if (params.form == L3Form::c_time) {
        if (!r.notes.empty()) r.notes += "; ";
        r.notes += "c_time form: l3 + l3w equals c*wave only when c = 1";
    }
    return r;
}

}  // namespace pns
