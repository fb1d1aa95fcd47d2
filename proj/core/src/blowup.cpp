#include "pns/blowup.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "pns/error.hpp"
#include "pns/format.hpp"

namespace pns {

ExponentFit fit_blowup_exponent(const F4Params& params, int m, int j_min, int j_max) {
    params.validate();
    require(m >= 0 && m <= 4, ErrorKind::InvalidArgument, "derivative order must be in 0..4");
    require(2 <= j_min && j_min < j_max && j_max <= 12, ErrorKind::InvalidRange,
            "offset exponents must satisfy 2 <= j_min < j_max <= 12, got " + std::to_string(j_min) + ".." +
                std::to_string(j_max));
    ExponentFit fit;
    fit.m = m;
    fit.j_min = j_min;
    fit.j_max = j_max;
    fit.expected_slope = 1.0 / 6.0 - m;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = j_min; j <= j_max; ++j) {
        const double h = std::pow(10.0, -j);
        const double t = params.C1 - h;
        if (!(t >= 0.0 && t < params.C1))
            fail(ErrorKind::InvalidRange, "sample C1 - 1e-" + std::to_string(j) + " is outside [0, C1)");
        const double v = std::abs(f4_value(params, t, m));
        if (!(v > 0.0) || !std::isfinite(v))
            fail(ErrorKind::InvalidRange, "sample C1 - 1e-" + std::to_string(j) + " lies on the zero branch");
        fit.offsets.push_back(h);
        fit.values.push_back(v);
        // use the realised offset, which differs from 10^-j by rounding of t
        const double x = std::log(params.C1 - t), y = std::log(v);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(fit.offsets.size());
    fit.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.rel_error = std::abs(fit.fitted_slope - fit.expected_slope) / std::abs(fit.expected_slope);
    return fit;
}

BlowupCurves blowup_curves(const F4Params& params, const std::vector<int>& orders, const std::vector<double>& t_grid) {
    params.validate();
    BlowupCurves table;
    table.t = t_grid;
    table.orders = orders;
    for (int m : orders) {
        std::vector<double> col;
        col.reserve(t_grid.size());
        for (double t : t_grid) col.push_back(std::abs(f4_value(params, t, m)));
        table.values.push_back(std::move(col));
    }
    return table;
}

std::vector<double> blowup_curve_grid(const F4Params& params, int before, int after, double t_max) {
    params.validate();
    require(before >= 2 && after >= 0, ErrorKind::InvalidArgument, "curve grid needs at least 2 points before C1");
    require(after == 0 || t_max > params.C1, ErrorKind::InvalidArgument, "t_max must exceed C1");
    std::vector<double> t;
    // offsets C1 * 10^(-8 k / (before - 1)), k = 0..before-1, from t = 0 up to C1 - 1e-8 C1
    for (int k = 0; k < before; ++k) {
        const double off = params.C1 * std::pow(10.0, -8.0 * k / (before - 1));
        t.push_back(params.C1 - off);
    }
    for (int k = 1; k <= after; ++k) t.push_back(params.C1 + (t_max - params.C1) * k / after);
    return t;
}

OdeCrosscheck ode_crosscheck(const F4Params& params, double t_stop_frac, std::size_t points) {
    params.validate();
    require(t_stop_frac >= 0.0 && t_stop_frac < 1.0, ErrorKind::InvalidArgument,
            "t_stop_frac must lie in [0, 1), got " + format_double(t_stop_frac));
    require(points >= 2, ErrorKind::InvalidArgument, "ode crosscheck needs at least 2 points");
    namespace ode = boost::numeric::odeint;

    OdeCrosscheck r;
    r.t_stop = t_stop_frac * params.C1;
    const double root = std::sqrt(params.c4);
    if (r.t_stop == 0.0) {
        r.points = 1;
        r.passed = true;
        r.notes = "single point";
        return r;
    }

    std::vector<double> times(points);
    for (std::size_t i = 0; i < points; ++i) times[i] = r.t_stop * static_cast<double>(i) / (points - 1);
    double state = f4_value(params, 0.0, 0);
    auto rhs = [root](const double& f, double& dfdt, double) { dfdt = -root / std::pow(f, 5); };
    auto observe = [&](const double& f, double t) {
        const double exact = f4_value(params, t, 0);
        r.max_rel_deviation = std::max(r.max_rel_deviation, std::abs(f - exact) / std::abs(exact));
        ++r.points;
    };
    try {
        auto stepper = ode::make_dense_output(1e-14, 1e-14, ode::runge_kutta_dopri5<double>());
        ode::integrate_times(stepper, rhs, state, times.begin(), times.end(), r.t_stop / 1000.0, observe);
    } catch (const std::exception& e) {
        r.notes = std::string("integrator stopped early: ") + e.what();
    }
    r.passed = r.points == points && r.max_rel_deviation <= r.tolerance;
    if (r.notes.empty() && !r.passed)
        r.notes = "achieved relative accuracy " + format_double(r.max_rel_deviation);
    return r;
}

}  // namespace pns
