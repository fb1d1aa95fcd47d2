#pragma once

#include <string>
#include <vector>

#include "pns/closed_form.hpp"

namespace pns {

struct ExponentFit {
    int m = 1;
    double fitted_slope = 0.0;
    double expected_slope = 0.0;  // 1/6 - m
    double rel_error = 0.0;
    int j_min = 2;
    int j_max = 8;
    std::vector<double> offsets;  // 10^-j
    std::vector<double> values;   // |F4^(m)(C1 - 10^-j)|
};

/// Least-squares slope of log|F4^(m)(C1 - 10^-j)| against log(10^-j), j = j_min..j_max.
/// Throws InvalidRange unless 2 <= j_min < j_max <= 12 and every sample lies on the
/// nonzero branch.
ExponentFit fit_blowup_exponent(const F4Params& params, int m, int j_min, int j_max);

struct BlowupCurves {
    std::vector<double> t;
    std::vector<int> orders;
    std::vector<std::vector<double>> values;  // values[i][k] = |F4^(orders[i])(t[k])|
};

/// SingularPoint when the grid contains C1 exactly and some order is >= 1.
BlowupCurves blowup_curves(const F4Params& params, const std::vector<int>& orders, const std::vector<double>& t_grid);

/// `before` points clustering geometrically towards C1 from 0, then `after` uniform
/// points on (C1, t_max].
std::vector<double> blowup_curve_grid(const F4Params& params, int before, int after, double t_max);

struct OdeCrosscheck {
    double t_stop = 0.0;
    std::size_t points = 0;
    double max_rel_deviation = 0.0;
    double tolerance = 1e-8;
    bool passed = false;
    std::string notes;
};

/// Integrates dF/dt = -sqrt(c4) F^-5 from F4(0) with an adaptive Dormand-Prince
/// stepper and compares with the closed form on [0, t_stop_frac * C1].
OdeCrosscheck ode_crosscheck(const F4Params& params, double t_stop_frac, std::size_t points = 200);

}  // namespace pns
