#include "pns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "pns/error.hpp"
#include "pns/summation.hpp"

namespace pns {
namespace {

// FFTW's planner is not thread-safe; execution through the new-array interface is.
class FftPlans {
public:
    explicit FftPlans(int n) {
        std::vector<Complex> scratch(static_cast<std::size_t>(n) * n * n);
        auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        // Row-major (z, y, x) makes x the fastest index.
        forward_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, flags);
        backward_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, flags);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;
    ~FftPlans() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }

    void forward(Complex* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(forward_, p, p);
    }
    void backward(Complex* data) const {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        fftw_execute_dft(backward_, p, p);
    }

private:
    fftw_plan forward_;
    fftw_plan backward_;
};

const FftPlans& plans_for(int n) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<FftPlans>(n);
    return *slot;
}

template <class Fn>
void for_each_mode(const SpectralGrid& grid, Fn&& fn) {
    const int n = grid.n_modes();
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) fn(i, j, k, grid.index(i, j, k));
}

Complex ipow(int order) {
    // i^order
    static constexpr Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[order % 4];
}

}  // namespace

void fft_forward(const SpectralGrid& grid, std::span<Complex> data) {
    require(data.size() == grid.size(), ErrorKind::InvalidArgument, "fft buffer size does not match the grid");
    plans_for(grid.n_modes()).forward(data.data());
}

void fft_backward(const SpectralGrid& grid, std::span<Complex> data) {
    require(data.size() == grid.size(), ErrorKind::InvalidArgument, "fft buffer size does not match the grid");
    plans_for(grid.n_modes()).backward(data.data());
}

ScalarField to_spectral(const ScalarField& field) {
    require(field.is_physical(), ErrorKind::InvalidState, "to_spectral: field is already spectral");
    const auto& grid = field.grid();
    auto values = field.values();
    std::vector<Complex> data(values.begin(), values.end());
    plans_for(grid.n_modes()).forward(data.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : data) c *= scale;
    return ScalarField::spectral(grid, std::move(data));
}

ScalarField to_physical(const ScalarField& field) {
    require(!field.is_physical(), ErrorKind::InvalidState, "to_physical: field is already physical");
    const auto& grid = field.grid();
    auto coeffs = field.coefficients();
    std::vector<Complex> data(coeffs.begin(), coeffs.end());
    plans_for(grid.n_modes()).backward(data.data());
    std::vector<double> out(data.size());
    std::transform(data.begin(), data.end(), out.begin(), [](const Complex& c) { return c.real(); });
    return ScalarField::physical(grid, std::move(out));
}

VectorField to_spectral(const VectorField& f) { return {to_spectral(f[0]), to_spectral(f[1]), to_spectral(f[2])}; }
VectorField to_physical(const VectorField& f) { return {to_physical(f[0]), to_physical(f[1]), to_physical(f[2])}; }

ScalarField as_spectral(const ScalarField& f) { return f.is_physical() ? to_spectral(f) : f; }
ScalarField as_physical(const ScalarField& f) { return f.is_physical() ? f : to_physical(f); }
VectorField as_spectral(const VectorField& f) { return {as_spectral(f[0]), as_spectral(f[1]), as_spectral(f[2])}; }
VectorField as_physical(const VectorField& f) { return {as_physical(f[0]), as_physical(f[1]), as_physical(f[2])}; }

ScalarField derivative(const ScalarField& field, Axis axis, int order) {
    require(order >= 1 && order <= 4, ErrorKind::InvalidArgument,
            "derivative order must be in 1..4, got " + std::to_string(order));
    const auto& grid = field.grid();
    const bool was_physical = field.is_physical();
    ScalarField spec = as_spectral(field);
    const auto& k = (order % 2 == 1) ? grid.odd_wavenumbers() : grid.wavenumbers();
    const Complex unit = ipow(order);
    std::vector<Complex> factor(k.size());
    for (std::size_t q = 0; q < k.size(); ++q) factor[q] = unit * std::pow(k[q], order);
    auto c = spec.coefficients();
    const int a = static_cast<int>(axis);
    for_each_mode(grid, [&](int i, int j, int l, std::size_t idx) {
        c[idx] *= factor[a == 0 ? i : (a == 1 ? j : l)];
    });
    return was_physical ? to_physical(spec) : spec;
}

ScalarField laplacian(const ScalarField& field) {
    const auto& grid = field.grid();
    const bool was_physical = field.is_physical();
    ScalarField spec = as_spectral(field);
    const auto& k = grid.wavenumbers();
    auto c = spec.coefficients();
    for_each_mode(grid, [&](int i, int j, int l, std::size_t idx) {
        c[idx] *= -(k[i] * k[i] + k[j] * k[j] + k[l] * k[l]);
    });
    return was_physical ? to_physical(spec) : spec;
}

VectorField gradient(const ScalarField& f) {
    return {derivative(f, Axis::x), derivative(f, Axis::y), derivative(f, Axis::z)};
}

ScalarField divergence(const VectorField& v) {
    ScalarField out = derivative(v[0], Axis::x);
    out += derivative(v[1], Axis::y);
    out += derivative(v[2], Axis::z);
    return out;
}

VectorField curl(const VectorField& v) {
    return {derivative(v[2], Axis::y) - derivative(v[1], Axis::z),
            derivative(v[0], Axis::z) - derivative(v[2], Axis::x),
            derivative(v[1], Axis::x) - derivative(v[0], Axis::y)};
}

ScalarField solve_poisson(const ScalarField& rhs) {
    const auto& grid = rhs.grid();
    const bool was_physical = rhs.is_physical();
    ScalarField spec = as_spectral(rhs);
    const double scale = max_abs(rhs);
    const double m = std::abs(spec.coefficients()[0].real());
    if (m > 1e-10 * scale) {
        std::ostringstream msg;
        msg << "solve_poisson: right-hand side has nonzero mean " << m << " (max |rhs| = " << scale << ")";
        fail(ErrorKind::IncompatibleRhs, msg.str());
    }
    const auto& k = grid.wavenumbers();
    auto c = spec.coefficients();
    for_each_mode(grid, [&](int i, int j, int l, std::size_t idx) {
        const double k2 = k[i] * k[i] + k[j] * k[j] + k[l] * k[l];
        c[idx] = k2 == 0.0 ? Complex{} : c[idx] / -k2;
    });
    return was_physical ? to_physical(spec) : spec;
}

VectorField leray_project(const VectorField& field) {
    const auto& grid = field.grid();
    const bool was_physical = field.representation() == Representation::physical;
    VectorField spec = as_spectral(field);
    // Projection uses the odd-order wavenumbers so that the discrete divergence
    // (a first derivative) of the result vanishes mode by mode.
    const auto& k = grid.odd_wavenumbers();
    auto cx = spec[0].coefficients();
    auto cy = spec[1].coefficients();
    auto cz = spec[2].coefficients();
    for_each_mode(grid, [&](int i, int j, int l, std::size_t idx) {
        const double kx = k[i], ky = k[j], kz = k[l];
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) return;
        const Complex dot = (kx * cx[idx] + ky * cy[idx] + kz * cz[idx]) / k2;
        cx[idx] -= kx * dot;
        cy[idx] -= ky * dot;
        cz[idx] -= kz * dot;
    });
    return was_physical ? to_physical(spec) : spec;
}

ScalarField dealias(const ScalarField& field) {
    const auto& grid = field.grid();
    const bool was_physical = field.is_physical();
    ScalarField spec = as_spectral(field);
    auto c = spec.coefficients();
    for_each_mode(grid, [&](int i, int j, int l, std::size_t idx) {
        if (!grid.dealias_mask(i, j, l)) c[idx] = Complex{};
    });
    return was_physical ? to_physical(spec) : spec;
}

double integrate(const ScalarField& field) {
    const ScalarField phys = as_physical(field);
    CompensatedSum sum;
    for (double v : phys.values()) sum.add(v);
    return sum.value() * field.grid().cell_volume();
}

double mean(const ScalarField& field) {
    const ScalarField phys = as_physical(field);
    CompensatedSum sum;
    for (double v : phys.values()) sum.add(v);
    return sum.value() / static_cast<double>(field.grid().size());
}

double max_abs(const ScalarField& field) {
    const ScalarField phys = as_physical(field);
    double m = 0.0;
    for (double v : phys.values()) m = std::max(m, std::abs(v));
    return m;
}

namespace {

double norm_of_samples(std::span<const double> magnitudes, double p, double cell) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : magnitudes) m = std::max(m, v);
        return m;
    }
    require(p >= 1.0, ErrorKind::InvalidArgument, "norm exponent must be >= 1");
    CompensatedSum sum;
    if (p == 2.0)
        for (double v : magnitudes) sum.add(v * v);
    else if (p == 1.0)
        for (double v : magnitudes) sum.add(v);
    else
        for (double v : magnitudes) sum.add(std::pow(v, p));
    return std::pow(sum.value() * cell, 1.0 / p);
}

}  // namespace

double norm(const ScalarField& field, double p) {
    require(field.is_physical(), ErrorKind::InvalidState, "norm: field must be physical");
    auto v = field.values();
    std::vector<double> mags(v.size());
    std::transform(v.begin(), v.end(), mags.begin(), [](double x) { return std::abs(x); });
    return norm_of_samples(mags, p, field.grid().cell_volume());
}

double norm(const VectorField& field, double p) {
    require(field.representation() == Representation::physical, ErrorKind::InvalidState,
            "norm: field must be physical");
    auto x = field[0].values();
    auto y = field[1].values();
    auto z = field[2].values();
    std::vector<double> mags(x.size());
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
    return norm_of_samples(mags, p, field.grid().cell_volume());
}

double spectral_energy(const ScalarField& field) {
    const ScalarField spec = as_spectral(field);
    CompensatedSum sum;
    for (const auto& c : spec.coefficients()) sum.add(std::norm(c));
    return sum.value();
}

}  // namespace pns
