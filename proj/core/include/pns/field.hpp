#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "pns/grid.hpp"

namespace pns {

enum class Representation { physical, spectral };

using Complex = std::complex<double>;

/// Periodic scalar samples on a SpectralGrid, held either as real lattice values
/// or as complex mode coefficients (forward transform normalized by 1/N^3).
class ScalarField {
public:
    static ScalarField zeros(const SpectralGrid& grid, Representation rep = Representation::physical);
    static ScalarField constant(const SpectralGrid& grid, double value);
    static ScalarField physical(const SpectralGrid& grid, std::vector<double> values);
    static ScalarField spectral(const SpectralGrid& grid, std::vector<Complex> coefficients);
    /// Samples f(x, y, z) at the lattice nodes.
    static ScalarField sample(const SpectralGrid& grid, const std::function<double(double, double, double)>& f);

    const SpectralGrid& grid() const noexcept { return grid_; }
    Representation representation() const noexcept { return rep_; }
    bool is_physical() const noexcept { return rep_ == Representation::physical; }

    /// Lattice values; throws InvalidState unless physical.
    std::span<const double> values() const;
    std::span<double> values();
    /// Mode coefficients; throws InvalidState unless spectral.
    std::span<const Complex> coefficients() const;
    std::span<Complex> coefficients();

    double at(int i, int j, int k) const;
    /// Coefficient of integer mode (mx, my, mz), each in {-N/2, ..., N/2-1}.
    Complex coefficient(int mx, int my, int mz) const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

private:
    ScalarField(SpectralGrid grid, Representation rep) : grid_(std::move(grid)), rep_(rep) {}

    SpectralGrid grid_;
    Representation rep_;
    std::vector<double> physical_;
    std::vector<Complex> spectral_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);
/// Pointwise product of two physical fields.
ScalarField hadamard(const ScalarField& a, const ScalarField& b);

/// Three components on one grid and in one representation.
class VectorField {
public:
    VectorField(ScalarField x, ScalarField y, ScalarField z);
    static VectorField zeros(const SpectralGrid& grid, Representation rep = Representation::physical);

    const SpectralGrid& grid() const noexcept { return c_[0].grid(); }
    Representation representation() const noexcept { return c_[0].representation(); }

    const ScalarField& operator[](Axis a) const noexcept { return c_[static_cast<int>(a)]; }
    ScalarField& operator[](Axis a) noexcept { return c_[static_cast<int>(a)]; }
    const ScalarField& operator[](int a) const noexcept { return c_[a]; }
    ScalarField& operator[](int a) noexcept { return c_[a]; }

private:
    std::array<ScalarField, 3> c_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(double s, VectorField a);

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* what);

}  // namespace pns
