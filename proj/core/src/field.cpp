#include "pns/field.hpp"

#include <algorithm>
#include <string>

#include "pns/error.hpp"

namespace pns {

void require_same_grid(const SpectralGrid& a, const SpectralGrid& b, const char* what) {
    require(a == b, ErrorKind::InvalidArgument, std::string(what) + ": fields live on different grids");
}

ScalarField ScalarField::zeros(const SpectralGrid& grid, Representation rep) {
    ScalarField f(grid, rep);
    if (rep == Representation::physical)
        f.physical_.assign(grid.size(), 0.0);
    else
        f.spectral_.assign(grid.size(), Complex{});
    return f;
}

ScalarField ScalarField::constant(const SpectralGrid& grid, double value) {
    ScalarField f(grid, Representation::physical);
    f.physical_.assign(grid.size(), value);
    return f;
}

ScalarField ScalarField::physical(const SpectralGrid& grid, std::vector<double> values) {
    require(values.size() == grid.size(), ErrorKind::InvalidArgument, "physical samples do not match grid size");
    ScalarField f(grid, Representation::physical);
    f.physical_ = std::move(values);
    return f;
}

ScalarField ScalarField::spectral(const SpectralGrid& grid, std::vector<Complex> coefficients) {
    require(coefficients.size() == grid.size(), ErrorKind::InvalidArgument,
            "spectral coefficients do not match grid size");
    ScalarField f(grid, Representation::spectral);
    f.spectral_ = std::move(coefficients);
    return f;
}

ScalarField ScalarField::sample(const SpectralGrid& grid, const std::function<double(double, double, double)>& fn) {
    ScalarField f(grid, Representation::physical);
    f.physical_.resize(grid.size());
    const int n = grid.n_modes();
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                f.physical_[grid.index(i, j, k)] = fn(grid.coordinate(i), grid.coordinate(j), grid.coordinate(k));
    return f;
}

std::span<const double> ScalarField::values() const {
    require(is_physical(), ErrorKind::InvalidState, "field is not in physical representation");
    return physical_;
}

std::span<double> ScalarField::values() {
    require(is_physical(), ErrorKind::InvalidState, "field is not in physical representation");
    return physical_;
}

std::span<const Complex> ScalarField::coefficients() const {
    require(!is_physical(), ErrorKind::InvalidState, "field is not in spectral representation");
    return spectral_;
}

std::span<Complex> ScalarField::coefficients() {
    require(!is_physical(), ErrorKind::InvalidState, "field is not in spectral representation");
    return spectral_;
}

double ScalarField::at(int i, int j, int k) const { return values()[grid_.index(i, j, k)]; }

Complex ScalarField::coefficient(int mx, int my, int mz) const {
    const int half = grid_.n_modes() / 2;
    for (int m : {mx, my, mz})
        require(m >= -half && m < half, ErrorKind::InvalidArgument, "mode outside {-N/2, ..., N/2-1}");
    return coefficients()[grid_.index(grid_.mode_index(mx), grid_.mode_index(my), grid_.mode_index(mz))];
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "operator+=");
    require(rep_ == other.rep_, ErrorKind::InvalidState, "operator+=: representation mismatch");
    if (is_physical())
        std::transform(physical_.begin(), physical_.end(), other.physical_.begin(), physical_.begin(), std::plus<>{});
    else
        std::transform(spectral_.begin(), spectral_.end(), other.spectral_.begin(), spectral_.begin(), std::plus<>{});
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same_grid(grid_, other.grid_, "operator-=");
    require(rep_ == other.rep_, ErrorKind::InvalidState, "operator-=: representation mismatch");
    if (is_physical())
        std::transform(physical_.begin(), physical_.end(), other.physical_.begin(), physical_.begin(), std::minus<>{});
    else
        std::transform(spectral_.begin(), spectral_.end(), other.spectral_.begin(), spectral_.begin(), std::minus<>{});
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (auto& v : physical_) v *= s;
    for (auto& c : spectral_) c *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
    require_same_grid(a.grid(), b.grid(), "hadamard");
    auto av = a.values();
    auto bv = b.values();
    std::vector<double> out(av.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
    return ScalarField::physical(a.grid(), std::move(out));
}

VectorField::VectorField(ScalarField x, ScalarField y, ScalarField z) : c_{std::move(x), std::move(y), std::move(z)} {
    require_same_grid(c_[0].grid(), c_[1].grid(), "VectorField");
    require_same_grid(c_[0].grid(), c_[2].grid(), "VectorField");
    require(c_[0].representation() == c_[1].representation() && c_[0].representation() == c_[2].representation(),
            ErrorKind::InvalidState, "VectorField components must share one representation");
}

VectorField VectorField::zeros(const SpectralGrid& grid, Representation rep) {
    return {ScalarField::zeros(grid, rep), ScalarField::zeros(grid, rep), ScalarField::zeros(grid, rep)};
}

VectorField operator+(VectorField a, const VectorField& b) {
    for (int c = 0; c < 3; ++c) a[c] += b[c];
    return a;
}

VectorField operator-(VectorField a, const VectorField& b) {
    for (int c = 0; c < 3; ++c) a[c] -= b[c];
    return a;
}

VectorField operator*(double s, VectorField a) {
    for (int c = 0; c < 3; ++c) a[c] *= s;
    return a;
}

}  // namespace pns
