#include "pns/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pns/error.hpp"

namespace pns {

SpectralGrid make_grid(int n_modes, double box_length) {
    require(n_modes >= 4 && n_modes % 2 == 0, ErrorKind::InvalidArgument,
            "grid.n_modes must be even and >= 4, got " + std::to_string(n_modes));
    require(std::isfinite(box_length) && box_length > 0.0, ErrorKind::InvalidArgument,
            "grid.box_length must be positive");

    SpectralGrid grid;
    grid.n_ = n_modes;
    grid.length_ = box_length;

    auto tables = std::make_shared<SpectralGrid::Tables>();
    const int half = n_modes / 2;
    tables->modes.resize(n_modes);
    tables->wavenumbers.resize(n_modes);
    tables->odd_wavenumbers.resize(n_modes);
    tables->keep.resize(n_modes);
    for (int q = 0; q < n_modes; ++q) {
        const int m = q < half ? q : q - n_modes;
        tables->modes[q] = m;
        tables->wavenumbers[q] = m / box_length;
        tables->odd_wavenumbers[q] = (m == -half) ? 0.0 : m / box_length;
        // |m| <= N/3 without floating point: 3|m| <= N.
        tables->keep[q] = 3 * std::abs(m) <= n_modes;
    }
    grid.tables_ = std::move(tables);
    return grid;
}

double SpectralGrid::extent() const noexcept { return 2.0 * std::numbers::pi * length_; }

double SpectralGrid::spacing() const noexcept { return extent() / n_; }

double SpectralGrid::cell_volume() const noexcept {
    const double h = spacing();
    return h * h * h;
}

std::size_t SpectralGrid::size() const noexcept {
    const auto n = static_cast<std::size_t>(n_);
    return n * n * n;
}

bool SpectralGrid::dealias_mask(int i, int j, int k) const noexcept {
    const auto& keep = tables_->keep;
    return keep[i] && keep[j] && keep[k];
}

double SpectralGrid::coordinate(int index) const noexcept { return index * spacing(); }

int SpectralGrid::mode_index(int mode) const noexcept { return mode >= 0 ? mode : mode + n_; }

}  // namespace pns
