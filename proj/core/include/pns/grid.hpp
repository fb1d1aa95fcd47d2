#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

namespace pns {

enum class Axis { x = 0, y = 1, z = 2 };

inline constexpr std::array<Axis, 3> kAxes{Axis::x, Axis::y, Axis::z};

/// Uniform periodic discretization of the box [0, 2*pi*L)^3 with N modes per axis.
///
/// Lattice storage is x-fastest: flat index = i + N*(j + N*k) for (x_i, y_j, z_k).
/// Spectral storage uses the same layout, with axis index q holding integer
/// mode q for q < N/2 and q - N for q >= N/2.
class SpectralGrid {
public:
    int n_modes() const noexcept { return n_; }
    double box_length() const noexcept { return length_; }
    /// Physical side of the box, 2*pi*L.
    double extent() const noexcept;
    double spacing() const noexcept;
    double cell_volume() const noexcept;
    std::size_t size() const noexcept;

    /// Integer mode numbers per axis index, in {-N/2, ..., N/2-1}.
    const std::vector<int>& modes() const noexcept { return tables_->modes; }
    /// Physical wavenumbers (mode / L) per axis index.
    const std::vector<double>& wavenumbers() const noexcept { return tables_->wavenumbers; }
    /// Wavenumbers with the unpaired -N/2 entry zeroed; used for odd-order operators.
    const std::vector<double>& odd_wavenumbers() const noexcept { return tables_->odd_wavenumbers; }
    /// Per-axis two-thirds rule: true when |mode| <= N/3.
    const std::vector<bool>& dealias_axis() const noexcept { return tables_->keep; }

    bool dealias_mask(int i, int j, int k) const noexcept;
    double coordinate(int index) const noexcept;
    /// Axis index of integer mode m, which must lie in {-N/2, ..., N/2-1}.
    int mode_index(int mode) const noexcept;

    std::size_t index(int i, int j, int k) const noexcept {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(n_) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(k));
    }

    friend bool operator==(const SpectralGrid& a, const SpectralGrid& b) noexcept {
        return a.n_ == b.n_ && a.length_ == b.length_;
    }

private:
    friend SpectralGrid make_grid(int n_modes, double box_length);

    struct Tables {
        std::vector<int> modes;
        std::vector<double> wavenumbers;
        std::vector<double> odd_wavenumbers;
        std::vector<bool> keep;
    };

    int n_ = 0;
    double length_ = 0.0;
    std::shared_ptr<const Tables> tables_;
};

/// Throws Error(InvalidArgument) for odd or < 4 mode counts and non-positive lengths.
SpectralGrid make_grid(int n_modes, double box_length);

}  // namespace pns
