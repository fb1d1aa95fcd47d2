#pragma once

#include "pns/field.hpp"

namespace pns {

/// Forward transform; coefficients are normalized by 1/N^3 so that sin(x) maps to
/// -i/2 at mode +1 and +i/2 at mode -1. Throws InvalidState if already spectral.
ScalarField to_spectral(const ScalarField& field);
/// Inverse transform keeping the real part. Throws InvalidState if already physical.
ScalarField to_physical(const ScalarField& field);

VectorField to_spectral(const VectorField& field);
VectorField to_physical(const VectorField& field);

/// In-place unnormalized transforms of an N^3 buffer in grid layout.
void fft_forward(const SpectralGrid& grid, std::span<Complex> data);
void fft_backward(const SpectralGrid& grid, std::span<Complex> data);

/// Converts only when needed.
ScalarField as_spectral(const ScalarField& field);
ScalarField as_physical(const ScalarField& field);
VectorField as_spectral(const VectorField& field);
VectorField as_physical(const VectorField& field);

/// Spectral derivative (i k)^order along one axis, order in 1..4. Odd orders drop the
/// unpaired -N/2 mode. The result keeps the input representation.
ScalarField derivative(const ScalarField& field, Axis axis, int order = 1);
ScalarField laplacian(const ScalarField& field);
VectorField gradient(const ScalarField& field);
ScalarField divergence(const VectorField& field);
VectorField curl(const VectorField& field);

/// Mean-zero solution of lap(u) = rhs. Throws IncompatibleRhs when
/// |mean(rhs)| > 1e-10 * max|rhs|.
ScalarField solve_poisson(const ScalarField& rhs);

/// Mode-wise projection onto divergence-free fields; keeps the input representation.
VectorField leray_project(const VectorField& field);

/// Zeroes every mode outside the two-thirds mask; keeps the input representation.
ScalarField dealias(const ScalarField& field);

/// Lattice quadrature sum(f) * h^3 with compensated summation.
double integrate(const ScalarField& field);
double mean(const ScalarField& field);
double max_abs(const ScalarField& field);

/// L_p norm with cell weight (2*pi*L/N)^3; p = infinity gives the max.
/// Vector fields use the pointwise Euclidean magnitude.
double norm(const ScalarField& field, double p);
double norm(const VectorField& field, double p);

/// sum |c_k|^2 over all modes, which equals mean(f^2) by Parseval.
double spectral_energy(const ScalarField& field);

}  // namespace pns
