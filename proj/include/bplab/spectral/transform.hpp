#pragma once

#include <utility>

#include "bplab/spectral/field.hpp"

namespace bplab::spectral {

/// Physical samples to coefficients c_xi (FFTW backed).
SpectralField2D transform_forward(const RealField2D& field);

/// Coefficients to physical samples. The imaginary part of the synthesis is discarded, so the
/// input is expected to be Hermitian.
RealField2D transform_inverse(const SpectralField2D& field);

/// Two real fields from two Hermitian spectra with a single complex transform.
std::pair<RealField2D, RealField2D> transform_inverse_pair(const SpectralField2D& a,
                                                           const SpectralField2D& b);

/// Unnormalized complex synthesis sum_xi c_xi exp(i xi . x) at every grid point.
std::vector<Complex> synthesize(const Grid2D& grid, std::span<const Complex> modes);

/// Analysis of complex samples: the inverse of synthesize().
std::vector<Complex> analyze(const Grid2D& grid, std::span<const Complex> samples);

}  // namespace bplab::spectral
