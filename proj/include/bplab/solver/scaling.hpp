#pragma once

#include "bplab/spectral/field.hpp"

namespace bplab::solver {

using spectral::RealField2D;

/// lambda^-1 omega(lambda x) sampled on the same grid.
///
/// omega is evaluated off the lattice by its trigonometric interpolant; points lambda x outside
/// the box are treated as lying in the field's zero exterior. Throws DomainError when lambda <= 0,
/// when more than support_tol of the input's L^2 mass would be cut off (lambda < 1), or when more
/// than support_tol of the output's spectral mass would sit beyond the two-thirds band (lambda > 1).
RealField2D scaling_transform(const RealField2D& omega, double lambda, double support_tol = 1e-10);

}  // namespace bplab::solver
