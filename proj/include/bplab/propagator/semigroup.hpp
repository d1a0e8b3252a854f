#pragma once

#include "bplab/spectral/field.hpp"

namespace bplab::propagator {

using spectral::SpectralField2D;

/// The dispersion symbol p(xi) = xi_1 / |xi|^2, taken as 0 at xi = 0.
double dispersion(Vec2 xi);

/// exp(t L_1): multiplies each mode by exp(-i t xi_1/|xi|^2). The zero mode is left unchanged.
SpectralField2D apply_semigroup(const SpectralField2D& f, double t);

/// In-place variant used by the time stepper.
void apply_semigroup_inplace(SpectralField2D& f, double t);

}  // namespace bplab::propagator
