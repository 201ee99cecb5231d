#pragma once

// Normal forms for single-input systems X' = (A + u B) X.

#include "su11/algebra.hpp"

namespace su11 {

/// Frame P = exp(beta Kx) exp(alpha Kz) with P B P^{-1} = scale * Ky.
struct NormalizationResult {
  double alpha = 0.0;
  double beta = 0.0;
  GroupElement frame;
  double scale = 0.0;
};

/// A single-input system rewritten as X' = (eps Kx + a Kz + w Ky) X.
///
/// For the original control u the canonical control is
///   w = (control_scale * u + control_offset) / time_scale
/// and frame * (A + u B) * frame^{-1} = time_scale * (eps Kx + a Kz + w Ky).
struct CanonicalSystem {
  int epsilon = 1;
  double a = 0.0;
  double time_scale = 1.0;
  double control_offset = 0.0;
  double control_scale = 1.0;
  GroupElement frame;

  AlgebraElement drift() const { return {static_cast<double>(epsilon), 0.0, a}; }
  double canonical_control(double u) const { return (control_scale * u + control_offset) / time_scale; }
};

struct PeriodicControl {
  double u = 0.0;
  int n = 1;
  double epsilon = 1.0;
};

/// Conjugates a hyperbolic B onto sqrt(<B,B^dagger>) Ky. Throws NotHyperbolic otherwise.
NormalizationResult normalize_hyperbolic(const AlgebraElement& b);

/// Reduction of the all-hyperbolic regime (B hyperbolic, Omega empty, [A,B] not
/// parabolic). Each precondition is validated and named on failure.
CanonicalSystem reduce_single(const AlgebraElement& a, const AlgebraElement& b);

/// (x1 - x4)^2 - (x2 - x3)^2. Nonincreasing along trajectories of canonical systems with
/// eps = +1, nondecreasing for eps = -1.
double monotone_value(const GroupElement& x);

/// Smallest n >= 1 and u > max(u_c, 0) with (epsilon / 2) sqrt(-q(u)) = 2 pi n, so
/// that exp(epsilon (A + u B)) = I. Requires B elliptic.
PeriodicControl periodic_control(const AlgebraElement& a, const AlgebraElement& b, double epsilon);

}  // namespace su11
