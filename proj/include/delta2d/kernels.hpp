#pragma once

#include "delta2d/errors.hpp"

namespace delta2d {

// The two bumps fixed for the whole run, and the constant
//   c = (2 pi \int r w(r) dr)^{-1}.
//
// omega  : supported on (1/2, 1), nonnegative, unit integral.
// omega0 : even, supported on (-1/2, 1/2), omega0(0) = 1, unit integral.
//
// omega0(x) = exp(t0 * u^2 (1/2 - u^2) / (1 - u^2)), u = 2x. The exponent is
// positive for |u| < 1/sqrt(2) and drops to -inf at the support edge, so the
// profile exceeds 1 on an inner band; t0 > 0 is solved so the integral is 1.
// (A profile that stays <= 1 with value 1 at 0 can never integrate to 1 over
// a unit-length support, so the overshoot band is forced.)
struct KernelProfile {
  double t0 = 0.0;    // omega0 shape parameter
  double beta = 0.0;  // omega normalizer
  double c = 0.0;
  double tol = 0.0;

  // Exact 0 outside the open support; no exponent underflow noise.
  double omega(double x) const;
  double omega0(double x) const;
};

// Deterministic construction; throws calibration_error if the t0 root-find
// fails to converge in 200 iterations.
KernelProfile build_kernel_profile(double tol);

// h(y,z) = sum_j (1/(yj)) (omega(yj) - omega(|z|/(yj))), a finite sum: only
// 1/(2y) < j < 1/y or |z| < yj < 2|z| contribute. Rejects y <= 0.
double h_eval(const KernelProfile& profile, double y, double z);

// \int omega0(x) e(-tx) dx; real since omega0 is even.
double omega0_hat(const KernelProfile& profile, double t);

}  // namespace delta2d
