#include "delta2d/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "delta2d/quadrature.hpp"

namespace delta2d {

namespace {

double omega_bump_raw(double x) {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / ((x - 0.5) * (1.0 - x)));
}

double omega0_exponent(double u) {
  double v = u * u;
  return v * (0.5 - v) / (1.0 - v);
}

double omega0_raw(double x, double t0) {
  if (x <= -0.5 || x >= 0.5) return 0.0;
  return std::exp(t0 * omega0_exponent(2.0 * x));
}

double omega0_integral(double t0) {
  return quad::integrate([t0](double x) { return omega0_raw(x, t0); }, -0.5, 0.5, 1.0 / 128.0);
}

}  // namespace

double KernelProfile::omega(double x) const { return beta * omega_bump_raw(x); }

double KernelProfile::omega0(double x) const { return omega0_raw(x, t0); }

KernelProfile build_kernel_profile(double tol) {
  if (!(tol > 0.0) || tol > 1e-6) throw validation_error("kernel tol must lie in (0, 1e-6]");

  KernelProfile p;
  p.tol = tol;
  double mass = quad::integrate(omega_bump_raw, 0.5, 1.0, 1.0 / 128.0);
  p.beta = 1.0 / mass;
  double rmass = quad::integrate([&](double r) { return r * p.omega(r); }, 0.5, 1.0, 1.0 / 128.0);
  p.c = 1.0 / (2.0 * M_PI * rmass);

  // Solve integral(omega0) = 1: bracket upward from t0 = 1 (integral < 1
  // there), then bisect.
  double lo = 1.0, hi = 0.0;
  int iters = 0;
  if (omega0_integral(lo) >= 1.0) {
    hi = lo;
    while (omega0_integral(lo) >= 1.0) {
      lo *= 0.5;
      if (++iters > 200) throw calibration_error("omega0 shape solve: no lower bracket");
    }
  } else {
    hi = 2.0;
    while (omega0_integral(hi) < 1.0) {
      lo = hi;
      hi *= 2.0;
      if (++iters > 200) throw calibration_error("omega0 shape solve: no upper bracket");
    }
  }
  for (;;) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (omega0_integral(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
    if (++iters > 200) throw calibration_error("omega0 shape solve did not converge");
  }
  p.t0 = 0.5 * (lo + hi);
  return p;
}

double h_eval(const KernelProfile& profile, double y, double z) {
  if (!(y > 0.0)) throw validation_error("h_eval: y must be positive");
  double az = std::abs(z);
  // Support windows for the two omega arguments, with one index of margin;
  // boundary terms evaluate to exact zero either way.
  long j1lo = std::max<long>(1, long(std::floor(0.5 / y)));
  long j1hi = long(std::ceil(1.0 / y)) + 1;
  long j2lo = std::max<long>(1, long(std::floor(az / y)));
  long j2hi = long(std::ceil(2.0 * az / y)) + 1;

  double sum = 0.0;
  auto term = [&](long j) {
    double yj = y * double(j);
    sum += (profile.omega(yj) - profile.omega(az / yj)) / yj;
  };
  // Ascending j throughout, matching a naive full-range sum bit for bit
  // (skipped indices contribute exact zeros).
  if (j2hi < j1lo) {
    for (long j = j2lo; j <= j2hi; ++j) term(j);
    for (long j = j1lo; j <= j1hi; ++j) term(j);
  } else if (j1hi < j2lo) {
    for (long j = j1lo; j <= j1hi; ++j) term(j);
    for (long j = j2lo; j <= j2hi; ++j) term(j);
  } else {
    long lo = std::min(j1lo, j2lo), hi = std::max(j1hi, j2hi);
    for (long j = lo; j <= hi; ++j) term(j);
  }
  return sum;
}

double omega0_hat(const KernelProfile& profile, double t) {
  double panel = quad::osc_panel_width(1.0 / 16.0, t);
  // Even integrand: 2 \int_0^{1/2} omega0(x) cos(2 pi t x) dx.
  return 2.0 * quad::integrate(
                   [&](double x) { return profile.omega0(x) * std::cos(quad::e_phase(t * x)); },
                   0.0, 0.5, panel);
}

}  // namespace delta2d
