#pragma once

#include <cmath>

namespace delta2d {

// Abramowitz-Stegun 9.4 polynomial approximations, |error| < 2e-8; an order
// of magnitude faster than the library Bessel functions, which sit inside
// the innermost quadrature loops here.

inline double fast_j0(double x) {
  double ax = std::abs(x);
  if (ax <= 3.0) {
    double t = (ax / 3.0) * (ax / 3.0);
    return 1.0 + t * (-2.2499997 +
                      t * (1.2656208 +
                           t * (-0.3163866 + t * (0.0444479 + t * (-0.0039444 + t * 0.0002100)))));
  }
  double z = 3.0 / ax;
  double f = 0.79788456 +
             z * (-0.00000077 +
                  z * (-0.00552740 +
                       z * (-0.00009512 + z * (0.00137237 + z * (-0.00072805 + z * 0.00014476)))));
  double th = ax - 0.78539816 +
              z * (-0.04166397 +
                   z * (-0.00003954 +
                        z * (0.00262573 + z * (-0.00054125 + z * (-0.00029333 + z * 0.00013558)))));
  return f * std::cos(th) / std::sqrt(ax);
}

inline double fast_j1(double x) {
  double ax = std::abs(x);
  double v;
  if (ax <= 3.0) {
    double t = (ax / 3.0) * (ax / 3.0);
    v = ax * (0.5 + t * (-0.56249985 +
                         t * (0.21093573 +
                              t * (-0.03954289 +
                                   t * (0.00443319 + t * (-0.00031761 + t * 0.00001109))))));
  } else {
    double z = 3.0 / ax;
    double f = 0.79788456 +
               z * (0.00000156 +
                    z * (0.01659667 +
                         z * (0.00017105 + z * (-0.00249511 + z * (0.00113653 - z * 0.00020033)))));
    double th = ax - 2.35619449 +
                z * (0.12499612 +
                     z * (0.00005650 +
                          z * (-0.00637879 + z * (0.00074348 + z * (0.00079824 - z * 0.00029166)))));
    v = f * std::cos(th) / std::sqrt(ax);
  }
  return x < 0.0 ? -v : v;
}

}  // namespace delta2d
