#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/quadpair.hpp"

namespace delta2d {

// Smooth compactly supported weight; either a product of identical
// per-coordinate plateau bumps (value 1 on [-a, a], support (-b, b)) or a
// general callable with a declared support box.
class WeightFunction {
 public:
  static WeightFunction plateau_product(int dims, double plateau = 0.5, double support = 1.0);
  static WeightFunction general(int dims, std::function<double(const Eigen::VectorXd&)> f,
                                double box_halfwidth);

  int dims() const { return dims_; }
  bool product_form() const { return product_; }
  double support_halfwidth() const { return support_; }
  double plateau_halfwidth() const { return plateau_; }

  double eval1d(double x) const;  // product path only
  double operator()(const Eigen::VectorXd& x) const;

 private:
  int dims_ = 0;
  bool product_ = true;
  double plateau_ = 0.5, support_ = 1.0;
  std::function<double(const Eigen::VectorXd&)> f_;
};

// I_q(w, u) = P^s \int w(x/P) e(w.F(x)) e_q(-x.u) dx
//           = P^s \int w(x) e(P^2 w.F(x)) e(-P x.u / q) dx.
// Product path: diagonal pair with a product weight (any s); general path:
// tensor quadrature, s <= 4 only.
cplx iq(const QuadraticPair& pair, const WeightFunction& weight, i64 q,
        const Eigen::Vector2d& w, const VecZ& u, double P);

// J(w) = \int w(x) e(w.F(x)) dx (the q-free, P = 1 integral).
cplx j_of_w(const QuadraticPair& pair, const WeightFunction& weight, const Eigen::Vector2d& w);

// Spline-cached J for diagonal pairs with product weights, plus disk
// integrals \int_{|w| < R} J(w) dw (real; the imaginary part is tracked).
class DiagonalJEngine {
 public:
  DiagonalJEngine(const QuadraticPair& pair, const WeightFunction& weight);
  cplx j(const Eigen::Vector2d& w) const;
  // polar quadrature over the disk |w| < R
  cplx disk_integral(double R) const;

 private:
  cplx i1_spline(double gamma) const;
  void ensure_gamma(double gmax) const;

  const QuadraticPair* pair_;
  WeightFunction weight_;
  std::vector<std::pair<double, double>> coef_;  // (m1_j, m2_j) per coordinate
  double rate_;                                  // max_j |(m1_j, m2_j)|
  mutable std::vector<cplx> i1_;                 // I1 on gamma >= 0 grid
  mutable double gstep_ = 0.0, gmax_ = 0.0;
};

struct SingularIntegralResult {
  double value = 0.0;
  double tail_bound = 0.0;
  double w_max = 0.0;
  double envelope_c = 0.0;  // recorded constant in |J| <= C (1+|w|)^{-(s-1)/2}
  double imag_abs = 0.0;
};

// \int_{R^2} J(w) dw for s >= 6, adaptively extending the disk until the
// envelope tail bound drops below tol (hard cap 2^10).
SingularIntegralResult singular_integral(const QuadraticPair& pair, const WeightFunction& weight,
                                         double tol);

}  // namespace delta2d
