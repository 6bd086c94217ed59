#include "delta2d/oscint.hpp"

#include <cmath>

#include "delta2d/quadrature.hpp"

namespace delta2d {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double transition(double t) {
  // smooth 0 -> 1 on [0, 1]
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// 1D oscillatory integral \int pl(x) e(c2 x^2 + c1 x) dx over (-b, b),
// panels sized by the peak local phase derivative.
cplx plateau_quad_phase(const WeightFunction& w, double c2, double c1) {
  double b = w.support_halfwidth();
  double rate = 2.0 * std::abs(c2) * b + std::abs(c1);
  double panel = quad::osc_panel_width(b / 8.0, rate);
  if (2.0 * b / panel > 2e6) throw budget_error("oscillatory 1D panel budget exceeded");
  return quad::integrate_c(
      [&](double x) { return w.eval1d(x) * quad::unit_e(c2 * x * x + c1 * x); }, -b, b, panel);
}

}  // namespace

WeightFunction WeightFunction::plateau_product(int dims, double plateau, double support) {
  if (dims < 1 || !(plateau > 0.0) || !(support > plateau))
    throw validation_error("plateau weight: need 0 < plateau < support");
  WeightFunction w;
  w.dims_ = dims;
  w.product_ = true;
  w.plateau_ = plateau;
  w.support_ = support;
  return w;
}

WeightFunction WeightFunction::general(int dims, std::function<double(const Eigen::VectorXd&)> f,
                                       double box_halfwidth) {
  if (dims < 1 || !(box_halfwidth > 0.0)) throw validation_error("general weight: bad arguments");
  WeightFunction w;
  w.dims_ = dims;
  w.product_ = false;
  w.support_ = box_halfwidth;
  w.plateau_ = 0.0;
  w.f_ = std::move(f);
  return w;
}

double WeightFunction::eval1d(double x) const {
  if (!product_) throw validation_error("eval1d: product weight required");
  double ax = std::abs(x);
  if (ax >= support_) return 0.0;
  if (ax <= plateau_) return 1.0;
  return transition((support_ - ax) / (support_ - plateau_));
}

double WeightFunction::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != dims_) throw validation_error("weight: dimension mismatch");
  if (product_) {
    double v = 1.0;
    for (int i = 0; i < dims_; ++i) {
      v *= eval1d(x(i));
      if (v == 0.0) return 0.0;
    }
    return v;
  }
  for (int i = 0; i < dims_; ++i)
    if (std::abs(x(i)) >= support_) return 0.0;
  return f_(x);
}

cplx iq(const QuadraticPair& pair, const WeightFunction& weight, i64 q,
        const Eigen::Vector2d& w, const VecZ& u, double P) {
  if (weight.dims() != pair.s()) throw validation_error("iq: weight dimension mismatch");
  if (q < 1) throw validation_error("iq: q >= 1 required");
  const int s = pair.s();
  const double ps = std::pow(P, s);
  if (pair.diagonal() && weight.product_form()) {
    cplx prod{1.0, 0.0};
    for (int j = 0; j < s; ++j) {
      double gamma = w(0) * double(pair.h1()(j, j) / 2) + w(1) * double(pair.h2()(j, j) / 2);
      prod *= plateau_quad_phase(weight, P * P * gamma, -P * double(u(j)) / double(q));
      if (prod == cplx{0.0, 0.0}) break;
    }
    return ps * prod;
  }
  if (s > 4)
    throw budget_error("iq: general path limited to s <= 4 (use a diagonal pair beyond)");
  // tensor quadrature; panel width from the per-axis peak phase rate
  const double b = weight.support_halfwidth();
  double maxh = 0.0;
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j)
      maxh = std::max(maxh, std::abs(w(0) * double(pair.h1()(i, j)) + w(1) * double(pair.h2()(i, j))));
  double rate = P * P * maxh * b * s + P * double(u.cwiseAbs().maxCoeff()) / double(q);
  double panel = quad::osc_panel_width(b / 6.0, rate);
  if (std::pow(2.0 * b / panel * 16.0, s) > 5e8) throw budget_error("iq: tensor budget exceeded");

  Eigen::VectorXd x(s);
  std::function<cplx(int)> rec = [&](int dim) -> cplx {
    if (dim == s) {
      double wval = weight(x);
      if (wval == 0.0) return {0.0, 0.0};
      double f1 = 0.0, f2 = 0.0;
      for (int i = 0; i < s; ++i) {
        f1 += 0.5 * double(pair.h1()(i, i)) * x(i) * x(i);
        f2 += 0.5 * double(pair.h2()(i, i)) * x(i) * x(i);
        for (int j = i + 1; j < s; ++j) {
          f1 += double(pair.h1()(i, j)) * x(i) * x(j);
          f2 += double(pair.h2()(i, j)) * x(i) * x(j);
        }
      }
      double phase = P * P * (w(0) * f1 + w(1) * f2);
      for (int i = 0; i < s; ++i) phase -= P * x(i) * double(u(i)) / double(q);
      return wval * quad::unit_e(phase);
    }
    return quad::integrate_c(
        [&](double t) {
          x(dim) = t;
          return rec(dim + 1);
        },
        -b, b, panel);
  };
  return ps * rec(0);
}

cplx j_of_w(const QuadraticPair& pair, const WeightFunction& weight, const Eigen::Vector2d& w) {
  VecZ u = VecZ::Zero(pair.s());
  return iq(pair, weight, 1, w, u, 1.0);
}

// ---------------------------------------------------------------------------
// DiagonalJEngine
// ---------------------------------------------------------------------------

DiagonalJEngine::DiagonalJEngine(const QuadraticPair& pair, const WeightFunction& weight)
    : pair_(&pair), weight_(weight) {
  if (!pair.diagonal() || !weight.product_form())
    throw validation_error("DiagonalJEngine: diagonal pair with product weight required");
  rate_ = 0.0;
  for (int j = 0; j < pair.s(); ++j) {
    double m1 = double(pair.h1()(j, j) / 2), m2 = double(pair.h2()(j, j) / 2);
    coef_.emplace_back(m1, m2);
    rate_ = std::max(rate_, std::hypot(m1, m2));
  }
  double b = weight_.support_halfwidth();
  gstep_ = 1.0 / (64.0 * b * b);
  ensure_gamma(16.0);
}

void DiagonalJEngine::ensure_gamma(double gmax) const {
  if (gmax <= gmax_ && !i1_.empty()) return;
  size_t need = size_t(std::ceil(gmax / gstep_)) + 4;
  if (need > 4e6) throw budget_error("I1 spline too large");
  size_t old = i1_.size();
  i1_.resize(need);
  for (size_t i = old; i < need; ++i)
    i1_[i] = plateau_quad_phase(weight_, double(i) * gstep_, 0.0);
  gmax_ = double(need - 3) * gstep_;
}

namespace {
cplx catmull_rom_c(cplx vm1, cplx v0, cplx v1, cplx v2, double t) {
  cplx a = 2.0 * v0;
  cplx b = v1 - vm1;
  cplx c = 2.0 * vm1 - 5.0 * v0 + 4.0 * v1 - v2;
  cplx d = -vm1 + 3.0 * v0 - 3.0 * v1 + v2;
  return 0.5 * (a + b * t + c * (t * t) + d * (t * t * t));
}
}  // namespace

cplx DiagonalJEngine::i1_spline(double gamma) const {
  double g = std::abs(gamma);
  ensure_gamma(g + 2.0 * gstep_);
  double x = g / gstep_;
  size_t i = size_t(x);
  double t = x - double(i);
  cplx vm1 = (i == 0) ? std::conj(i1_[1]) : i1_[i - 1];  // I1(-g) = conj(I1(g))
  cplx v = catmull_rom_c(vm1, i1_[i], i1_[i + 1], i1_[i + 2], t);
  return gamma >= 0.0 ? v : std::conj(v);
}

cplx DiagonalJEngine::j(const Eigen::Vector2d& w) const {
  cplx prod{1.0, 0.0};
  for (auto [m1, m2] : coef_) prod *= i1_spline(w(0) * m1 + w(1) * m2);
  return prod;
}

cplx DiagonalJEngine::disk_integral(double R) const {
  if (!(R > 0.0)) return {0.0, 0.0};
  ensure_gamma(R * rate_ + 1.0);
  // radial GL panels x periodic trapezoid in the angle
  double panel_r = quad::osc_panel_width(0.25, 2.0 * rate_);
  int nr = std::max(8, int(std::ceil(R / panel_r)));
  double hr = R / nr;
  quad::Neumaier re, im;
  for (int ir = 0; ir < nr; ++ir) {
    for (int g = 0; g < 8; ++g) {
      for (double sgn : {-1.0, 1.0}) {
        double r = (ir + 0.5) * hr + sgn * 0.5 * hr * quad::kNodes[g];
        int ntheta = std::max(64, int(std::ceil(8.0 * r * rate_)));
        cplx ring{0.0, 0.0};
        for (int it = 0; it < ntheta; ++it) {
          double th = kTwoPi * double(it) / double(ntheta);
          ring += j(Eigen::Vector2d(r * std::cos(th), r * std::sin(th)));
        }
        cplx val = ring * (kTwoPi / double(ntheta)) * r * (quad::kWeights[g] * 0.5 * hr);
        re.add(val.real());
        im.add(val.imag());
      }
    }
  }
  return {re.value(), im.value()};
}

SingularIntegralResult singular_integral(const QuadraticPair& pair, const WeightFunction& weight,
                                         double tol) {
  if (pair.s() < 6) throw validation_error("singular_integral: s >= 6 required");
  if (!(tol > 0.0)) throw validation_error("singular_integral: tol must be positive");
  DiagonalJEngine engine(pair, weight);
  const double m = 0.5 * (pair.s() - 1);

  // envelope |J(w)| <= C (1 + |w|)^{(s-1)/2}, sampled
  double c_env = 0.0;
  for (double r : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
    for (int it = 0; it < 16; ++it) {
      double th = kTwoPi * (it + 0.37) / 16.0;
      double jv = std::abs(engine.j(Eigen::Vector2d(r * std::cos(th), r * std::sin(th))));
      c_env = std::max(c_env, jv * std::pow(1.0 + r, m));
    }
  }

  auto tail_at = [&](double R) {
    // 2 pi C \int_R^inf r (1+r)^{-m} dr, exactly
    double t1 = std::pow(1.0 + R, 2.0 - m) / (m - 2.0);
    double t2 = std::pow(1.0 + R, 1.0 - m) / (m - 1.0);
    return kTwoPi * c_env * (t1 - t2);
  };

  SingularIntegralResult out;
  out.envelope_c = c_env;
  double R = 8.0;
  while (tail_at(R) >= tol) {
    R *= 2.0;
    if (R > 1024.0) throw calibration_error("singular_integral: W_max cap reached");
  }
  cplx v = engine.disk_integral(R);
  out.value = v.real();
  out.imag_abs = std::abs(v.imag());
  out.tail_bound = tail_at(R);
  out.w_max = R;
  return out;
}

}  // namespace delta2d
