#include "delta2d/pfunc.hpp"

#include <cmath>

#include "delta2d/bessel.hpp"
#include "delta2d/quadrature.hpp"

namespace delta2d {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double bessel_j0(double x) { return fast_j0(x); }

// sin(2 pi h t) / (pi t), the exact integral of e(alpha t) over |alpha| <= h.
double sinc_window(double h, double t) {
  double x = kTwoPi * h * t;
  if (std::abs(x) < 1e-6) return 2.0 * h * (1.0 - x * x / 6.0);
  return std::sin(x) / (M_PI * t);
}

void check_panels(double span, double width) {
  if (span / width > 5e5) throw budget_error("quadrature panel budget exceeded");
}

}  // namespace

PContext make_pcontext(const KernelProfile& profile, double Q, double quad_tol,
                       double trunc_margin) {
  if (!(Q >= 1.0)) throw validation_error("PContext: Q >= 1 required");
  if (!(quad_tol > 0.0) || quad_tol > 1e-4)
    throw validation_error("PContext: quad_tol must lie in (0, 1e-4]");
  if (!(trunc_margin > 0.0)) throw validation_error("PContext: trunc_margin must be positive");
  return PContext{profile, Q, quad_tol, trunc_margin};
}

double p1_radial(const PContext& ctx, i64 q, double t) {
  if (q < 1 || double(q) > ctx.Q) throw validation_error("p1: need 1 <= q <= Q");
  const double Q = ctx.Q, sq = std::sqrt(Q);
  double sum = 0.0;
  for (i64 j = 1; double(j) * double(q) < Q; ++j) {
    double freq = double(q) * double(j) * sq * t;  // J0(2 pi freq r)
    double panel = quad::osc_panel_width(1.0 / 32.0, freq);
    double ij = quad::integrate(
        [&](double r) {
          return r * ctx.profile.omega0(double(j) * double(q) * r / Q) * ctx.profile.omega(r) *
                 bessel_j0(kTwoPi * freq * r);
        },
        0.5, 1.0, panel);
    sum += kTwoPi * ij;
  }
  return -ctx.profile.c * sum;
}

double p1_eval(const PContext& ctx, i64 q, const Eigen::Vector2d& w) {
  return p1_radial(ctx, q, w.norm());
}

double p1_fourier_pair(const PContext& ctx, i64 q, const Vec2i& n) {
  if (q < 1 || double(q) > ctx.Q) throw validation_error("p1: need 1 <= q <= Q");
  const double Q = ctx.Q, sq = std::sqrt(Q);
  double nn = n.norm();
  double w0f = ctx.profile.omega0(nn / std::pow(Q, 1.5));
  if (w0f == 0.0) return 0.0;
  double lo = nn / (double(q) * sq), hi = 2.0 * nn / (double(q) * sq);
  i64 jlo = std::max<i64>(1, i64(std::floor(lo)));
  i64 jhi = i64(std::ceil(hi)) + 1;
  double sum = 0.0;
  for (i64 j = jlo; j <= jhi; ++j) {
    double denom = double(q) * double(j);
    sum += ctx.profile.omega(nn / (denom * sq)) / (denom * denom);
  }
  return -ctx.profile.c / Q * w0f * sum;
}

double p2_eval_proj(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double w_dot_r,
                    double w_dot_rperp) {
  if (r.is_zero()) throw validation_error("p2: r must be nonzero");
  if (k < 1 || q < 1) throw validation_error("p2: need k, q >= 1");
  const double Q = ctx.Q;
  if (double(k) * double(q) >= Q) return 0.0;  // h support
  const double y = double(k) * double(q) / Q;
  const double r2 = double(r.norm2()), rn = std::sqrt(r2);
  const double q32 = std::pow(Q, 1.5);
  const double Z = q32 / (2.0 * rn);

  const double z1_feature = std::min(Z / 8.0, 0.5 * y * Q * Q / r2);
  const double panel1 = quad::osc_panel_width(z1_feature, w_dot_r);
  const double panel2 = quad::osc_panel_width(Z / 8.0, w_dot_rperp);
  check_panels(Z, panel1);
  check_panels(Z, panel2);

  auto f2 = [&](double z1) {
    double zmax = std::sqrt(std::max(0.0, Z * Z - z1 * z1));
    if (zmax <= 0.0) return 0.0;
    return 2.0 * quad::integrate(
                     [&](double z2) {
                       return ctx.profile.omega0(rn * std::hypot(z1, z2) / q32) *
                              std::cos(kTwoPi * w_dot_rperp * z2);
                     },
                     0.0, zmax, panel2);
  };
  double val = 2.0 * quad::integrate(
                   [&](double z1) {
                     return h_eval(ctx.profile, y, z1 * r2 / (Q * Q)) * f2(z1) *
                            std::cos(kTwoPi * w_dot_r * z1);
                   },
                   0.0, Z, panel1);
  return ctx.profile.c * r2 / (Q * Q * Q) * val;
}

double p2_eval(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Eigen::Vector2d& w) {
  double wr = w(0) * double(r.x) + w(1) * double(r.y);
  double wrp = w(0) * double(r.y) - w(1) * double(r.x);
  return p2_eval_proj(ctx, r, k, q, wr, wrp);
}

double p2_fourier_pair(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n) {
  if (r.is_zero()) throw validation_error("p2: r must be nonzero");
  if (k < 1 || q < 1) throw validation_error("p2: need k, q >= 1");
  const double Q = ctx.Q;
  double w0f = ctx.profile.omega0(n.norm() / std::pow(Q, 1.5));
  if (w0f == 0.0) return 0.0;
  double z = double(r.dot(n)) / (Q * Q);
  return ctx.profile.c / (Q * Q * Q) * w0f * h_eval(ctx.profile, double(k) * double(q) / Q, z);
}

double p_lambda(const PContext& ctx, const Lattice2D& lattice, const Eigen::Vector2d& w) {
  if (double(lattice.q) > ctx.Q) throw validation_error("p_lambda: q <= Q required");
  const double sq = std::sqrt(ctx.Q);
  double val = p1_radial(ctx, lattice.q, w.norm());
  for (const Vec2i& r : annulus_points(lattice, sq / 2.0, sq)) {
    i64 ct = r.content();
    i64 k = ct / std::gcd(ct, lattice.q);
    double wr = w(0) * double(r.x) + w(1) * double(r.y);
    double wrp = w(0) * double(r.y) - w(1) * double(r.x);
    val += ctx.profile.omega(r.norm() / sq) * p2_eval_proj(ctx, r, k, lattice.q, wr, wrp);
  }
  return val;
}

// ---------------------------------------------------------------------------
// Truncated w-integrals
// ---------------------------------------------------------------------------

double p1_trunc_radius(const PContext& ctx, i64 q) {
  // (1 + |w| q sqrt(Q))^{-N} decay: keep trunc_margin decay lengths
  return ctx.trunc_margin / (double(q) * std::sqrt(ctx.Q));
}

void p2_trunc_halfwidths(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double& a_half,
                         double& b_half) {
  double rn = r.norm();
  a_half = ctx.trunc_margin / (double(k) * double(q) * std::sqrt(ctx.Q)) * rn;  // in w.r units
  b_half = ctx.trunc_margin / ctx.Q * rn;                                       // in w.perp(r) units
}

double p1_fourier_quad(const PContext& ctx, i64 q, const Vec2i& n, double t_lo, double t_hi) {
  double nn = n.norm();
  // 2 pi int t p1(t) J0(2 pi |n| t) dt over the radial window
  double feature = 1.0 / (8.0 * std::pow(ctx.Q, 1.5));
  double panel = quad::osc_panel_width(std::max(feature, (t_hi - t_lo) / 64.0), nn);
  check_panels(t_hi - t_lo, panel);
  return kTwoPi * quad::integrate(
                      [&](double t) { return t * p1_radial(ctx, q, t) * bessel_j0(kTwoPi * nn * t); },
                      t_lo, t_hi, panel);
}

double p2_fourier_quad(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n,
                       double a_half, double b_half) {
  if (r.is_zero()) throw validation_error("p2: r must be nonzero");
  const double Q = ctx.Q;
  if (double(k) * double(q) >= Q) return 0.0;
  const double y = double(k) * double(q) / Q;
  const double r2 = double(r.norm2()), rn = std::sqrt(r2);
  const double q32 = std::pow(Q, 1.5);
  const double Z = q32 / (2.0 * rn);
  // w = alpha rhat + beta rhat_perp; window |alpha| <= A, |beta| <= B.
  const double A = a_half / rn, B = b_half / rn;
  const double at = double(r.dot(n)) / rn;        // alpha-frequency from e(w.n)
  const double bt = double(r.perp().dot(n)) / rn; // beta-frequency
  // alpha and beta integrate exactly to sinc windows; z-quadrature remains.
  const double z1_feature = std::min(Z / 8.0, 0.5 * y * Q * Q / r2);
  const double panel1 = quad::osc_panel_width(z1_feature, A * rn);
  const double panel2 = quad::osc_panel_width(Z / 8.0, B * rn);
  check_panels(2.0 * Z, panel1);
  check_panels(2.0 * Z, panel2);

  auto g2 = [&](double z1) {
    double zmax = std::sqrt(std::max(0.0, Z * Z - z1 * z1));
    if (zmax <= 0.0) return 0.0;
    return quad::integrate(
        [&](double z2) {
          return ctx.profile.omega0(rn * std::hypot(z1, z2) / q32) *
                 sinc_window(B, bt - rn * z2);
        },
        -zmax, zmax, panel2);
  };
  double val = quad::integrate(
      [&](double z1) {
        return h_eval(ctx.profile, y, z1 * r2 / (Q * Q)) * g2(z1) * sinc_window(A, at - rn * z1);
      },
      -Z, Z, panel1);
  return ctx.profile.c * r2 / (Q * Q * Q) * val;
}

double p2_fourier_quad_literal(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n,
                               double a_half, double b_half) {
  const double rn = r.norm();
  const double A = a_half / rn, B = b_half / rn;
  const double at = double(r.dot(n)) / rn;
  const double bt = double(r.perp().dot(n)) / rn;
  const double Z = std::pow(ctx.Q, 1.5) / (2.0 * rn);
  double panel_a = quad::osc_panel_width(1.0 / (2.0 * rn * Z), std::abs(at));
  double panel_b = quad::osc_panel_width(1.0 / (2.0 * rn * Z), std::abs(bt));
  check_panels(2.0 * A, panel_a);
  check_panels(2.0 * B, panel_b);
  // real part only: the sin component cancels under (alpha, beta) -> -(alpha, beta)
  auto inner = [&](double alpha) {
    auto fb = [&](double beta) {
      double p2 = p2_eval_proj(ctx, r, k, q, alpha * rn, beta * rn);
      return p2 * std::cos(kTwoPi * (alpha * at + beta * bt));
    };
    return quad::integrate(fb, -B, B, panel_b);
  };
  return quad::integrate(inner, -A, A, panel_a);
}

// ---------------------------------------------------------------------------
// Tables
// ---------------------------------------------------------------------------

namespace {

double catmull_rom(double vm1, double v0, double v1, double v2, double t) {
  double a = 2.0 * v0;
  double b = v1 - vm1;
  double c = 2.0 * vm1 - 5.0 * v0 + 4.0 * v1 - v2;
  double d = -vm1 + 3.0 * v0 - 3.0 * v1 + v2;
  return 0.5 * (a + b * t + c * t * t + d * t * t * t);
}

}  // namespace

P1Radial::P1Radial(const PContext& ctx, i64 q, double tmax) : tmax_(tmax) {
  step_ = 1.0 / (8.0 * std::pow(ctx.Q, 1.5));
  int n = int(std::ceil(tmax / step_)) + 1;
  if (n > 2000000) throw budget_error("P1Radial table too large");
  vals_.resize(n + 3);
  for (int i = 0; i < n + 3; ++i) vals_[i] = p1_radial(ctx, q, double(i) * step_);
}

double P1Radial::operator()(double t) const {
  t = std::abs(t);
  if (t >= tmax_) return 0.0;
  double x = t / step_;
  int i = int(x);
  double fr = x - i;
  double vm1 = (i == 0) ? vals_[1] : vals_[i - 1];  // even extension at 0
  return catmull_rom(vm1, vals_[i], vals_[i + 1], vals_[i + 2], fr);
}

P2Grid::P2Grid(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double wr_max, double wrp_max)
    : a_(wr_max), b_(wrp_max) {
  const double Q = ctx.Q;
  const double r2 = double(r.norm2()), rn = std::sqrt(r2);
  const double q32 = std::pow(Q, 1.5);
  const double Z = q32 / (2.0 * rn);
  dx_ = 1.0 / (8.0 * Z);
  dy_ = 1.0 / (8.0 * Z);
  nx_ = int(std::ceil(a_ / dx_)) + 1;
  ny_ = int(std::ceil(b_ / dy_)) + 1;
  if (double(2 * nx_ + 1) * double(2 * ny_ + 1) > 4e7) throw budget_error("P2Grid too large");
  vals_.assign(size_t(2 * nx_ + 1) * (2 * ny_ + 1), 0.0);
  if (double(k) * double(q) >= Q) return;  // identically zero
  const double y = double(k) * double(q) / Q;

  // z1 quadrature points shared by a whole row (fixed w.perp(r))
  const double z1_feature = std::min(Z / 8.0, 0.5 * y * Q * Q / r2);
  const double panel1 = quad::osc_panel_width(z1_feature, a_);
  int np1 = std::max(1, int(std::ceil(Z / panel1)));
  double h1 = Z / np1;
  std::vector<double> z1s, w1s, hvals;
  for (int i = 0; i < np1; ++i) {
    double mid = (i + 0.5) * h1, half = 0.5 * h1;
    for (int g = 0; g < 8; ++g) {
      for (double sgn : {-1.0, 1.0}) {
        double z1 = mid + sgn * half * quad::kNodes[g];
        z1s.push_back(z1);
        w1s.push_back(quad::kWeights[g] * half);
      }
    }
  }
  hvals.resize(z1s.size());
  for (size_t i = 0; i < z1s.size(); ++i)
    hvals[i] = h_eval(ctx.profile, y, z1s[i] * r2 / (Q * Q));

  const double panel2 = quad::osc_panel_width(Z / 8.0, b_);
  for (int iy = -ny_; iy <= ny_; ++iy) {
    double wrp = iy * dy_;
    std::vector<double> f2(z1s.size());
    for (size_t i = 0; i < z1s.size(); ++i) {
      double z1 = z1s[i];
      double zmax = std::sqrt(std::max(0.0, Z * Z - z1 * z1));
      f2[i] = (zmax <= 0.0) ? 0.0
                            : 2.0 * quad::integrate(
                                        [&](double z2) {
                                          return ctx.profile.omega0(rn * std::hypot(z1, z2) / q32) *
                                                 std::cos(kTwoPi * wrp * z2);
                                        },
                                        0.0, zmax, panel2);
    }
    for (int ix = -nx_; ix <= nx_; ++ix) {
      double wr = ix * dx_;
      double acc = 0.0;
      for (size_t i = 0; i < z1s.size(); ++i)
        acc += w1s[i] * hvals[i] * f2[i] * std::cos(kTwoPi * wr * z1s[i]);
      vals_[size_t(iy + ny_) * (2 * nx_ + 1) + (ix + nx_)] =
          ctx.profile.c * r2 / (Q * Q * Q) * 2.0 * acc;
    }
  }
}

double P2Grid::eval(double wr, double wrp) const {
  if (std::abs(wr) > a_ || std::abs(wrp) > b_) return 0.0;
  double x = wr / dx_ + nx_, ypos = wrp / dy_ + ny_;
  int i = std::clamp(int(std::floor(x)), 1, 2 * nx_ - 2);
  int j = std::clamp(int(std::floor(ypos)), 1, 2 * ny_ - 2);
  double tx = x - i, ty = ypos - j;
  const int w = 2 * nx_ + 1;
  double rows[4];
  for (int dj = -1; dj <= 2; ++dj) {
    const double* row = &vals_[size_t(j + dj) * w];
    rows[dj + 1] = catmull_rom(row[i - 1], row[i], row[i + 1], row[i + 2], tx);
  }
  return catmull_rom(rows[0], rows[1], rows[2], rows[3], ty);
}

}  // namespace delta2d
