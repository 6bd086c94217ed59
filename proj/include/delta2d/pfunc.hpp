#pragma once

#include <Eigen/Core>
#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/kernels.hpp"
#include "delta2d/lattice.hpp"

namespace delta2d {

struct PContext {
  KernelProfile profile;
  double Q = 1.0;
  double quad_tol = 1e-6;
  double trunc_margin = 12.0;  // decay lengths kept in truncated w-integrals
};

PContext make_pcontext(const KernelProfile& profile, double Q, double quad_tol = 1e-6,
                       double trunc_margin = 12.0);

// p_{1,q}(w) = -c sum_j \int w0(jq|x|/Q) w(|x|) e(-qj sqrt(Q) w.x) dx.
// Radial, so it depends on w only through |w|.
double p1_eval(const PContext& ctx, i64 q, const Eigen::Vector2d& w);
double p1_radial(const PContext& ctx, i64 q, double wnorm);

// Exact Fourier pair: \int p_{1,q}(w) e(w.n) dw
//   = -(c/Q) w0(|n|/Q^{3/2}) sum_j (qj)^{-2} w(|n|/(jq sqrt(Q))).
double p1_fourier_pair(const PContext& ctx, i64 q, const Vec2i& n);

// p_{2,r,k,q}(w) in the (z1, z2) frame of r; depends on w only through
// (w.r, w.perp(r)). Zero when kq >= Q. Rejects r = 0.
double p2_eval(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Eigen::Vector2d& w);
double p2_eval_proj(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double w_dot_r,
                    double w_dot_rperp);

// Exact Fourier pair: (c/Q^3) w0(|n|/Q^{3/2}) h(kq/Q, r.n/Q^2).
double p2_fourier_pair(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n);

// p_Lambda(w) = p_{1,q}(w) + sum over lattice points in the open annulus
// (sqrt(Q)/2, sqrt(Q)) of w(|r|/sqrt(Q)) p_{2,r,k,q}(w), k = content(r)/gcd(content(r), q).
double p_lambda(const PContext& ctx, const Lattice2D& lattice, const Eigen::Vector2d& w);

// --- truncated numeric w-integrals (the quadrature route) ---

// \int_{T_lo <= |w| < T_hi} p_{1,q}(w) e(w.n) dw, radial Bessel form.
double p1_fourier_quad(const PContext& ctx, i64 q, const Vec2i& n, double t_lo, double t_hi);

// \int p_{2,r,k,q}(w) e(w.n) dw over the rectangle |w.r/|r|| <= A,
// |w.perp(r)/|r|| <= B in the rotated frame; the w-integral is carried out
// exactly per panel (sinc kernels), the z-integral numerically.
double p2_fourier_quad(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n,
                       double a_half, double b_half);

// Literal nested version (w-quadrature times p2_eval); slow, used to
// validate the sinc route.
double p2_fourier_quad_literal(const PContext& ctx, const Vec2i& r, i64 k, i64 q, const Vec2i& n,
                               double a_half, double b_half);

// Default truncation half-widths from the decay envelopes.
double p1_trunc_radius(const PContext& ctx, i64 q);
void p2_trunc_halfwidths(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double& a_half,
                         double& b_half);

// Cubic-interpolated table of p_{1,q}(|w|) on [0, tmax].
class P1Radial {
 public:
  P1Radial(const PContext& ctx, i64 q, double tmax);
  double operator()(double t) const;
  double tmax() const { return tmax_; }

 private:
  double tmax_, step_;
  std::vector<double> vals_;
};

// Catmull-Rom table of p2 over (w.r, w.perp(r)) in [-a, a] x [-b, b].
class P2Grid {
 public:
  P2Grid(const PContext& ctx, const Vec2i& r, i64 k, i64 q, double wr_max, double wrp_max);
  double eval(double w_dot_r, double w_dot_rperp) const;  // 0 outside the box

 private:
  double a_, b_, dx_, dy_;
  int nx_, ny_;
  std::vector<double> vals_;  // (2nx+1) x (2ny+1), row-major in x
};

}  // namespace delta2d
