#pragma once

#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/kernels.hpp"
#include "delta2d/lattice.hpp"
#include "delta2d/pfunc.hpp"

namespace delta2d {

enum class ArcKind { major, minor };

struct ArcPoint {
  i64 q = 1;
  Vec2i a;  // primitive residue reduced to [0,q)^2
  ArcKind kind = ArcKind::minor;
  double delta_param = 0.0;
  double inner_radius = 0.0;  // arc window in |w|: [inner, outer)
  double outer_radius = 0.0;
};

struct DeltaReport {
  Vec2i n;
  double Q = 0.0;
  double value = 0.0;
  double residual = 0.0;  // |value - [n = 0]|
  std::vector<std::pair<i64, double>> per_q;
  double imag_abs = 0.0;  // accumulated imaginary part of the character sums
  i64 term_count = 0;
};

// Per-Q geometry shared across evaluations: one lattice per residue class
// of each q <= Q, with its annulus points and their k = content/gcd factors.
class ArcGeometry {
 public:
  ArcGeometry(double Q, int jobs = 1);

  struct ClassData {
    Lattice2D lattice;
    std::vector<Vec2i> points;  // annulus sqrt(Q)/2 < |r| < sqrt(Q)
    std::vector<i64> k;         // content(r)/gcd(content(r), q)
    std::vector<double> weight;  // omega-ready |r|/sqrt(Q) (filled by callers)
  };

  double Q() const { return q_real_; }
  i64 qmax() const { return qmax_; }
  const std::vector<ClassData>& classes(i64 q) const { return per_q_[size_t(q)]; }

 private:
  double q_real_;
  i64 qmax_;
  std::vector<std::vector<ClassData>> per_q_;
};

// Right side of the duality identity, carrying the omega0(|n|/Q^{3/2})
// smooth weight on every term so that the closed-form decomposition is an
// exact rearrangement.
class DualityEvaluator {
 public:
  DualityEvaluator(const KernelProfile& profile, double Q, int jobs = 1);
  DeltaReport eval(const Vec2i& n) const;
  const ArcGeometry& geometry() const { return geom_; }

 private:
  KernelProfile profile_;
  ArcGeometry geom_;
  int jobs_;
};

DeltaReport duality_rhs(const KernelProfile& profile, const Vec2i& n, double Q, int jobs = 1);

enum class DeltaMode { closed_form, quadrature };
enum class CharMode { direct, ramanujan };

// Arc-decomposed delta symbol. closed_form uses the exact Fourier pairs and
// equals duality_rhs up to reordering; quadrature replaces them by truncated
// numeric integrals of p1/p2 against e(w.n) (Q <= 64 only).
DeltaReport delta_decomposition(const PContext& ctx, const Vec2i& n, double Q, DeltaMode mode,
                                CharMode char_mode = CharMode::direct, int jobs = 1);

// Every (q, a) with q <= Q, gcd(a, q) = 1; major arcs exist for
// q < Q^{1/2-delta} and every major point also carries its minor annulus.
std::vector<ArcPoint> arc_partition(double Q, double delta_param);

// Q^{s/2} A^{-1/2}.
double heuristic_efficacy(double Q, double A, int s);

}  // namespace delta2d
