#include "delta2d/deltasym.hpp"

#include <cmath>

#include "delta2d/expsum.hpp"
#include "delta2d/parallel.hpp"
#include "delta2d/quadrature.hpp"

namespace delta2d {

ArcGeometry::ArcGeometry(double Q, int jobs) : q_real_(Q), qmax_(i64(std::floor(Q))) {
  if (!(Q >= 4.0)) throw validation_error("arc geometry: Q >= 4 required");
  const double sq = std::sqrt(Q);
  per_q_.resize(size_t(qmax_) + 1);
  auto rows = parallel_map<std::vector<ClassData>>(qmax_, jobs, [&](long long idx) {
    i64 q = idx + 1;
    std::vector<ClassData> row;
    for (const Vec2i& rep : residue_class_reps(q)) {
      ClassData cd;
      cd.lattice = lattice_from(rep, q);
      cd.points = annulus_points(cd.lattice, sq / 2.0, sq);
      cd.k.reserve(cd.points.size());
      cd.weight.reserve(cd.points.size());
      for (const Vec2i& r : cd.points) {
        i64 ct = r.content();
        cd.k.push_back(ct / std::gcd(ct, q));
        cd.weight.push_back(r.norm() / sq);
      }
      row.push_back(std::move(cd));
    }
    return row;
  });
  for (i64 q = 1; q <= qmax_; ++q) per_q_[size_t(q)] = std::move(rows[size_t(q - 1)]);
}

namespace {

struct QContribution {
  double real = 0.0;
  double imag_abs = 0.0;
  i64 terms = 0;
};

// sum over units lambda mod q of e_q(lambda * m), via the root table.
cplx class_char_sum(const RootsOfUnity& rou, i64 q, i64 m) {
  cplx acc{0.0, 0.0};
  for (i64 lam = 1; lam <= q; ++lam) {
    if (std::gcd(lam, q) != 1) continue;
    acc += rou(mulmod(lam, mod_pos(m, q), q));
  }
  return acc;
}

}  // namespace

DualityEvaluator::DualityEvaluator(const KernelProfile& profile, double Q, int jobs)
    : profile_(profile), geom_(Q, jobs), jobs_(jobs) {}

DeltaReport DualityEvaluator::eval(const Vec2i& n) const {
  const double Q = geom_.Q();
  const double sq = std::sqrt(Q);
  const double q32 = std::pow(Q, 1.5);
  const double c = profile_.c;
  const double w0n = profile_.omega0(n.norm() / q32);

  auto per_q = parallel_map<QContribution>(geom_.qmax(), jobs_, [&](long long idx) {
    i64 q = idx + 1;
    QContribution out;
    if (w0n == 0.0) return out;
    auto rou = RootsOfUnity::get(q);
    for (const auto& cd : geom_.classes(q)) {
      double rsum = 0.0;
      for (size_t i = 0; i < cd.points.size(); ++i) {
        const Vec2i& r = cd.points[i];
        double y = double(cd.k[i]) * double(q) / Q;
        rsum += profile_.omega(cd.weight[i]) *
                h_eval(profile_, y, double(r.dot(n)) / (Q * Q));
      }
      out.terms += i64(cd.points.size());
      if (rsum == 0.0) continue;
      cplx ch = class_char_sum(*rou, q, cd.lattice.a.dot(n));
      out.terms += euler_phi(q);
      out.real += rsum * ch.real();
      out.imag_abs += std::abs(rsum * ch.imag());
    }
    out.real *= c / (Q * Q * Q) * w0n;
    out.imag_abs *= c / (Q * Q * Q) * w0n;
    return out;
  });

  DeltaReport rep;
  rep.n = n;
  rep.Q = Q;
  quad::Neumaier total;
  for (i64 q = 1; q <= geom_.qmax(); ++q) {
    const auto& qc = per_q[size_t(q - 1)];
    total.add(qc.real);
    rep.per_q.emplace_back(q, qc.real);
    rep.imag_abs += qc.imag_abs;
    rep.term_count += qc.terms;
  }
  if (!n.is_zero()) {
    double nn = n.norm();
    double dsum = 0.0;
    for (i64 dp : divisors(n.content())) dsum += profile_.omega(nn / (double(dp) * sq));
    total.add(-c / Q * w0n * dsum);
  }
  rep.value = total.value();
  rep.residual = std::abs(rep.value - (n.is_zero() ? 1.0 : 0.0));
  return rep;
}

DeltaReport duality_rhs(const KernelProfile& profile, const Vec2i& n, double Q, int jobs) {
  return DualityEvaluator(profile, Q, jobs).eval(n);
}

DeltaReport delta_decomposition(const PContext& ctx, const Vec2i& n, double Q, DeltaMode mode,
                                CharMode char_mode, int jobs) {
  if (!(Q >= 4.0)) throw validation_error("delta_decomposition: Q >= 4 required");
  if (mode == DeltaMode::quadrature && Q > 64.0)
    throw budget_error("delta_decomposition: quadrature mode limited to Q <= 64");
  PContext c2 = ctx;
  c2.Q = Q;
  ArcGeometry geom(Q, jobs);

  auto per_q = parallel_map<QContribution>(geom.qmax(), jobs, [&](long long idx) {
    i64 q = idx + 1;
    QContribution out;
    auto rou = RootsOfUnity::get(q);
    double p1term = (mode == DeltaMode::closed_form)
                        ? p1_fourier_pair(c2, q, n)
                        : p1_fourier_quad(c2, q, n, 0.0, p1_trunc_radius(c2, q));
    for (const auto& cd : geom.classes(q)) {
      double rsum = 0.0;
      for (size_t i = 0; i < cd.points.size(); ++i) {
        const Vec2i& r = cd.points[i];
        double p2term;
        if (mode == DeltaMode::closed_form) {
          p2term = p2_fourier_pair(c2, r, cd.k[i], q, n);
        } else {
          double ah, bh;
          p2_trunc_halfwidths(c2, r, cd.k[i], q, ah, bh);
          p2term = p2_fourier_quad(c2, r, cd.k[i], q, n, ah, bh);
        }
        rsum += ctx.profile.omega(cd.weight[i]) * p2term;
      }
      out.terms += i64(cd.points.size());
      double cls = rsum + p1term;
      if (cls == 0.0) continue;
      cplx ch;
      if (char_mode == CharMode::direct) {
        ch = class_char_sum(*rou, q, cd.lattice.a.dot(n));
        out.terms += euler_phi(q);
      } else {
        ch = cplx(double(ramanujan_sum(q, cd.lattice.a.dot(n))), 0.0);
        out.terms += 1;
      }
      out.real += cls * ch.real();
      out.imag_abs += std::abs(cls * ch.imag());
    }
    return out;
  });

  DeltaReport rep;
  rep.n = n;
  rep.Q = Q;
  quad::Neumaier total;
  for (i64 q = 1; q <= geom.qmax(); ++q) {
    const auto& qc = per_q[size_t(q - 1)];
    total.add(qc.real);
    rep.per_q.emplace_back(q, qc.real);
    rep.imag_abs += qc.imag_abs;
    rep.term_count += qc.terms;
  }
  rep.value = total.value();
  rep.residual = std::abs(rep.value - (n.is_zero() ? 1.0 : 0.0));
  return rep;
}

std::vector<ArcPoint> arc_partition(double Q, double delta_param) {
  if (!(Q >= 4.0)) throw validation_error("arc_partition: Q >= 4 required");
  if (!(delta_param > 0.0 && delta_param < 0.25))
    throw validation_error("arc_partition: delta in (0, 1/4) required");
  const double major_q_cut = std::pow(Q, 0.5 - delta_param);
  std::vector<ArcPoint> arcs;
  for (i64 q = 1; q <= i64(std::floor(Q)); ++q) {
    double minor_outer = std::pow(Q, -0.5 + delta_param) / double(q);
    double major_radius = std::pow(Q, -1.0 - delta_param) / double(q);
    bool has_major = double(q) < major_q_cut;
    for (i64 x = 0; x < q; ++x)
      for (i64 y = 0; y < q; ++y) {
        if (std::gcd(std::gcd(x, y), q) != 1) continue;
        Vec2i a{x, y};
        if (has_major) {
          arcs.push_back({q, a, ArcKind::major, delta_param, 0.0, major_radius});
          arcs.push_back({q, a, ArcKind::minor, delta_param, major_radius, minor_outer});
        } else {
          arcs.push_back({q, a, ArcKind::minor, delta_param, 0.0, minor_outer});
        }
      }
  }
  return arcs;
}

double heuristic_efficacy(double Q, double A, int s) {
  if (!(Q >= 1.0 && A >= 1.0)) throw validation_error("heuristic_efficacy: Q, A >= 1 required");
  return std::pow(Q, 0.5 * s) / std::sqrt(A);
}

}  // namespace delta2d
