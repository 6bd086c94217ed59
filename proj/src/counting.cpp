#include "delta2d/counting.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <unordered_map>

#include "delta2d/bessel.hpp"
#include "delta2d/deltasym.hpp"
#include "delta2d/expsum.hpp"
#include "delta2d/parallel.hpp"
#include "delta2d/pfunc.hpp"
#include "delta2d/quadrature.hpp"

namespace delta2d {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double bessel_j1(double x) { return fast_j1(x); }

// \int_{|w| < R} e(w.n) dw
double disk_ft(double R, double nn) {
  if (nn == 0.0) return M_PI * R * R;
  return R * bessel_j1(kTwoPi * R * nn) / nn;
}

}  // namespace

double count_points_brute(const QuadraticPair& pair, const WeightFunction& weight, double P,
                          double max_points) {
  if (weight.dims() != pair.s()) throw validation_error("count: weight dimension mismatch");
  const int s = pair.s();
  i64 B = i64(std::ceil(P * weight.support_halfwidth()));
  if (std::pow(2.0 * B + 1.0, s) > max_points) throw budget_error("count_points_brute: box over budget");
  VecZ x = VecZ::Constant(s, -B);
  Eigen::VectorXd xs(s);
  quad::Neumaier acc;
  for (;;) {
    if (pair.eval_f1(x) == 0 && pair.eval_f2(x) == 0) {
      for (int i = 0; i < s; ++i) xs(i) = double(x(i)) / P;
      acc.add(weight(xs));
    }
    int pos = 0;
    while (pos < s && ++x(pos) > B) x(pos++) = -B;
    if (pos == s) break;
  }
  return acc.value();
}

double count_points_split(const QuadraticPair& pair, const WeightFunction& weight, double P,
                          double max_points) {
  const int s = pair.s();
  if (s % 2 != 0 || !pair.diagonal())
    throw validation_error("count_points_split: even s and a diagonal pair required");
  if (!weight.product_form()) throw validation_error("count_points_split: product weight required");
  const int h = s / 2;
  i64 B = i64(std::ceil(P * weight.support_halfwidth()));
  if (std::pow(double(B) + 1.0, h) > max_points)
    throw budget_error("count_points_split: half enumeration over budget");

  // per-coordinate weights; even symmetry folds signs into multiplicities
  std::vector<std::vector<double>> wtab(s, std::vector<double>(size_t(B) + 1));
  for (int j = 0; j < s; ++j)
    for (i64 v = 0; v <= B; ++v)
      wtab[j][size_t(v)] = weight.eval1d(double(v) / P) * (v > 0 ? 2.0 : 1.0);

  auto key_bound = [&](int lo, int hi, const MatZ& hmat) {
    i64 m = 0;
    for (int j = lo; j < hi; ++j) m += std::abs(hmat(j, j) / 2) * B * B;
    return m;
  };
  i64 g1max = key_bound(0, h, pair.h1()), g2max = key_bound(0, h, pair.h2());
  i64 stride = 2 * g2max + 1;

  std::unordered_map<i64, double> table;
  table.reserve(1 << 20);
  // first half: accumulate weights keyed by (G1, G2)
  {
    VecZ v = VecZ::Zero(h);
    for (;;) {
      i64 g1 = 0, g2 = 0;
      double wt = 1.0;
      for (int j = 0; j < h; ++j) {
        i64 sq = v(j) * v(j);
        g1 += (pair.h1()(j, j) / 2) * sq;
        g2 += (pair.h2()(j, j) / 2) * sq;
        wt *= wtab[j][size_t(v(j))];
      }
      if (wt != 0.0) table[(g1 + g1max) * stride + (g2 + g2max)] += wt;
      int pos = 0;
      while (pos < h && ++v(pos) > B) v(pos++) = 0;
      if (pos == h) break;
    }
  }
  // second half: sweep and join on -(H1, H2)
  quad::Neumaier acc;
  {
    VecZ v = VecZ::Zero(h);
    for (;;) {
      i64 g1 = 0, g2 = 0;
      double wt = 1.0;
      for (int j = 0; j < h; ++j) {
        i64 sq = v(j) * v(j);
        g1 -= (pair.h1()(h + j, h + j) / 2) * sq;
        g2 -= (pair.h2()(h + j, h + j) / 2) * sq;
        wt *= wtab[h + j][size_t(v(j))];
      }
      if (wt != 0.0 && std::abs(g1) <= g1max && std::abs(g2) <= g2max) {
        auto it = table.find((g1 + g1max) * stride + (g2 + g2max));
        if (it != table.end()) acc.add(it->second * wt);
      }
      int pos = 0;
      while (pos < h && ++v(pos) > B) v(pos++) = 0;
      if (pos == h) break;
    }
  }
  return acc.value();
}

SingularSeriesResult singular_series(const QuadraticPair& pair, i64 q_max, double eps) {
  if (pair.s() < 7) throw validation_error("singular_series: s >= 7 required");
  if (q_max < 1 || !(eps > 0.0)) throw validation_error("singular_series: bad arguments");
  const int s = pair.s();
  VecZ zero = VecZ::Zero(s);
  quad::Neumaier acc;
  double crude = 0.0;
  for (i64 q = 1; q <= q_max; ++q) {
    double dq = dq_fast(pair, q, zero).value.real();
    acc.add(dq / std::pow(double(q), s));
    crude = std::max(crude, std::abs(dq) / std::pow(double(q), 0.5 * s + 2.0 + eps));
  }
  double expo = 0.5 * s - 3.0 - eps;  // tail sum ~ C q_max^{-expo} / expo
  SingularSeriesResult out;
  out.value = acc.value();
  out.crude_bound_c = crude;
  out.tail_bound = crude * std::pow(double(q_max), -expo) / expo;
  out.q_max = q_max;
  return out;
}

double n0_term(const QuadraticPair& pair, const WeightFunction& weight, double P,
               double delta_param, i64 series_q_max) {
  if (pair.s() < 7) throw validation_error("n0_term: s >= 7 required");
  const int s = pair.s();
  const double Q = std::pow(P, 4.0 / 3.0);
  const double qcut = std::pow(Q, 0.5 - delta_param);
  DiagonalJEngine engine(pair, weight);
  VecZ zero = VecZ::Zero(s);
  quad::Neumaier acc;
  for (i64 q = 1; double(q) < qcut; ++q) {
    double dq = dq_fast(pair, q, zero).value.real();
    double jint = engine.disk_integral(qcut / double(q)).real();
    acc.add(dq / std::pow(double(q), s) * jint);
  }
  (void)series_q_max;
  return std::pow(P, s - 4) * acc.value();
}

std::vector<CountReport> end_to_end_report(const QuadraticPair& pair, const WeightFunction& weight,
                                           const std::vector<double>& p_list, double delta_param,
                                           i64 series_q_max) {
  const int s = pair.s();
  if (s < 7) throw validation_error("end_to_end_report: main-term path requires s >= 7");
  SingularSeriesResult ss = singular_series(pair, series_q_max, 0.1);
  SingularIntegralResult si = singular_integral(pair, weight, 0.25);
  std::vector<CountReport> out;
  for (double P : p_list) {
    CountReport rep;
    rep.P = P;
    rep.Q = std::pow(P, 4.0 / 3.0);
    auto t0 = std::chrono::steady_clock::now();
    rep.N_exact = count_points_split(pair, weight, P);
    rep.main_term = ss.value * si.value * std::pow(P, s - 4);
    rep.n0 = n0_term(pair, weight, P, delta_param, series_q_max);
    auto t1 = std::chrono::steady_clock::now();
    rep.ratio_N_main = rep.N_exact / rep.main_term;
    rep.ratio_n0_main = rep.n0 / rep.main_term;
    rep.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    out.push_back(rep);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposition check (s = 3)
// ---------------------------------------------------------------------------

DecompositionResult decomposition_check(const QuadraticPair& pair, const KernelProfile& profile,
                                        const WeightFunction& weight, double P,
                                        double delta_param, int jobs) {
  if (pair.s() != 3) throw validation_error("decomposition_check: s = 3 required");
  if (P > 6.0) throw budget_error("decomposition_check: P <= 6 required");
  const double Q = std::pow(P, 4.0 / 3.0);
  const double sq = std::sqrt(Q);
  const double qcut = std::pow(Q, 0.5 - delta_param);
  PContext ctx = make_pcontext(profile, Q);

  // group the x-sum by n = F(x)
  std::map<std::pair<i64, i64>, double> wn;
  double n_exact = 0.0;
  {
    i64 B = i64(std::ceil(P * weight.support_halfwidth()));
    VecZ x = VecZ::Constant(3, -B);
    Eigen::VectorXd xs(3);
    for (;;) {
      for (int i = 0; i < 3; ++i) xs(i) = double(x(i)) / P;
      double wt = weight(xs);
      if (wt != 0.0) {
        i64 f1 = pair.eval_f1(x), f2 = pair.eval_f2(x);
        wn[{f1, f2}] += wt;
        if (f1 == 0 && f2 == 0) n_exact += wt;
      }
      int pos = 0;
      while (pos < 3 && ++x(pos) > B) x(pos++) = -B;
      if (pos == 3) break;
    }
  }
  std::vector<Vec2i> ns;
  std::vector<double> wvals;
  for (auto& [key, w] : wn) {
    ns.push_back({key.first, key.second});
    wvals.push_back(w);
  }
  const size_t nn = ns.size();
  const i64 qmax = i64(std::floor(Q));

  // A_q(n) = sum over primitive a mod q of e_q(a.n) = sum over classes of c_q(a.n)
  std::vector<std::vector<Vec2i>> reps(qmax + 1);
  for (i64 q = 1; q <= qmax; ++q) reps[q] = residue_class_reps(q);
  auto a_q = [&](i64 q, const Vec2i& n) {
    double acc = 0.0;
    for (const Vec2i& a : reps[q]) acc += double(ramanujan_sum(q, a.dot(n)));
    return acc;
  };

  // N0: major-arc disks, kernel-free
  quad::Neumaier n0;
  for (i64 q = 1; double(q) < qcut && q <= qmax; ++q) {
    double R = std::pow(Q, -1.0 - delta_param) / double(q);
    for (size_t i = 0; i < nn; ++i) n0.add(wvals[i] * a_q(q, ns[i]) * disk_ft(R, ns[i].norm()));
  }

  // Arc windows: [R_lo(q), R_hi(q)) in |w|; the minor window starts at the
  // major radius exactly when a major arc exists.
  auto arc_hi = [&](i64 q) { return std::pow(Q, -0.5 + delta_param) / double(q); };
  auto arc_lo = [&](i64 q) {
    return (double(q) < qcut) ? std::pow(Q, -1.0 - delta_param) / double(q) : 0.0;
  };
  // \int_{R_lo <= |w| < R_hi} e(w.v) dw
  auto annulus_ft = [&](double lo, double hi, double vn) {
    if (vn == 0.0) return M_PI * (hi * hi - lo * lo);
    double v = hi * bessel_j1(kTwoPi * hi * vn);
    if (lo > 0.0) v -= lo * bessel_j1(kTwoPi * lo * vn);
    return v / vn;
  };

  // N1: per q, 1D radial integrals of p1 against J0.
  double n1 = 0.0, imag_abs = 0.0;
  for (i64 q = 1; q <= qmax; ++q) {
    double lo = arc_lo(q), hi = arc_hi(q);
    P1Radial p1tab(ctx, q, hi * 1.0000001);
    double nmax = 0.0;
    for (size_t i = 0; i < nn; ++i) nmax = std::max(nmax, ns[i].norm());
    auto per_n = parallel_map<double>(i64(nn), jobs, [&](long long i) {
      double aq = a_q(q, ns[size_t(i)]);
      if (aq == 0.0) return 0.0;
      double nnorm = ns[size_t(i)].norm();
      double panel = quad::osc_panel_width((hi - lo) / 8.0, nnorm + std::pow(Q, 1.5));
      double integral =
          kTwoPi * quad::integrate(
                       [&](double t) { return t * p1tab(t) * fast_j0(kTwoPi * nnorm * t); },
                       lo, hi, panel);
      return wvals[size_t(i)] * aq * integral;
    });
    for (double v : per_n) n1 += v;
  }

  // N2: for each annulus point r and q, the unique (d, k) with dk = content(r),
  // d | q, gcd(q/d, k) = 1 is d = gcd(q, content(r)). The arc integral of p2
  // against e(w.n) is computed in x-space:
  //   int_arc p2(w) e(w.n) dw = (c/Q^3) int rho(x) K(|n - x|) dx,
  // with rho = omega0(|x|/Q^{3/2}) h(kq/Q, r.x/Q^2) and K the annulus kernel;
  // the rho-nodes are shared across all n.
  double n2 = 0.0;
  {
    Lattice2D z2 = lattice_from({1, 1}, 1);
    std::vector<Vec2i> rs = annulus_points(z2, sq / 2.0, sq);
    for (const Vec2i& r : rs) {
      i64 m = r.content();
      Vec2i c{r.x / m, r.y / m};
      double wfac = profile.omega(r.norm() / sq);
      if (wfac == 0.0) continue;
      const double r2 = double(r.norm2()), rn = std::sqrt(r2);
      for (i64 q = 1; q <= qmax; ++q) {
        i64 d = std::gcd(q, m), k = m / d;
        if (double(k) * double(q) >= Q) continue;  // p2 vanishes; also q > Q/k excluded
        double lo = arc_lo(q), hi = arc_hi(q);
        // chi(n) = sum of e_q(a.n) over primitive a with q | d c.perp(a);
        // the set is negation-closed, so chi is real up to roundoff.
        auto rou = RootsOfUnity::get(q);
        std::vector<cplx> chi(nn, cplx{0.0, 0.0});
        for (i64 a1 = 0; a1 < q; ++a1)
          for (i64 a2 = 0; a2 < q; ++a2) {
            if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
            if (mod_pos(d * (c.x * a2 - c.y * a1), q) != 0) continue;
            for (size_t i = 0; i < nn; ++i) chi[i] += (*rou)(a1 * ns[i].x + a2 * ns[i].y);
          }
        // rho nodes over the omega0 disk
        const double X = std::pow(Q, 1.5) / 2.0;
        const double y = double(k) * double(q) / Q;
        double panel = std::min({X / 8.0, 0.5 * y * Q * Q / rn, 0.5 / hi});
        int np = std::max(1, int(std::ceil(2.0 * X / panel)));
        if (double(np) * np > 4e6) throw budget_error("decomposition_check: x-grid over budget");
        double hx = 2.0 * X / np;
        struct XNode {
          double x1, x2, rho_wt;
        };
        std::vector<XNode> nodes;
        nodes.reserve(size_t(np) * np * 4);
        for (int i1 = 0; i1 < np; ++i1)
          for (int g1 = 0; g1 < 8; ++g1)
            for (double s1 : {-1.0, 1.0}) {
              double x1 = -X + (i1 + 0.5) * hx + s1 * 0.5 * hx * quad::kNodes[g1];
              for (int i2 = 0; i2 < np; ++i2)
                for (int g2 = 0; g2 < 8; ++g2)
                  for (double s2 : {-1.0, 1.0}) {
                    double x2 = -X + (i2 + 0.5) * hx + s2 * 0.5 * hx * quad::kNodes[g2];
                    double w0 = profile.omega0(std::hypot(x1, x2) / (2.0 * X));
                    if (w0 == 0.0) continue;
                    double hval =
                        h_eval(profile, y, (double(r.x) * x1 + double(r.y) * x2) / (Q * Q));
                    if (hval == 0.0) continue;
                    double wq = quad::kWeights[g1] * quad::kWeights[g2] * 0.25 * hx * hx;
                    nodes.push_back({x1, x2, w0 * hval * wq});
                  }
            }
        double scale = profile.c / (Q * Q * Q) * wfac;
        auto per_n = parallel_map<std::pair<double, double>>(i64(nn), jobs, [&](long long i) {
          if (chi[size_t(i)] == cplx{0.0, 0.0}) return std::make_pair(0.0, 0.0);
          const Vec2i& n = ns[size_t(i)];
          double phi = 0.0;
          for (const XNode& nd : nodes)
            phi += nd.rho_wt * annulus_ft(lo, hi, std::hypot(double(n.x) - nd.x1,
                                                             double(n.y) - nd.x2));
          double base = wvals[size_t(i)] * scale * phi;
          return std::make_pair(base * chi[size_t(i)].real(), base * chi[size_t(i)].imag());
        });
        for (auto& [re, im] : per_n) {
          n2 += re;
          imag_abs += std::abs(im);
        }
      }
    }
  }

  DecompositionResult out;
  out.n_exact = n_exact;
  out.n0 = n0.value();
  out.n1 = n1;
  out.n2 = n2;
  out.residual = std::abs(n_exact - (out.n0 + n1 + n2));
  out.imag_abs = imag_abs;
  return out;
}

}  // namespace delta2d
