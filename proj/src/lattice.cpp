#include "delta2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace delta2d {

namespace {

// Nearest integer to a/b (b > 0), half away from zero, in exact arithmetic.
i64 round_div(i64 a, i64 b) {
  i64 r;
  if (a >= 0)
    r = (2 * a + b) / (2 * b);
  else
    r = -((-2 * a + b) / (2 * b));
  return r;
}

// Sign-canonical representative among {v, -v}: positive x, or x = 0, y > 0.
Vec2i canonical_sign(const Vec2i& v) {
  if (v.x < 0 || (v.x == 0 && v.y < 0)) return -v;
  return v;
}

// Euclidean Lagrange-Gauss reduction; exact integer arithmetic.
void gauss_reduce(Vec2i& b1, Vec2i& b2) {
  for (int it = 0; it < 128; ++it) {
    if (b2.norm2() < b1.norm2()) std::swap(b1, b2);
    i64 m = round_div(b1.dot(b2), b1.norm2());
    if (m == 0) break;
    b2 = b2 - m * b1;
  }
  b1 = canonical_sign(b1);
  b2 = canonical_sign(b2);
  if (Vec2i(b2) < b1) std::swap(b1, b2);
}

}  // namespace

double WeightedEmbedding::norm(const Vec2i& v) const { return std::sqrt(norm2(v)); }

double parallelogram_measure(const WeightedEmbedding& e) {
  return std::sqrt(1.0 / (e.Q * e.Q) + e.Q * (e.w1 * e.w1 + e.w2 * e.w2));
}

Vec2i canonical_residue(Vec2i a, i64 q) {
  if (q < 1) throw validation_error("canonical_residue: q >= 1 required");
  a = {mod_pos(a.x, q), mod_pos(a.y, q)};
  Vec2i best = a;
  for (i64 lam = 1; lam < q; ++lam) {
    if (std::gcd(lam, q) != 1) continue;
    Vec2i cand{mulmod(lam, a.x, q), mulmod(lam, a.y, q)};
    if (cand < best) best = cand;
  }
  return best;
}

Lattice2D lattice_from(Vec2i a, i64 q) {
  if (q < 1) throw validation_error("lattice_from: q >= 1 required");
  if (std::gcd(a.content(), q) != 1) throw validation_error("lattice_from: gcd(a, q) must be 1");

  Lattice2D l;
  l.q = q;
  l.a = canonical_residue(a, q);
  if (q == 1) {
    l.b1 = {1, 0};
    l.b2 = {0, 1};
    return l;
  }
  Vec2i ap = a;
  i64 ct = ap.content();
  ap = {ap.x / ct, ap.y / ct};
  i64 x, y;
  ext_gcd(ap.x, ap.y, x, y);  // x*ap.x + y*ap.y = 1
  Vec2i aprime{-y, x};        // det(ap | aprime) = 1
  Vec2i b1 = ap, b2 = q * aprime;
  gauss_reduce(b1, b2);
  l.b1 = b1;
  l.b2 = b2;
  return l;
}

bool membership_characterization_check(const Lattice2D& l, const Vec2i& r) {
  return l.contains(r);
}

bool lattice_equal(const Lattice2D& l1, const Lattice2D& l2) {
  if (l1.q != l2.q) throw validation_error("lattice_equal: same q required");
  // r in L iff adj(B) r = det(B) * (integer vector); |det| = q.
  auto solves = [](const Lattice2D& l, const Vec2i& r) {
    i64 det = l.b1.x * l.b2.y - l.b2.x * l.b1.y;
    i64 u = l.b2.y * r.x - l.b2.x * r.y;
    i64 v = -l.b1.y * r.x + l.b1.x * r.y;
    return u % det == 0 && v % det == 0;
  };
  return solves(l2, l1.b1) && solves(l2, l1.b2) && solves(l1, l2.b1) && solves(l1, l2.b2);
}

ShortestVector shortest_vector(const Lattice2D& l, const WeightedEmbedding& e) {
  Vec2i c1 = l.b1, c2 = l.b2;
  // Gauss reduction in the M metric; the Gram values are floating, the
  // vectors stay exact, and the follow-up enumeration makes the result
  // independent of reduction round-off.
  for (int it = 0; it < 128; ++it) {
    if (e.norm2(c2) < e.norm2(c1)) std::swap(c1, c2);
    double mu = e.gram(c1, c2) / e.norm2(c1);
    i64 m = i64(std::llround(mu));
    if (m == 0) break;
    c2 = c2 - m * c1;
  }
  double g11 = e.norm2(c1), g12 = e.gram(c1, c2), g22 = e.norm2(c2);
  double r2 = std::min(g11, g22) * (1.0 + 1e-12);
  // |M(m c1 + n c2)| >= |n| * h2 with h2 the distance of M c2 from span(M c1).
  double h2sq = g22 - g12 * g12 / g11;
  i64 nmax = i64(std::floor(std::sqrt(r2 / h2sq))) + 1;

  ShortestVector best;
  best.mu = -1.0;
  auto consider = [&](const Vec2i& v) {
    if (v.is_zero()) return;
    double nr2 = e.norm2(v);
    if (nr2 > r2 * (1.0 + 1e-12)) return;
    Vec2i cv = canonical_sign(v);
    if (best.mu < 0.0 || nr2 < best.mu * best.mu * (1.0 - 1e-12)) {
      best.mu = std::sqrt(nr2);
      best.v = cv;
      return;
    }
    if (std::abs(nr2 - best.mu * best.mu) <= 1e-12 * nr2) {
      // tie: exact |v|^2, then lexicographic (x, y)
      if (cv.norm2() < best.v.norm2() ||
          (cv.norm2() == best.v.norm2() && cv < best.v))
        best.v = cv;
    }
  };
  for (i64 n = -nmax; n <= nmax; ++n) {
    // g11 m^2 + 2 g12 m n + g22 n^2 <= r2
    double disc = g12 * g12 * double(n) * double(n) - g11 * (g22 * double(n) * double(n) - r2);
    if (disc < 0) continue;
    double mid = -g12 * double(n) / g11, half = std::sqrt(disc) / g11;
    i64 mlo = i64(std::floor(mid - half)) - 1, mhi = i64(std::ceil(mid + half)) + 1;
    for (i64 m = mlo; m <= mhi; ++m) consider(m * c1 + n * c2);
  }
  return best;
}

std::pair<Vec2i, Vec2i> reduced_basis(const Lattice2D& l, const WeightedEmbedding& e) {
  ShortestVector sv = shortest_vector(l, e);
  Vec2i x1 = sv.v;
  // x1 = alpha b1 + beta b2 with gcd(alpha, beta) = 1; complete to a basis.
  i64 det = l.b1.x * l.b2.y - l.b2.x * l.b1.y;
  i64 alpha = (l.b2.y * x1.x - l.b2.x * x1.y) / det;
  i64 beta = (-l.b1.y * x1.x + l.b1.x * x1.y) / det;
  i64 g, gx, gy;
  g = ext_gcd(alpha, beta, gx, gy);
  if (g != 1) throw validation_error("reduced_basis: shortest vector not primitive");
  Vec2i x20 = (-gy) * l.b1 + gx * l.b2;  // det(x1 | x20) = +-q
  // minimize |M(x20 + t x1)| over integer t
  double t0 = -e.gram(x1, x20) / e.norm2(x1);
  Vec2i best = x20;
  bool first = true;
  for (i64 t = i64(std::floor(t0)) - 1; t <= i64(std::ceil(t0)) + 1; ++t) {
    Vec2i cand = x20 + t * x1;
    if (first || e.norm2(cand) < e.norm2(best) * (1.0 - 1e-12) ||
        (std::abs(e.norm2(cand) - e.norm2(best)) <= 1e-12 * e.norm2(best) &&
         canonical_sign(cand) < canonical_sign(best))) {
      best = cand;
      first = false;
    }
  }
  return {x1, canonical_sign(best)};
}

std::vector<Vec2i> annulus_points(const Lattice2D& l, double rmin, double rmax) {
  Vec2i b1 = l.b1, b2 = l.b2;
  double n1 = double(b1.norm2()), n2 = double(b2.norm2()), d = double(b1.dot(b2));
  double h1 = std::sqrt(std::max(n1 - d * d / n2, 1e-30));
  double h2 = std::sqrt(std::max(n2 - d * d / n1, 1e-30));
  i64 mmax = i64(std::floor(rmax / h1)) + 1;
  i64 nmax = i64(std::floor(rmax / h2)) + 1;
  std::vector<Vec2i> pts;
  for (i64 m = -mmax; m <= mmax; ++m)
    for (i64 n = -nmax; n <= nmax; ++n) {
      Vec2i v = m * b1 + n * b2;
      double nr2 = double(v.norm2());
      if (nr2 > rmin * rmin && nr2 < rmax * rmax) pts.push_back(v);
    }
  std::sort(pts.begin(), pts.end());
  return pts;
}

i64 primitive_residue_count(i64 q) {
  i64 n = mul_checked(q, q);
  for (auto [p, e] : factorize(q).factors) {
    n /= mul_checked(p, p);
    n = mul_checked(n, mul_checked(p, p) - 1);
  }
  return n;
}

std::vector<Vec2i> residue_class_reps(i64 q) {
  // Scanning lexicographically, the first unseen member of a class is its
  // canonical representative.
  std::vector<Vec2i> reps;
  std::unordered_set<i64> seen;
  for (i64 x = 0; x < q; ++x)
    for (i64 y = 0; y < q; ++y) {
      if (std::gcd(std::gcd(x, y), q) != 1) continue;
      if (seen.count(x * q + y)) continue;
      reps.push_back({x, y});
      for (i64 lam = 1; lam < std::max<i64>(q, 2); ++lam) {
        if (std::gcd(lam, q) != 1) continue;
        seen.insert(mulmod(lam, x, q) * q + mulmod(lam, y, q));
      }
    }
  return reps;
}

}  // namespace delta2d
