#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "delta2d/lattice.hpp"

using namespace delta2d;

namespace {

// brute coset membership: r in Lambda(a, q) iff r = k a mod q for some k
bool coset_member(const Vec2i& a, i64 q, const Vec2i& r) {
  for (i64 k = 0; k < q; ++k)
    if (mod_pos(r.x - k * a.x, q) == 0 && mod_pos(r.y - k * a.y, q) == 0) return true;
  return false;
}

Vec2i random_primitive_residue(std::mt19937_64& rng, i64 q) {
  std::uniform_int_distribution<i64> d(0, q - 1);
  for (;;) {
    Vec2i a{d(rng), d(rng)};
    if (std::gcd(a.content(), q) == 1) return a;
  }
}

}  // namespace

TEST_CASE("lattice construction examples") {
  Lattice2D l1 = lattice_from({1, 0}, 5);
  CHECK(std::abs(l1.b1.x * l1.b2.y - l1.b2.x * l1.b1.y) == 5);
  CHECK(l1.contains({1, 0}));
  CHECK(l1.contains({0, 5}));
  CHECK_FALSE(l1.contains({0, 1}));

  Lattice2D l2 = lattice_from({1, 2}, 5);
  CHECK(l2.contains({2, -1}));  // 5 | (2,-1).perp((1,2)) = (2,-1).(2,-1) = 5
  CHECK(l2.contains({1, 2}));
  CHECK_FALSE(l2.contains({1, 0}));

  Lattice2D l3 = lattice_from({1, 1}, 1);
  CHECK(std::abs(l3.b1.x * l3.b2.y - l3.b2.x * l3.b1.y) == 1);

  CHECK_THROWS_AS(lattice_from({2, 4}, 6), validation_error);
}

TEST_CASE("lattice equality") {
  CHECK(lattice_equal(lattice_from({1, 2}, 5), lattice_from({2, 4}, 5)));
  CHECK_FALSE(lattice_equal(lattice_from({1, 0}, 5), lattice_from({0, 1}, 5)));
  CHECK(lattice_equal(lattice_from({1, 0}, 1), lattice_from({0, 1}, 1)));
  CHECK_THROWS_AS(lattice_equal(lattice_from({1, 0}, 2), lattice_from({1, 0}, 3)),
                  validation_error);
}

TEST_CASE("membership characterization equals coset membership, q <= 30") {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<i64> dr(-40, 40);
  for (i64 q = 1; q <= 30; ++q)
    for (i64 ax = 0; ax < q; ++ax)
      for (i64 ay = 0; ay < q; ++ay) {
        Vec2i a{ax, ay};
        if (std::gcd(a.content(), q) != 1) continue;
        Lattice2D l = lattice_from(a, q);
        for (int t = 0; t < 4; ++t) {
          Vec2i r{dr(rng), dr(rng)};
          CHECK(membership_characterization_check(l, r) == coset_member(a, q, r));
        }
      }
}

TEST_CASE("residue classes have size phi(q) and partition the primitive residues") {
  for (i64 q = 1; q <= 30; ++q) {
    auto reps = residue_class_reps(q);
    CHECK(i64(reps.size()) * euler_phi(q) == primitive_residue_count(q));
    // canonical representative is the least member of its class
    for (const Vec2i& a : reps) CHECK(canonical_residue(a, q) == a);
    // classes are disjoint: count distinct members
    std::set<std::pair<i64, i64>> seen;
    for (const Vec2i& a : reps)
      for (i64 lam = 1; lam <= std::max<i64>(1, q - 1); ++lam) {
        if (std::gcd(lam, q) != 1) continue;
        seen.insert({mulmod(lam, a.x, q), mulmod(lam, a.y, q)});
      }
    CHECK(i64(seen.size()) == primitive_residue_count(q));
  }
}

TEST_CASE("shortest vector examples") {
  WeightedEmbedding e{0.0, 0.0, 1.0};
  auto sv = shortest_vector(lattice_from({1, 2}, 5), e);
  CHECK(sv.mu == doctest::Approx(std::sqrt(5.0)));
  CHECK((sv.v == Vec2i{1, 2} || sv.v == Vec2i{2, -1}));

  auto sz = shortest_vector(lattice_from({1, 0}, 1), e);
  CHECK(sz.mu == doctest::Approx(1.0));
}

TEST_CASE("shortest vector vs exhaustive enumeration, 500 instances") {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<i64> dq(1, 50);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    i64 q = dq(rng);
    Vec2i a = random_primitive_residue(rng, q);
    // keep 4q >= 2 sqrt(Q) so the |v| <= 4q oracle window certainly contains
    // the minimizer (mu_M <= 2 sqrt(covol * meas) <= 2 with these w)
    double qmax = std::min(256.0, 4.0 * double(q) * double(q));
    double Q = 4.0 + uni(rng) * (qmax - 4.0);
    double ws = 1.0 / (double(q) * std::sqrt(Q));
    WeightedEmbedding e{(2.0 * uni(rng) - 1.0) * ws, (2.0 * uni(rng) - 1.0) * ws, Q};
    Lattice2D l = lattice_from(a, q);
    auto sv = shortest_vector(l, e);
    // oracle: all lattice vectors with |v| <= 4q
    double best = 1e300;
    for (i64 x = -4 * q; x <= 4 * q; ++x)
      for (i64 y = -4 * q; y <= 4 * q; ++y) {
        Vec2i v{x, y};
        if (v.is_zero() || !l.contains(v)) continue;
        best = std::min(best, e.norm(v));
      }
    CHECK(sv.mu == doctest::Approx(best).epsilon(1e-9));
    CHECK(sv.mu >= std::pow(Q, -0.5) * (1.0 - 1e-12));  // mu >= Q^{-1/2}
  }
}

TEST_CASE("reduced basis") {
  WeightedEmbedding e{0.0, 0.0, 1.0};
  auto [x1, x2] = reduced_basis(lattice_from({1, 0}, 1), e);
  CHECK(x1 == Vec2i{0, 1});  // sign-canonical tie-break: (0,1) before (1,0)
  CHECK(x2 == Vec2i{1, 0});

  std::mt19937_64 rng(3);
  std::uniform_int_distribution<i64> dq(1, 50);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double kappa_min = 1e9, prod_max = 0.0, mu_max = 0.0;
  for (int t = 0; t < 200; ++t) {
    i64 q = dq(rng);
    Vec2i a = random_primitive_residue(rng, q);
    double Q = std::pow(4.0, 1.0 + 2.0 * uni(rng));
    double ws = 1.0 / (double(q) * std::sqrt(Q));
    WeightedEmbedding e2{(2.0 * uni(rng) - 1.0) * ws, (2.0 * uni(rng) - 1.0) * ws, Q};
    Lattice2D l = lattice_from(a, q);
    auto [y1, y2] = reduced_basis(l, e2);
    CHECK(std::abs(y1.x * y2.y - y2.x * y1.y) == q);  // covolume preserved
    double n1 = e2.norm(y1), n2 = e2.norm(y2);
    double meas = parallelogram_measure(e2);
    prod_max = std::max(prod_max, n1 * n2 / (double(q) * meas));
    mu_max = std::max(mu_max, n1 / std::sqrt(double(q) * meas));
    for (int i = 0; i < 1000 / 200 * 10; ++i) {
      double r1 = 2.0 * uni(rng) - 1.0, r2 = 2.0 * uni(rng) - 1.0;
      double num = std::sqrt(std::max(0.0, e2.gram(y1, y1) * r1 * r1 +
                                               2.0 * e2.gram(y1, y2) * r1 * r2 +
                                               e2.gram(y2, y2) * r2 * r2));
      double den = std::abs(r1) * n1 + std::abs(r2) * n2;
      if (den > 0.0) kappa_min = std::min(kappa_min, num / den);
    }
  }
  CHECK(kappa_min >= 0.25);         // comparability constant
  CHECK(prod_max <= 8.0);           // |Mx1||Mx2| within factor 8 of covol * meas
  CHECK(mu_max <= 2.0);             // mu_M <= 2 sqrt(covol * meas)
}

TEST_CASE("parallelogram measure") {
  CHECK(parallelogram_measure({0.0, 0.0, 4.0}) == doctest::Approx(0.25));
  CHECK(parallelogram_measure({1.0, 0.0, 1.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(parallelogram_measure({0.3, -0.4, 2.0}) ==
        doctest::Approx(parallelogram_measure({-0.3, 0.4, 2.0})));
}

TEST_CASE("annulus enumeration stays strictly inside") {
  for (i64 q : {1, 2, 5, 12}) {
    Lattice2D l = lattice_from({1, mod_pos(i64(2), q)}, q);
    for (double Q : {9.0, 25.0, 64.0}) {
      double sq = std::sqrt(Q);
      for (const Vec2i& r : annulus_points(l, sq / 2.0, sq)) {
        CHECK(double(r.norm2()) > Q / 4.0);
        CHECK(double(r.norm2()) < Q);
        CHECK(l.contains(r));
      }
    }
  }
}

TEST_CASE("canonical residue") {
  CHECK(canonical_residue({2, 4}, 5) == canonical_residue({1, 2}, 5));
  CHECK(canonical_residue({4, 3}, 5) == canonical_residue({4 * 2 % 5, 3 * 2 % 5}, 5));
  CHECK(canonical_residue({0, 0}, 1) == Vec2i{0, 0});
}
