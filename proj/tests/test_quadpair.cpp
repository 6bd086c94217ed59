#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "delta2d/quadpair.hpp"

using namespace delta2d;

namespace {

QuadraticPair load(const char* name) {
  return QuadraticPair::from_json_file(std::string(DELTA2D_DATA_DIR) + "/" + name);
}

Vec2i canon(Vec2i c) {
  return (c.x < 0 || (c.x == 0 && c.y < 0)) ? -c : c;
}

}  // namespace

TEST_CASE("pair validation") {
  MatZ h1 = MatZ::Zero(3, 3), h2 = MatZ::Zero(3, 3);
  h1.diagonal() << 1, 2, 2;  // odd diagonal entry
  h2.diagonal() << 2, 2, 2;
  CHECK_THROWS_AS(QuadraticPair(h1, h2), validation_error);
  h1.diagonal() << 2, 2, 2;
  h1(0, 1) = 1;  // asymmetric
  CHECK_THROWS_AS(QuadraticPair(h1, h2), validation_error);
  h1(1, 0) = 1;
  CHECK_NOTHROW(QuadraticPair(h1, h2));

  QuadraticPair t3 = load("toy3.json");
  QuadraticPair round = QuadraticPair::from_json_text(t3.to_json_text());
  CHECK(round.h1() == t3.h1());
  CHECK(round.h2() == t3.h2());
}

TEST_CASE("direction classification") {
  QuadraticPair toy4 = load("toy4.json");
  auto good = classify_direction(toy4, {1, 0});
  CHECK(good.good);
  CHECK(good.det_hc == i128(2) * 2 * 2 * (-2));

  QuadraticPair bad3 = load("toy3bad.json");
  auto bad = classify_direction(bad3, {1, -1});
  CHECK_FALSE(bad.good);
  CHECK(bad.rho(2) == 0);  // rho_s = 0 for bad c
  CHECK(bad.rho(0) == 2);
  CHECK(bad.rho(1) == 2);

  CHECK_THROWS_AS(classify_direction(toy4, {2, 4}), validation_error);
}

TEST_CASE("at most s bad primitive classes") {
  for (const char* name : {"toy3.json", "toy3bad.json", "toy4.json", "ex10.json"}) {
    QuadraticPair p = load(name);
    std::set<std::pair<i64, i64>> bad;
    for (i64 cx = -50; cx <= 50; ++cx)
      for (i64 cy = -50; cy <= 50; ++cy) {
        Vec2i c{cx, cy};
        if (!c.primitive()) continue;
        if (p.pencil_value(c) == 0) {
          Vec2i cc = canon(c);
          bad.insert({cc.x, cc.y});
        }
      }
    CHECK(int(bad.size()) <= p.s());
    // the enumerated list matches the scan
    std::set<std::pair<i64, i64>> listed;
    for (const Vec2i& c : p.bad_directions())
      if (std::abs(c.x) <= 50 && std::abs(c.y) <= 50) listed.insert({c.x, c.y});
    CHECK(listed == bad);
  }
}

TEST_CASE("dual form via adjugate") {
  // M_c = diag(1,2,3) at c = (1,0)
  MatZ h1 = MatZ::Zero(3, 3), h2 = MatZ::Zero(3, 3);
  h1.diagonal() << 2, 4, 6;
  h2.diagonal() << 2, 2, 8;
  QuadraticPair p(h1, h2);
  DualForm f = dual_form(p, {1, 0});
  CHECK(f.denom_pow2 == 0);
  MatZ expect = MatZ::Zero(3, 3);
  expect.diagonal() << 6, 3, 2;  // F* = 6u1^2 + 3u2^2 + 2u3^2
  CHECK(f.gram == expect);

  // adj(M) M = det(M) I, and F*(M_c e_1) = det * (M_c)_{11}
  QuadraticPair toy4 = load("toy4.json");
  for (i64 cx = -10; cx <= 10; ++cx)
    for (i64 cy = -10; cy <= 10; ++cy) {
      Vec2i c{cx, cy};
      if (!c.primitive()) continue;
      auto dir = classify_direction(toy4, c);
      if (!dir.good) continue;
      DualForm df = dual_form(toy4, c);
      MatZ mc = dir.hc / 2;
      MatZ prod = df.gram * mc;
      i128 det = det_exact(mc);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(i128(prod(i, j)) == (i == j ? det : i128(0)));
      VecZ u = mc.col(0);
      CHECK(df.eval_exact(u) == det * i128(mc(0, 0)));
    }

  CHECK_THROWS_AS(dual_form(load("toy3bad.json"), {1, -1}), validation_error);
}

TEST_CASE("dual variety polynomial") {
  QuadraticPair toy4 = load("toy4.json");
  VecZ zero = VecZ::Zero(4);
  CHECK(dual_variety_value(toy4, zero) == 0);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<i64> du(-5, 5);
  BigInt t8 = 1, t38 = 1;
  for (int i = 0; i < 8; ++i) {
    t8 *= 2;
    t38 *= 3;
  }
  int nonzero_lead = 0;
  for (int t = 0; t < 20; ++t) {
    VecZ u(4);
    for (int i = 0; i < 4; ++i) u(i) = du(rng);
    BigInt f = dual_variety_value(toy4, u);
    BigInt f2 = dual_variety_value(toy4, VecZ(2 * u));
    BigInt f3 = dual_variety_value(toy4, VecZ(3 * u));
    CHECK(f2 == f * t8);   // degree 4(s-2) = 8 homogeneity
    CHECK(f3 == f * t38);
    // deg_c F*_c(u) = s-1: the c2^{s-1} coefficient is u^T adj(M_2) u
    DualForm at01 = dual_form(toy4, {0, 1});
    if (at01.eval_num(u) != 0) ++nonzero_lead;
  }
  CHECK(nonzero_lead == 20);

  // engineered double root vanishes exactly
  QuadraticPair dd = load("toy4dd.json");
  VecZ e1 = VecZ::Zero(4), e3 = VecZ::Zero(4);
  e1(0) = 1;
  e3(2) = 1;
  CHECK(dual_variety_value(dd, e1) == 0);
  CHECK(dual_variety_value(dd, e3) != 0);

  CHECK_THROWS_AS(dual_variety_value(load("toy3.json"), VecZ::Zero(3)), validation_error);
}

TEST_CASE("restricted form at a bad direction") {
  QuadraticPair bad3 = load("toy3bad.json");
  Vec2i c{1, -1};
  RestrictedForm rf = restricted_form_and_dual(bad3, c);
  // hand-computed 2x2 Gram for H_c = [[2,0,2],[0,2,0],[2,0,2]]
  MatZ expect(2, 2);
  expect << 2, 0, 0, 2;
  CHECK(rf.q_gram == expect);

  auto dir = classify_direction(bad3, c);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<i64> dx(-10, 10);
  MatZ hc = bad3.hc(c);
  for (int t = 0; t < 100; ++t) {
    VecZ x(3);
    for (int i = 0; i < 3; ++i) x(i) = dx(rng);
    // F_c(x) = Q_c(x') with x' the projection along y_s
    i64 fc = QuadraticPair::eval_half_h(hc, x);
    VecZ alpha = dir.smith.s * x;  // y-coordinates of x
    VecZ yprime = alpha.head(2);
    CHECK(fc == rf.eval_q(yprime));
    // integral projection
    VecZ proj = dir.project(x);
    CHECK(proj == VecZ(x - alpha(2) * rf.y_last));
  }
  // good primes for bad c do not divide the restricted determinant
  i128 dq = det_exact(rf.q_gram);
  for (i64 p : {3, 5, 7, 11, 13})
    if (!bad3.df_divisible_by(p)) CHECK(dq % p != 0);
}

TEST_CASE("prime types") {
  QuadraticPair toy4 = load("toy4.json");
  CHECK(prime_type(toy4, {1, 0}, 2) == PrimeType::bad_prime);
  CHECK(prime_type(toy4, {1, 0}, 3) == PrimeType::bad_prime);
  CHECK(prime_type(toy4, {1, 0}, 7) == PrimeType::bad_prime);
  CHECK(prime_type(toy4, {1, 0}, 9973) == PrimeType::typeI);
  CHECK(prime_type(toy4, {1, 4}, 13) == PrimeType::typeII);  // 13 | det M_c = -6669
  CHECK(prime_type(toy4, {1, 1}, 13) == PrimeType::good_for_bad_c);

  // every (c, p) with |c| <= 10, p <= 50 lands in exactly one class
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47})
    for (i64 cx = -10; cx <= 10; ++cx)
      for (i64 cy = -10; cy <= 10; ++cy) {
        Vec2i c{cx, cy};
        if (!c.primitive()) continue;
        CHECK_NOTHROW(prime_type(toy4, c, p));
      }
}

TEST_CASE("lambda_w") {
  QuadraticPair toy4 = load("toy4.json");
  // w along the perp of the first root direction (1, 2)/sqrt(5)
  CHECK(lambda_w(toy4, -2.0, 1.0) < 1e-8);
  CHECK(lambda_w(toy4, 1.0, 1.0) < 1e-8);  // (1, -1) direction: root (1,-1)
  // closed form for diagonal pencils
  auto lam_closed = [&](double w1, double w2) {
    double best = 1e300;
    for (int j = 0; j < 4; ++j) {
      double m1 = toy4.h1()(j, j) / 2.0, m2 = toy4.h2()(j, j) / 2.0;
      best = std::min(best, std::abs(m1 * w1 + m2 * w2) /
                                (std::hypot(w1, w2) * std::hypot(m1, m2)));
    }
    return best;
  };
  for (auto [w1, w2] : {std::pair{0.3, 0.7}, {1.0, 0.0}, {-2.0, 0.5}}) {
    CHECK(lambda_w(toy4, w1, w2) == doctest::Approx(lam_closed(w1, w2)).epsilon(1e-7));
    CHECK(lambda_w(toy4, 3.0 * w1, 3.0 * w2) ==
          doctest::Approx(lambda_w(toy4, w1, w2)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(lambda_w(toy4, 0.0, 0.0), validation_error);
}

TEST_CASE("pencil roots reproduce the determinant form") {
  QuadraticPair toy3 = load("toy3.json");
  const auto& roots = toy3.pencil_roots();
  REQUIRE(int(roots.size()) == 3);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> ur(-2.0, 2.0);
  double ratio0 = 0.0;
  for (int t = 0; t < 5; ++t) {
    double x = ur(rng), y = ur(rng);
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = x * toy3.h1()(i, j) + y * toy3.h2()(i, j);
    std::complex<double> prod{1.0, 0.0};
    for (auto& [lam, mu] : roots) prod *= (lam * x + mu * y);
    double ratio = m.determinant() / prod.real();
    if (t == 0)
      ratio0 = ratio;
    else
      CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-8));
    CHECK(std::abs(prod.imag() / prod.real()) < 1e-8);
  }
}

TEST_CASE("nonsingularity screen") {
  CHECK(nonsingularity_screen(load("toy4.json"), 3, 0) == ScreenResult::pass);
  CHECK(nonsingularity_screen(load("ex10.json"), 2, 0) == ScreenResult::pass);
  CHECK(nonsingularity_screen(load("toy4dd.json"), 2, 0) == ScreenResult::fail);  // D_F = 0
  // reproducibility
  CHECK(nonsingularity_screen(load("toy3.json"), 2, 42) ==
        nonsingularity_screen(load("toy3.json"), 2, 42));
}
