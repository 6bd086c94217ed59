#include <doctest.h>

#include <cmath>
#include <random>

#include "delta2d/expsum.hpp"
#include "delta2d/quadpair.hpp"

using namespace delta2d;

namespace {

QuadraticPair load(const char* name) {
  return QuadraticPair::from_json_file(std::string(DELTA2D_DATA_DIR) + "/" + name);
}

VecZ random_u(std::mt19937_64& rng, int s, i64 lo = -9, i64 hi = 9) {
  std::uniform_int_distribution<i64> d(lo, hi);
  VecZ u(s);
  for (int i = 0; i < s; ++i) u(i) = d(rng);
  return u;
}

double rel_diff(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("ramanujan sums") {
  CHECK(ramanujan_sum(1, 5) == 1);
  CHECK(ramanujan_sum(5, 10) == 4);   // p | a gives p - 1
  CHECK(ramanujan_sum(4, 2) == -2);   // e(1/2) + e(3/2)
  // brute oracle
  for (i64 q = 1; q <= 30; ++q) {
    auto rou = RootsOfUnity::get(q);
    for (i64 a = 0; a <= 30; ++a) {
      cplx s{0.0, 0.0};
      for (i64 x = 0; x < q; ++x)
        if (std::gcd(x, q) == 1 || q == 1) s += (*rou)(a * x);
      CHECK(std::abs(s.real() - double(ramanujan_sum(q, a))) < 1e-9);
      CHECK(std::abs(s.imag()) < 1e-9);
    }
  }
}

TEST_CASE("gauss character sums") {
  CHECK(std::abs(gauss_char_sum(3, 1, 1) - cplx{0.0, std::sqrt(3.0)}) < 1e-12);
  CHECK(gauss_char_sum(3, 2, 0) == cplx{0.0, 0.0});
  CHECK_THROWS_AS(gauss_char_sum(2, 1, 1), validation_error);
  // brute oracle over p^k <= 343 and the |g| = p^{k/2} gcd^{1/2} structure at k = 1
  for (i64 p : {3, 5, 7}) {
    for (int k = 1; k <= 3; ++k) {
      i64 pk = 1;
      for (int i = 0; i < k; ++i) pk *= p;
      if (pk > 343) continue;
      auto rou = RootsOfUnity::get(pk);
      for (i64 a : {i64(0), i64(1), i64(2), p, 3 * p, p * p, pk - 1}) {
        cplx brute{0.0, 0.0};
        for (i64 x = 0; x < pk; ++x)
          brute += double(x % p == 0 ? 0 : legendre_symbol(x, p)) * (*rou)(a * x);
        CHECK(std::abs(gauss_char_sum(p, k, a) - brute) < 1e-8 * pk);
      }
      for (i64 a = 1; a < p; ++a)
        CHECK(std::abs(gauss_char_sum(p, 1, a)) == doctest::Approx(std::sqrt(double(p))));
    }
  }
}

TEST_CASE("quad_complete_sum") {
  // 1 variable, q = 3, A = [1], v = 0: |sum| = sqrt(3)
  MatZ a1(1, 1);
  a1 << 1;
  VecZ v0 = VecZ::Zero(1);
  CHECK(std::abs(quad_complete_sum(3, a1, v0)) == doctest::Approx(std::sqrt(3.0)));

  // A = 0: character sum
  MatZ z3 = MatZ::Zero(3, 3);
  VecZ v(3);
  v << 0, 0, 0;
  CHECK(quad_complete_sum(6, z3, v).real() == doctest::Approx(216.0));
  v << 1, 0, 0;
  CHECK(std::abs(quad_complete_sum(6, z3, v)) < 1e-9);

  // randomized oracle: direct summation
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<i64> de(-6, 6);
  for (i64 q : {5, 9, 8, 12, 15, 27}) {
    for (int s = 1; s <= 3; ++s) {
      for (int t = 0; t < 3; ++t) {
        MatZ a(s, s);
        for (int i = 0; i < s; ++i)
          for (int j = i; j < s; ++j) a(i, j) = a(j, i) = de(rng);
        VecZ u = random_u(rng, s);
        auto rou = RootsOfUnity::get(q);
        cplx brute{0.0, 0.0};
        VecZ b = VecZ::Zero(s);
        for (;;) {
          i128 ph = 0;
          for (int i = 0; i < s; ++i) {
            for (int j = 0; j < s; ++j) ph += i128(a(i, j)) * b(i) * b(j);
            ph += i128(u(i)) * b(i);
          }
          brute += rou->at_reduced(mod_pos(ph, q));
          int pos = 0;
          while (pos < s && ++b(pos) == q) b(pos++) = 0;
          if (pos == s) break;
        }
        CHECK(std::abs(quad_complete_sum(q, a, u) - brute) < 1e-8 * std::pow(double(q), s));
      }
    }
  }
}

TEST_CASE("dq: brute vs fast on the s=3 fixture") {
  QuadraticPair toy3 = load("toy3.json");
  VecZ one = VecZ::Zero(3);
  CHECK(dq_brute(toy3, 1, one).value == cplx{1.0, 0.0});
  CHECK(dq_fast(toy3, 1, one).value == cplx{1.0, 0.0});

  std::mt19937_64 rng(2);
  for (i64 q = 1; q <= 10; ++q) {
    for (int t = 0; t < 3; ++t) {
      VecZ u = random_u(rng, 3);
      auto b = dq_brute(toy3, q, u);
      auto f = dq_fast(toy3, q, u);
      CHECK(rel_diff(f.value, b.value) < 1e-6);
      CHECK(b.imag_residual < 1e-9 * std::pow(double(q), 5));
      CHECK(f.provenance == Provenance::multiplicative);
    }
  }
  CHECK_THROWS_AS(dq_brute(toy3, 100, one, 1000000), budget_error);
}

TEST_CASE("multiplicativity D_{q1 q2} = D_{q1} D_{q2}") {
  QuadraticPair toy3 = load("toy3.json");
  VecZ u(3);
  u << 1, 0, 2;
  auto d36 = dq_brute(toy3, 36, u, i64(4e8));
  auto d4 = dq_brute(toy3, 4, u);
  auto d9 = dq_brute(toy3, 9, u);
  CHECK(rel_diff(d36.value, d4.value * d9.value) < 1e-6);
}

TEST_CASE("s_qdc: brute vs fast, small sweep") {
  QuadraticPair toy3 = load("toy3.json");
  std::mt19937_64 rng(3);
  for (i64 q : {2, 4, 6, 9, 12}) {
    VecZ u = random_u(rng, 3);
    DqBruteTable table(toy3, q, u);
    for (i64 d : divisors(q))
      for (i64 cx = -2; cx <= 2; ++cx)
        for (i64 cy = -2; cy <= 2; ++cy) {
          Vec2i c{cx, cy};
          if (!c.primitive()) continue;
          auto fast = s_qdc_fast(toy3, q, d, c, u);
          CHECK(rel_diff(fast.value, table.sqdc(d, c)) < 1e-6);
        }
  }
  // S_{q, q c} = D_q
  VecZ u(3);
  u << 2, -1, 3;
  for (i64 q : {3, 4, 10}) {
    auto s = s_qdc_fast(toy3, q, q, {1, 1}, u);
    auto d = dq_fast(toy3, q, u);
    CHECK(rel_diff(s.value, d.value) < 1e-9);
  }
  CHECK(s_qdc_fast(toy3, 1, 1, {1, 0}, u).value == cplx{1.0, 0.0});
  CHECK_THROWS_AS(s_qdc_fast(toy3, 4, 3, {1, 0}, u), validation_error);  // d must divide q
}

TEST_CASE("prime q, d=1: a = t c parametrization") {
  QuadraticPair toy3 = load("toy3.json");
  VecZ u(3);
  u << 1, 2, 0;
  for (i64 p : {3, 5, 7}) {
    Vec2i c{1, 2};
    auto rou = RootsOfUnity::get(p);
    // oracle: sum over t of sum_b e_p(t F_c(b) + b.u)
    MatZ hc = toy3.hc(c);
    cplx oracle{0.0, 0.0};
    VecZ b = VecZ::Zero(3);
    for (;;) {
      i64 fc = mod_pos(QuadraticPair::eval_half_h(hc, b), p);
      i64 ub = mod_pos(b(0) * u(0) + b(1) * u(1) + b(2) * u(2), p);
      for (i64 t = 1; t < p; ++t) oracle += (*rou)(t * fc + ub);
      int pos = 0;
      while (pos < 3 && ++b(pos) == p) b(pos++) = 0;
      if (pos == 3) break;
    }
    CHECK(rel_diff(s_qdc_fast(toy3, p, 1, c, u).value, oracle) < 1e-8);
  }
}

TEST_CASE("type I closed form vs brute") {
  std::mt19937_64 rng(4);
  for (const char* name : {"toy4.json", "toy5.json"}) {
    QuadraticPair pair = load(name);
    Vec2i c{1, 2};
    i128 det_hc = det_exact(pair.hc(c));
    for (i64 p : {3, 5, 7, 11}) {
      if (det_hc % p == 0) continue;  // needs p coprime to 2 det M_c
      for (int k = 1; k <= 2; ++k) {
        i64 q = k == 1 ? p : p * p;
        for (int t = 0; t < 4; ++t) {
          VecZ u = random_u(rng, pair.s());
          auto fast = s_qdc_fast(pair, q, 1, c, u);
          auto brute = s_qdc_brute(pair, q, 1, c, u);
          CHECK(fast.provenance == Provenance::closed_form);
          CHECK(rel_diff(fast.value, brute.value) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("lemma: D_{p^2}(u) vanishes when p does not divide D_F F*(u)") {
  QuadraticPair toy4 = load("toy4.json");
  std::mt19937_64 rng(5);
  int tested = 0;
  for (i64 p : {11, 13, 17}) {
    if (toy4.df_divisible_by(p)) continue;
    for (int t = 0; t < 4; ++t) {
      VecZ u = random_u(rng, 4);
      if (dual_variety_mod(toy4, u, p) == 0) continue;
      auto d = dq_fast(toy4, p * p, u);
      CHECK(std::abs(d.value) < 1e-6 * std::pow(double(p), 2.0 * (0.5 * 4 + 2.0)));
      ++tested;
    }
  }
  CHECK(tested >= 6);
}

TEST_CASE("type II vanishing unless p^{k1} divides the last coordinate") {
  QuadraticPair toy4 = load("toy4.json");
  Vec2i c{1, 4};
  i64 p = 13;  // p | det M_c = -6669, p coprime to D_F
  REQUIRE(prime_type(toy4, c, p) == PrimeType::typeII);
  auto dir = classify_direction(toy4, c);
  std::mt19937_64 rng(6);
  int vanish = 0, nonvanish = 0;
  for (int t = 0; t < 30; ++t) {
    VecZ u = random_u(rng, 4, -20, 20);
    i64 last = dir.last_coordinate(u);
    auto s = s_qdc_fast(toy4, p, 1, c, u);
    if (last % p != 0) {
      CHECK(std::abs(s.value) < 1e-6 * std::pow(double(p), 0.5 * 4 + 1.0));
      ++vanish;
    } else if (std::abs(s.value) > 1.0) {
      ++nonvanish;
    }
  }
  CHECK(vanish >= 10);
}

TEST_CASE("good primes for bad c vanish unless p^k divides the last coordinate") {
  QuadraticPair toy4 = load("toy4.json");
  Vec2i c{2, -1};  // bad: pencil coordinate 1 has ratio (1 : 2)
  REQUIRE_FALSE(classify_direction(toy4, c).good);
  auto dir = classify_direction(toy4, c);
  i64 p = 11;
  REQUIRE_FALSE(toy4.df_divisible_by(p));
  std::mt19937_64 rng(7);
  int vanish = 0;
  for (int t = 0; t < 20; ++t) {
    VecZ u = random_u(rng, 4, -20, 20);
    if (dir.last_coordinate(u) % p == 0) continue;
    auto s = s_qdc_fast(toy4, p, 1, c, u);
    CHECK(std::abs(s.value) < 1e-6 * std::pow(double(p), 0.5 * 4 + 1.0));
    ++vanish;
  }
  CHECK(vanish >= 10);
}

TEST_CASE("partial sums of S_{q,c} (diagnostic, nothing conditional asserted)") {
  QuadraticPair toy5 = load("toy5.json");
  Vec2i c{1, 2};
  VecZ u(5);
  u << 1, 0, 2, -1, 1;
  i64 b = 2 * i64(det_exact(toy5.hc(c)) / 32);  // 2 det M_c
  auto pts = partial_sum_S(toy5, c, u, 60, b, 10);
  REQUIRE(!pts.empty());
  CHECK(pts.front().x >= 1.0);
  for (auto& pt : pts) CHECK(std::isfinite(pt.ratio));
  // x = 1 base case
  auto first = partial_sum_S(toy5, c, u, 1, b, 1);
  CHECK(first.back().sum == cplx{1.0, 0.0});
}

TEST_CASE("roots of unity table symmetry") {
  for (i64 q : {2, 3, 4, 8, 12, 17}) {
    auto rou = RootsOfUnity::get(q);
    for (i64 m = 0; m < q; ++m) {
      CHECK(std::abs((*rou)(m) - std::conj((*rou)(q - m))) == 0.0);  // exact pairing
      CHECK(std::abs((*rou)(m + q) - (*rou)(m)) == 0.0);             // index reduction
    }
  }
}
