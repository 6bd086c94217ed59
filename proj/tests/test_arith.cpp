#include <doctest.h>

#include <random>
#include <set>

#include "delta2d/arith.hpp"

using namespace delta2d;

namespace {

MatZ diag2(i64 a, i64 b) {
  MatZ m = MatZ::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

void check_smith(const MatZ& m) {
  auto r = smith_normal_form(m);
  CHECK(MatZ(r.t * r.d * r.s) == m);
  i128 dt = det_exact(r.t), ds = det_exact(r.s);
  CHECK((dt == 1 || dt == -1));
  CHECK((ds == 1 || ds == -1));
  const int n = int(m.rows());
  bool zeros_started = false;
  for (int i = 0; i < n; ++i) {
    CHECK(r.d(i, i) >= 0);
    for (int j = 0; j < n; ++j)
      if (i != j) CHECK(r.d(i, j) == 0);
    if (r.d(i, i) == 0) zeros_started = true;
    if (zeros_started) CHECK(r.d(i, i) == 0);
    if (i + 1 < n && r.d(i + 1, i + 1) != 0) CHECK(r.d(i + 1, i + 1) % r.d(i, i) == 0);
  }
}

}  // namespace

TEST_CASE("smith normal form examples") {
  auto r = smith_normal_form(diag2(2, 3));
  CHECK(r.d(0, 0) == 1);
  CHECK(r.d(1, 1) == 6);
  check_smith(diag2(2, 3));

  auto r2 = smith_normal_form(diag2(4, 6));
  CHECK(r2.d(0, 0) == 2);
  CHECK(r2.d(1, 1) == 12);

  for (int s : {1, 2, 3, 5}) {
    MatZ id = MatZ::Identity(s, s);
    auto ri = smith_normal_form(id);
    CHECK(ri.d == id);
    CHECK(ri.t == id);
    CHECK(ri.s == id);
  }
}

TEST_CASE("smith normal form on 200 random matrices") {
  std::mt19937_64 rng(0);
  std::uniform_int_distribution<i64> entry(-9, 9);
  std::uniform_int_distribution<int> size(1, 6);
  for (int t = 0; t < 200; ++t) {
    int n = size(rng);
    MatZ m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    check_smith(m);
  }
}

TEST_CASE("legendre symbol") {
  CHECK(legendre_symbol(1, 7) == 1);
  CHECK(legendre_symbol(3, 7) == -1);  // squares mod 7 are {1, 2, 4}
  std::set<i64> squares;
  for (i64 x = 1; x < 7; ++x) squares.insert(x * x % 7);
  CHECK(squares == std::set<i64>{1, 2, 4});
  CHECK(legendre_symbol(14, 7) == 0);
  CHECK_THROWS_AS(legendre_symbol(1, 2), validation_error);
  CHECK_THROWS_AS(legendre_symbol(1, 9), validation_error);

  for (i64 p : {3, 5, 7, 11, 13})
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b)
        CHECK(legendre_symbol(a, p) * legendre_symbol(b, p) == legendre_symbol(a * b, p));
}

TEST_CASE("factorize") {
  CHECK(factorize(1).factors.empty());
  auto f12 = factorize(12);
  REQUIRE(f12.factors.size() == 2);
  CHECK(f12.factors[0] == std::pair<i64, int>{2, 2});
  CHECK(f12.factors[1] == std::pair<i64, int>{3, 1});
  auto fp = factorize(9973);
  REQUIRE(fp.factors.size() == 1);
  CHECK(fp.factors[0].first == 9973);
  bool prime = true;
  for (i64 d = 2; d * d <= 9973; ++d)
    if (9973 % d == 0) prime = false;
  CHECK(prime);
  CHECK_THROWS_AS(factorize(0), validation_error);

  i64 bad = 0;
  for (i64 n = 1; n <= 1000000; ++n)
    if (factorize(n).value() != n) {
      bad = n;
      break;
    }
  CHECK(bad == 0);
}

TEST_CASE("crt decompose") {
  CHECK(crt_decompose(60) == std::vector<i64>{4, 3, 5});
  CHECK(crt_decompose(1).empty());
  CHECK(crt_decompose(49) == std::vector<i64>{49});
}

TEST_CASE("vec2 identities") {
  Vec2i v{3, -4};
  CHECK(v.dot(v.perp()) == 0);
  CHECK(v.perp().perp() == -v);
  CHECK(v.content() == 1);
  CHECK(Vec2i{6, -4}.content() == 2);
  CHECK(Vec2i{0, 0}.content() == 0);
}

TEST_CASE("adjugate and determinant") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<i64> entry(-9, 9);
  for (int t = 0; t < 50; ++t) {
    int n = 1 + int(rng() % 5);
    MatZ m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entry(rng);
    i128 det = det_exact(m);
    MatZ adj = adjugate(m);
    MatZ prod = m * adj;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(i128(prod(i, j)) == (i == j ? det : i128(0)));
  }
}

TEST_CASE("checked arithmetic traps overflow") {
  CHECK_THROWS_AS(mul_checked(i64(1) << 62, i64(4)), overflow_error);
  CHECK(mul_checked(i64(1) << 30, i64(2)) == (i64(1) << 31));
  CHECK_THROWS_AS(narrow_checked(i128(1) << 100), overflow_error);
}

TEST_CASE("euler phi, moebius, divisors") {
  CHECK(euler_phi(1) == 1);
  CHECK(euler_phi(12) == 4);
  CHECK(moebius(1) == 1);
  CHECK(moebius(6) == 1);
  CHECK(moebius(12) == 0);
  CHECK(moebius(30) == -1);
  CHECK(divisors(12) == std::vector<i64>{1, 2, 3, 4, 6, 12});
}
