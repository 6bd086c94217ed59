#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "delta2d/errors.hpp"

namespace delta2d {

using i64 = std::int64_t;
using i128 = __int128_t;
using cplx = std::complex<double>;

using MatZ = Eigen::Matrix<i64, Eigen::Dynamic, Eigen::Dynamic>;
using VecZ = Eigen::Matrix<i64, Eigen::Dynamic, 1>;

// ---------------------------------------------------------------------------
// Checked integer arithmetic
// ---------------------------------------------------------------------------

inline i64 add_checked(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("i64 add overflow");
  return r;
}

inline i64 mul_checked(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("i64 mul overflow");
  return r;
}

inline i128 add_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw overflow_error("i128 add overflow");
  return r;
}

inline i128 mul_checked(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw overflow_error("i128 mul overflow");
  return r;
}

inline i64 narrow_checked(i128 v) {
  if (v > i128(INT64_MAX) || v < i128(INT64_MIN)) throw overflow_error("i128 -> i64 narrowing");
  return static_cast<i64>(v);
}

std::string to_string_i128(i128 v);

// ---------------------------------------------------------------------------
// Elementary number theory
// ---------------------------------------------------------------------------

inline i64 gcd_i64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// g = gcd(a,b) together with x,y solving a*x + b*y = g.
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);

// Representative in [0, m).
inline i64 mod_pos(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

inline i64 mod_pos(i128 a, i64 m) {
  i128 r = a % m;
  return static_cast<i64>(r < 0 ? r + m : r);
}

inline i64 mulmod(i64 a, i64 b, i64 m) { return mod_pos(i128(a) * i128(b), m); }

i64 powmod(i64 base, i64 exp, i64 m);

// Inverse of a modulo m; requires gcd(a,m)=1.
i64 inv_mod(i64 a, i64 m);

bool is_prime(i64 n);

// Largest k with p^k | n (n != 0).
int valuation(i64 n, i64 p);

struct Factorization {
  // (prime, exponent), primes strictly increasing.
  std::vector<std::pair<i64, int>> factors;

  i64 value() const {
    i64 v = 1;
    for (auto [p, e] : factors)
      for (int i = 0; i < e; ++i) v = mul_checked(v, p);
    return v;
  }
};

// Deterministic trial division with a 2-3-5 wheel; n >= 1, desk scale.
Factorization factorize(i64 n);

// Pairwise coprime prime powers with product q.
std::vector<i64> crt_decompose(i64 q);

i64 euler_phi(i64 n);
int moebius(i64 n);
std::vector<i64> divisors(i64 n);

// Legendre symbol (a|p); rejects p even or composite.
int legendre_symbol(i64 a, i64 p);

// ---------------------------------------------------------------------------
// 2-vectors
// ---------------------------------------------------------------------------

struct Vec2i {
  i64 x = 0;
  i64 y = 0;

  constexpr Vec2i() = default;
  constexpr Vec2i(i64 xx, i64 yy) : x(xx), y(yy) {}

  // perp((x,y)) = (y,-x), so v . perp(v) = 0 and perp(perp(v)) = -v.
  constexpr Vec2i perp() const { return {y, -x}; }
  constexpr Vec2i operator-() const { return {-x, -y}; }
  constexpr Vec2i operator+(const Vec2i& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2i operator-(const Vec2i& o) const { return {x - o.x, y - o.y}; }
  constexpr bool operator==(const Vec2i& o) const { return x == o.x && y == o.y; }
  constexpr bool operator!=(const Vec2i& o) const { return !(*this == o); }
  // Lexicographic (x, then y).
  constexpr bool operator<(const Vec2i& o) const { return x != o.x ? x < o.x : y < o.y; }

  i64 dot(const Vec2i& o) const { return add_checked(mul_checked(x, o.x), mul_checked(y, o.y)); }
  i64 content() const { return gcd_i64(x, y); }
  bool is_zero() const { return x == 0 && y == 0; }
  bool primitive() const { return content() == 1; }
  double norm() const;
  i64 norm2() const { return dot(*this); }
};

inline Vec2i operator*(i64 k, const Vec2i& v) { return {mul_checked(k, v.x), mul_checked(k, v.y)}; }

// ---------------------------------------------------------------------------
// Exact integer matrices
// ---------------------------------------------------------------------------

// Exact determinant by fraction-free (Bareiss) elimination in 128 bits.
i128 det_exact(const MatZ& m);

// adj(M) with M * adj(M) = det(M) * I exactly.
MatZ adjugate(const MatZ& m);

// Inverse of a unimodular matrix (|det| = 1), exact.
MatZ unimodular_inverse(const MatZ& m);

struct SmithResult {
  MatZ t;  // unimodular
  MatZ d;  // diagonal, d_1 | d_2 | ... , entries >= 0, zeros last
  MatZ s;  // unimodular
};

// T * D * S = M. Pivot = minimal nonzero absolute value, ties broken by
// lowest (row, col), so the output is reproducible.
SmithResult smith_normal_form(const MatZ& m);

}  // namespace delta2d
