#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "delta2d/arith.hpp"

namespace delta2d {

using BigInt = boost::multiprecision::cpp_int;

enum class PrimeType { bad_prime, good_for_bad_c, typeI, typeII };
enum class ScreenResult { pass, fail, inconclusive };

// A pair of integral quadratic forms F_i(x) = (1/2) x^T H_i x. The Hessians
// H_i are symmetric with even diagonal so every F_i(x) is an integer. When
// every entry of H_i is even, M_i = H_i / 2 is itself integral (all fixtures
// are of this kind); otherwise formulas stated for M_c are computed on
// H_c = 2 M_c with the 2-power exponents tracked.
class QuadraticPair {
 public:
  QuadraticPair(MatZ h1, MatZ h2);

  static QuadraticPair from_json_text(const std::string& text);
  static QuadraticPair from_json_file(const std::string& path);
  std::string to_json_text() const;

  int s() const { return s_; }
  const MatZ& h1() const { return h1_; }
  const MatZ& h2() const { return h2_; }
  bool diagonal() const { return diagonal_; }
  bool even_h() const { return even_h_; }

  i64 eval_f1(const VecZ& x) const { return eval_half_h(h1_, x); }
  i64 eval_f2(const VecZ& x) const { return eval_half_h(h2_, x); }
  MatZ hc(const Vec2i& c) const;

  // Coefficients a_0..a_s of det(x H1 + y H2) = sum_i a_i x^{s-i} y^i.
  const std::vector<BigInt>& pencil_form_coeffs() const;

  // det(H_c) = det(c1 H1 + c2 H2), exact at any scale.
  BigInt pencil_value(const Vec2i& c) const;

  // Unit-normalized complex pairs (lambda_j, mu_j), one per pencil factor.
  const std::vector<std::pair<std::complex<double>, std::complex<double>>>& pencil_roots() const;

  // All bad primitive directions, sign-canonical, sorted.
  const std::vector<Vec2i>& bad_directions() const;

  // Divisibility of D_F = 2 Disc(det(x M1 + y M2)) at a prime. p = 2 always
  // divides; odd p is decided on the integer form det(x H1 + y H2).
  bool df_divisible_by(i64 p) const;
  bool df_nonzero() const;

  static i64 eval_half_h(const MatZ& h, const VecZ& x);

 private:
  int s_;
  MatZ h1_, h2_;
  bool diagonal_;
  bool even_h_;

  mutable std::mutex cache_mutex_;
  mutable std::vector<BigInt> pencil_coeffs_;
  mutable std::vector<std::pair<std::complex<double>, std::complex<double>>> roots_;
  mutable bool roots_built_ = false;
  mutable std::vector<Vec2i> bad_c_;
  mutable bool bad_c_built_ = false;
  mutable int df_sign_ = 2;  // 2 = unknown, otherwise -1/0/+1 (sign only used as zero test)
};

struct DirectionData {
  Vec2i c;
  MatZ hc;        // c1 H1 + c2 H2
  i128 det_hc = 0;
  bool good = false;  // det M_c != 0
  SmithResult smith;  // of H_c: T D S = H_c
  MatZ y_basis;       // S^{-1}; column j is y_j
  VecZ rho;           // diagonal of D

  // ((S^{-1})^T u)_s = y_s . u
  i64 last_coordinate(const VecZ& u) const;
  // projection of u onto span{y_1..y_{s-1}} along y_s; integral for integral u
  VecZ project(const VecZ& u) const;
};

// Rejects non-primitive c.
DirectionData classify_direction(const QuadraticPair& pair, const Vec2i& c);

// F*_c(u) = det(M_c) u^T M_c^{-1} u = u^T adj(M_c) u, evaluated through the
// adjugate. gram = adj(M_c) when M_c is integral, else adj(H_c) with
// denom_pow2 = s - 1. Rejects bad c.
struct DualForm {
  MatZ gram;
  int denom_pow2 = 0;

  // u^T gram u (numerator; divide by 2^denom_pow2 for F*_c(u))
  i128 eval_num(const VecZ& u) const;
  // exact integer value; throws if the 2-power does not divide
  i128 eval_exact(const VecZ& u) const;
  // F*_c(u) mod m for odd m
  i64 eval_mod(const VecZ& u, i64 m) const;
  // p-adic valuation of F*_c(u) at odd p (u with nonzero value)
  int valuation_at(const VecZ& u, i64 p) const;
};

DualForm dual_form(const QuadraticPair& pair, const Vec2i& c);

// The dual-variety polynomial evaluated at u: discriminant in c of the
// degree-(s-1) binary form c -> F*_c(u), exact up to the global unit /
// power-of-content normalization recorded in the pair-independent constant
// below. Rejects s < 4.
BigInt dual_variety_value(const QuadraticPair& pair, const VecZ& u);

// Same value reduced mod an odd prime p (cheap; no big intermediates).
i64 dual_variety_mod(const QuadraticPair& pair, const VecZ& u, i64 p);

struct RestrictedForm {
  MatZ q_gram;       // Hessian of Q_c in y-coordinates, (s-1) x (s-1)
  MatZ q_dual_gram;  // adjugate of q_gram
  MatZ y_basis;      // S^{-1}
  VecZ y_last;       // y_s

  i64 eval_q(const VecZ& yprime) const { return QuadraticPair::eval_half_h(q_gram, yprime); }
};

// Requires rank(M_c) >= s-1 (at most one zero invariant factor).
RestrictedForm restricted_form_and_dual(const QuadraticPair& pair, const Vec2i& c);

PrimeType prime_type(const QuadraticPair& pair, const Vec2i& c, i64 p);

// min_j |(lambda_j, mu_j) . w| / |w| over the unit-normalized pencil roots.
double lambda_w(const QuadraticPair& pair, double w1, double w2);

ScreenResult nonsingularity_screen(const QuadraticPair& pair, int trials, uint64_t seed = 0);

}  // namespace delta2d
