#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/quadpair.hpp"

namespace delta2d {

enum class Provenance { brute, multiplicative, closed_form };

// D_q(u) and S_{q,dc}(u) are real (terms pair up under (a,b) -> (-a,-b));
// imag_residual records the numerically accumulated imaginary part.
struct ExpSumValue {
  cplx value{0.0, 0.0};
  Provenance provenance = Provenance::brute;
  i64 modulus = 1;
  double imag_residual = 0.0;
};

// e_q(m) from a per-q table of q-th roots of unity with exact integer index
// reduction; the table is built conjugate-symmetric so pairing is sharp.
class RootsOfUnity {
 public:
  explicit RootsOfUnity(i64 q);
  i64 q() const { return q_; }
  cplx operator()(i64 m) const { return tab_[mod_pos(m, q_)]; }
  cplx at_reduced(i64 m) const { return tab_[m]; }

  static std::shared_ptr<const RootsOfUnity> get(i64 q);  // process-wide cache

 private:
  i64 q_;
  std::vector<cplx> tab_;
};

// sum_{b mod q} e_q(b^T A b + v . b), A symmetric integer. Odd prime powers
// by iterative completion of squares with closed-form 1D Gauss sums; the
// 2-power block by direct summation under a term budget.
cplx quad_complete_sum(i64 q, const MatZ& a, const VecZ& v);

// Literal sums. Non-diagonal pairs pay q^{s+2} terms (budget-guarded);
// diagonal pairs use the exact per-coordinate factorization of the b-sum.
ExpSumValue dq_brute(const QuadraticPair& pair, i64 q, const VecZ& u,
                     i64 max_terms = 200000000);
ExpSumValue s_qdc_brute(const QuadraticPair& pair, i64 q, i64 d, const Vec2i& c, const VecZ& u,
                        i64 max_terms = 200000000);

// CRT over prime powers; per p^k the a-loop runs over primitive pairs and
// the b-sum goes through quad_complete_sum (or 1D closed forms for diagonal
// pairs).
ExpSumValue dq_fast(const QuadraticPair& pair, i64 q, const VecZ& u);

// CRT factorization S_{q1q2, d1d2 c} = S_{q1,d1 c} S_{q2,d2 c}; Type I prime
// powers (p odd, p coprime to 2 det M_c) take the Ramanujan/Gauss closed
// form, everything else falls back to complete-sum evaluation.
ExpSumValue s_qdc_fast(const QuadraticPair& pair, i64 q, i64 d, const Vec2i& c, const VecZ& u);

// Ramanujan sum c_q(a), exact integer.
i64 ramanujan_sum(i64 q, i64 a);

// g_{p^k}(a) = sum_x chi_p(x) e_{p^k}(a x); rejects p = 2.
cplx gauss_char_sum(i64 p, int k, i64 a);

// Partial sums sum_{q <= x, (q,B)=1} S_{q,c}(u) together with the normalized
// ratio |sum| / x^{s/2+1}; diagnostic only, no conditional bound asserted.
struct PartialSumPoint {
  double x;
  cplx sum;
  double ratio;
};
std::vector<PartialSumPoint> partial_sum_S(const QuadraticPair& pair, const Vec2i& c,
                                           const VecZ& u, i64 x_max, i64 coprime_to,
                                           i64 stride = 1);

// Shared brute engine: the full table T[a1][a2] = sum_b e_q(a1 F1 + a2 F2 + u.b)
// for one (pair, q, u); lets oracle sweeps reuse the b-sum across many (d, c).
class DqBruteTable {
 public:
  DqBruteTable(const QuadraticPair& pair, i64 q, const VecZ& u, i64 max_terms = 200000000);
  cplx dq() const;                              // primitive a only
  cplx sqdc(i64 d, const Vec2i& c) const;       // adds the q | d c.perp(a) constraint
  cplx at(i64 a1, i64 a2) const { return tab_[size_t(a1) * q_ + a2]; }

 private:
  i64 q_;
  std::vector<cplx> tab_;
};

}  // namespace delta2d
