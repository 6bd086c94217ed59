#include "delta2d/expsum.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <unordered_map>

namespace delta2d {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

cplx epsilon_p(i64 p) {
  return (p % 4 == 1) ? cplx{1.0, 0.0} : cplx{0.0, 1.0};
}

cplx i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

// epsilon(p)^n exactly.
cplx epsilon_pow(i64 p, int n) { return (p % 4 == 1) ? cplx{1.0, 0.0} : i_pow(n); }

i64 pow_i64(i64 b, int e) {
  i64 r = 1;
  for (int i = 0; i < e; ++i) r = mul_checked(r, b);
  return r;
}

// G(a; p^j) = sum_x e_{p^j}(a x^2), p odd, gcd(a,p) = 1.
cplx gauss_quad_unit(i64 p, int j, i64 a) {
  if (j == 0) return {1.0, 0.0};
  double half = std::pow(double(p), 0.5 * j);
  if (j % 2 == 0) return {half, 0.0};
  return half * double(legendre_symbol(a, p)) * epsilon_p(p);
}

// sum_{x mod p^k} e_{p^k}(A x^2 + B x), p odd.
cplx one_dim_quad_sum_odd(i64 p, int k, i64 A, i64 B) {
  i64 q = pow_i64(p, k);
  A = mod_pos(A, q);
  B = mod_pos(B, q);
  if (A == 0) return B == 0 ? cplx{double(q), 0.0} : cplx{0.0, 0.0};
  int m = valuation(A, p);
  if (B % pow_i64(p, m) != 0) return {0.0, 0.0};
  int j = k - m;
  i64 pj = pow_i64(p, j);
  i64 a1 = (A / pow_i64(p, m)) % pj;
  i64 b1 = (B / pow_i64(p, m)) % pj;
  // complete the square: e_{p^j}(-inv(4 a1) b1^2) G(a1; p^j)
  i64 inv4a = inv_mod(mulmod(4 % pj, a1, pj), pj);
  i64 phase = mod_pos(-i128(inv4a) * mulmod(b1, b1, pj), pj);
  cplx e = (*RootsOfUnity::get(pj))(phase);
  return double(pow_i64(p, m)) * e * gauss_quad_unit(p, j, a1);
}

// Recursive completion of squares for sum_{b mod p^k} e_{p^k}(b^T A b + v.b),
// p odd, A symmetric with entries reduced mod p^k.
cplx complete_square_sum_odd(i64 p, int k, std::vector<std::vector<i64>> a, std::vector<i64> v) {
  const i64 q = pow_i64(p, k);
  cplx total{1.0, 0.0};
  while (!a.empty()) {
    const int n = int(a.size());
    // locate minimal-valuation entry, diagonal preferred, lowest index
    int best_val = k + 1, bi = -1, bj = -1;
    for (int i = 0; i < n; ++i)
      if (a[i][i] != 0) {
        int m = valuation(a[i][i], p);
        if (m < best_val) {
          best_val = m;
          bi = bj = i;
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (a[i][j] != 0) {
          int m = valuation(a[i][j], p);
          if (m < best_val) {
            best_val = m;
            bi = i;
            bj = j;
          }
        }
    if (bi < 0) {
      // A == 0: pure character sum
      for (int i = 0; i < n; ++i)
        if (v[i] % q != 0) return {0.0, 0.0};
      return total * std::pow(double(q), n);
    }
    if (bi != bj) {
      // fold column bj into bi so the diagonal picks up the low valuation
      for (int t = 0; t < n; ++t) a[bi][t] = mod_pos(a[bi][t] + a[bj][t], q);
      for (int t = 0; t < n; ++t) a[t][bi] = mod_pos(a[t][bi] + a[t][bj], q);
      v[bi] = mod_pos(v[bi] + v[bj], q);
    }
    if (bi != 0) {
      std::swap(a[0], a[bi]);
      for (int t = 0; t < n; ++t) std::swap(a[t][0], a[t][bi]);
      std::swap(v[0], v[bi]);
    }
    i64 alpha = a[0][0];
    int m = valuation(alpha, p);
    i64 pm = pow_i64(p, m);
    i64 alpha_unit = (alpha / pm) % q;
    cplx factor = one_dim_quad_sum_odd(p, k, alpha, v[0]);
    if (factor == cplx{0.0, 0.0}) return {0.0, 0.0};
    total *= factor;
    if (n == 1) return total;
    i64 inv_alpha = inv_mod(alpha_unit, q);
    std::vector<i64> beta(n - 1);
    for (int i = 1; i < n; ++i) beta[i - 1] = (a[0][i] / pm) % q;  // divisible: pivot is minimal
    std::vector<std::vector<i64>> c(n - 1, std::vector<i64>(n - 1));
    for (int i = 1; i < n; ++i)
      for (int j = 1; j < n; ++j) {
        i64 corr = mulmod(mulmod(pm % q, inv_alpha, q), mulmod(beta[i - 1], beta[j - 1], q), q);
        c[i - 1][j - 1] = mod_pos(a[i][j] - corr, q);
      }
    std::vector<i64> v2(n - 1);
    for (int i = 1; i < n; ++i)
      v2[i - 1] = mod_pos(v[i] - mulmod(mulmod(v[0], inv_alpha, q), beta[i - 1], q), q);
    a = std::move(c);
    v = std::move(v2);
  }
  return total;
}

// Direct 1D sum over x mod q (any q); used at p = 2 and by oracles.
cplx one_dim_direct(const RootsOfUnity& rou, i64 A, i64 B) {
  i64 q = rou.q();
  cplx s{0.0, 0.0};
  for (i64 x = 0; x < q; ++x) {
    i64 ph = mod_pos(mulmod(mod_pos(A, q), mulmod(x, x, q), q) + mulmod(mod_pos(B, q), x, q), q);
    s += rou.at_reduced(ph);
  }
  return s;
}

// b-sum for one coefficient pair (a1, a2) at modulus p^k.
cplx bsum_prime_power(const QuadraticPair& pair, i64 p, int k, i64 a1, i64 a2, const VecZ& u) {
  const i64 q = pow_i64(p, k);
  const int s = pair.s();
  auto rou = RootsOfUnity::get(q);
  if (pair.diagonal()) {
    cplx prod{1.0, 0.0};
    for (int j = 0; j < s; ++j) {
      i64 gamma = mod_pos(mulmod(mod_pos(a1, q), mod_pos(pair.h1()(j, j) / 2, q), q) +
                              mulmod(mod_pos(a2, q), mod_pos(pair.h2()(j, j) / 2, q), q),
                          q);
      cplx f = (p == 2) ? one_dim_direct(*rou, gamma, u(j))
                        : one_dim_quad_sum_odd(p, k, gamma, u(j));
      prod *= f;
      if (prod == cplx{0.0, 0.0}) return prod;
    }
    return prod;
  }
  if (p != 2) {
    i64 inv2 = inv_mod(2, q);
    std::vector<std::vector<i64>> A(s, std::vector<i64>(s));
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) {
        i64 hij = mod_pos(mulmod(mod_pos(a1, q), mod_pos(pair.h1()(i, j), q), q) +
                              mulmod(mod_pos(a2, q), mod_pos(pair.h2()(i, j), q), q),
                          q);
        A[i][j] = mulmod(inv2, hij, q);
      }
    std::vector<i64> v(s);
    for (int i = 0; i < s; ++i) v[i] = mod_pos(u(i), q);
    return complete_square_sum_odd(p, k, std::move(A), std::move(v));
  }
  // 2-power, non-diagonal: literal loop with a term budget
  double terms = std::pow(double(q), s);
  if (terms > 4.2e6) throw budget_error("2-power block too large for direct summation");
  VecZ b = VecZ::Zero(s);
  cplx acc{0.0, 0.0};
  for (;;) {
    i64 f1 = mod_pos(pair.eval_f1(b), q), f2 = mod_pos(pair.eval_f2(b), q);
    i64 ub = 0;
    for (int i = 0; i < s; ++i) ub = mod_pos(ub + mulmod(mod_pos(u(i), q), b(i), q), q);
    i64 ph = mod_pos(mulmod(mod_pos(a1, q), f1, q) + mulmod(mod_pos(a2, q), f2, q) + ub, q);
    acc += rou->at_reduced(ph);
    int pos = 0;
    while (pos < s && ++b(pos) == q) b(pos++) = 0;
    if (pos == s) break;
  }
  return acc;
}

// D_{p^k}(u): loop over primitive pairs a mod p^k.
cplx dq_prime_power(const QuadraticPair& pair, i64 p, int k, const VecZ& u) {
  const i64 q = pow_i64(p, k);
  cplx acc{0.0, 0.0};
  for (i64 a1 = 0; a1 < q; ++a1)
    for (i64 a2 = 0; a2 < q; ++a2) {
      if (a1 % p == 0 && a2 % p == 0) continue;
      acc += bsum_prime_power(pair, p, k, a1, a2, u);
    }
  return acc;
}

// c_{p^k}(a) from the valuation of a (a given mod p^k; nu >= k means a = 0).
double ramanujan_pk(i64 p, int k, int nu) {
  if (nu >= k) return double(pow_i64(p, k - 1)) * double(p - 1);
  if (nu == k - 1) return -double(pow_i64(p, k - 1));
  return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------
// RootsOfUnity
// ---------------------------------------------------------------------------

RootsOfUnity::RootsOfUnity(i64 q) : q_(q), tab_(size_t(q)) {
  if (q < 1) throw validation_error("RootsOfUnity: q >= 1 required");
  tab_[0] = {1.0, 0.0};
  for (i64 m = 1; 2 * m <= q; ++m) {
    if (4 * m == q)
      tab_[m] = {0.0, 1.0};
    else if (2 * m == q)
      tab_[m] = {-1.0, 0.0};
    else
      tab_[m] = {std::cos(kTwoPi * double(m) / double(q)),
                 std::sin(kTwoPi * double(m) / double(q))};
  }
  for (i64 m = q / 2 + 1; m < q; ++m) tab_[m] = std::conj(tab_[q - m]);
}

std::shared_ptr<const RootsOfUnity> RootsOfUnity::get(i64 q) {
  static std::mutex mu;
  static std::map<i64, std::shared_ptr<const RootsOfUnity>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(q);
  if (it != cache.end()) return it->second;
  auto ptr = std::make_shared<const RootsOfUnity>(q);
  cache.emplace(q, ptr);
  return ptr;
}

// ---------------------------------------------------------------------------
// Complete sums
// ---------------------------------------------------------------------------

cplx quad_complete_sum(i64 q, const MatZ& a, const VecZ& v) {
  if (q < 1) throw validation_error("quad_complete_sum: q >= 1 required");
  if (a.rows() != a.cols() || a.rows() != v.size())
    throw validation_error("quad_complete_sum: dimension mismatch");
  if (q == 1) return {1.0, 0.0};
  const int s = int(a.rows());
  cplx total{1.0, 0.0};
  for (i64 pk : crt_decompose(q)) {
    i64 p = factorize(pk).factors[0].first;
    int k = factorize(pk).factors[0].second;
    i64 ci = inv_mod((q / pk) % pk, pk);
    if (p != 2) {
      std::vector<std::vector<i64>> am(s, std::vector<i64>(s));
      for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) am[i][j] = mulmod(ci, mod_pos(a(i, j), pk), pk);
      std::vector<i64> vm(s);
      for (int i = 0; i < s; ++i) vm[i] = mulmod(ci, mod_pos(v(i), pk), pk);
      total *= complete_square_sum_odd(p, k, std::move(am), std::move(vm));
    } else {
      double terms = std::pow(double(pk), s);
      if (terms > 4.2e6) throw budget_error("quad_complete_sum: 2-power block over budget");
      auto rou = RootsOfUnity::get(pk);
      VecZ b = VecZ::Zero(s);
      cplx acc{0.0, 0.0};
      for (;;) {
        i128 ph = 0;
        for (int i = 0; i < s; ++i) {
          ph += i128(mod_pos(a(i, i), pk)) * mulmod(b(i), b(i), pk);
          for (int j = i + 1; j < s; ++j) ph += i128(2) * mod_pos(a(i, j), pk) * mulmod(b(i), b(j), pk);
          ph += i128(mod_pos(v(i), pk)) * b(i);
        }
        acc += rou->at_reduced(mulmod(ci, mod_pos(ph, pk), pk));
        int pos = 0;
        while (pos < s && ++b(pos) == pk) b(pos++) = 0;
        if (pos == s) break;
      }
      total *= acc;
    }
  }
  return total;
}

// ---------------------------------------------------------------------------
// Brute sums
// ---------------------------------------------------------------------------

DqBruteTable::DqBruteTable(const QuadraticPair& pair, i64 q, const VecZ& u, i64 max_terms)
    : q_(q), tab_(size_t(q) * q, cplx{0.0, 0.0}) {
  double cost = std::pow(double(q), pair.s() + 2);
  if (cost > double(max_terms)) throw budget_error("dq brute table: q^(s+2) over budget");
  auto rou = RootsOfUnity::get(q);
  const int s = pair.s();
  VecZ b = VecZ::Zero(s);
  for (;;) {
    i64 f1 = mod_pos(pair.eval_f1(b), q), f2 = mod_pos(pair.eval_f2(b), q);
    i64 ub = 0;
    for (int i = 0; i < s; ++i) ub = mod_pos(ub + mulmod(mod_pos(u(i), q), b(i), q), q);
    for (i64 a1 = 0; a1 < q; ++a1) {
      i64 base = mod_pos(mulmod(a1, f1, q) + ub, q);
      for (i64 a2 = 0; a2 < q; ++a2) {
        tab_[size_t(a1) * q + a2] += rou->at_reduced(base);
        base += f2;
        if (base >= q) base -= q;
      }
    }
    int pos = 0;
    while (pos < s && ++b(pos) == q) b(pos++) = 0;
    if (pos == s) break;
  }
}

cplx DqBruteTable::dq() const {
  cplx acc{0.0, 0.0};
  for (i64 a1 = 0; a1 < q_; ++a1)
    for (i64 a2 = 0; a2 < q_; ++a2)
      if (std::gcd(std::gcd(a1, a2), q_) == 1) acc += at(a1, a2);
  return acc;
}

cplx DqBruteTable::sqdc(i64 d, const Vec2i& c) const {
  cplx acc{0.0, 0.0};
  for (i64 a1 = 0; a1 < q_; ++a1)
    for (i64 a2 = 0; a2 < q_; ++a2) {
      if (std::gcd(std::gcd(a1, a2), q_) != 1) continue;
      i64 cross = mod_pos(mulmod(mod_pos(d, q_), mod_pos(c.x * a2 - c.y * a1, q_), q_), q_);
      if (cross == 0) acc += at(a1, a2);
    }
  return acc;
}

namespace {

// Literal diagonal b-sum: product of direct 1D sums, memoized per (gamma, B).
class DiagonalDirectBSum {
 public:
  DiagonalDirectBSum(const QuadraticPair& pair, i64 q)
      : pair_(pair), q_(q), rou_(RootsOfUnity::get(q)), memo_(size_t(q) * q) {}

  cplx operator()(i64 a1, i64 a2, const VecZ& u) {
    cplx prod{1.0, 0.0};
    for (int j = 0; j < pair_.s(); ++j) {
      i64 gamma = mod_pos(mulmod(mod_pos(a1, q_), mod_pos(pair_.h1()(j, j) / 2, q_), q_) +
                              mulmod(mod_pos(a2, q_), mod_pos(pair_.h2()(j, j) / 2, q_), q_),
                          q_);
      prod *= lookup(gamma, mod_pos(u(j), q_));
      if (prod == cplx{0.0, 0.0}) break;
    }
    return prod;
  }

 private:
  cplx lookup(i64 g, i64 b) {
    auto& slot = memo_[size_t(g) * q_ + b];
    if (!slot.second) {
      slot.first = one_dim_direct(*rou_, g, b);
      slot.second = true;
    }
    return slot.first;
  }

  const QuadraticPair& pair_;
  i64 q_;
  std::shared_ptr<const RootsOfUnity> rou_;
  std::vector<std::pair<cplx, bool>> memo_;
};

ExpSumValue finish(cplx v, Provenance pr, i64 q) {
  ExpSumValue out;
  out.value = v;
  out.provenance = pr;
  out.modulus = q;
  out.imag_residual = std::abs(v.imag());
  return out;
}

}  // namespace

ExpSumValue dq_brute(const QuadraticPair& pair, i64 q, const VecZ& u, i64 max_terms) {
  if (q < 1) throw validation_error("dq_brute: q >= 1 required");
  if (q == 1) return finish({1.0, 0.0}, Provenance::brute, 1);
  if (pair.diagonal()) {
    double cost = double(q) * q * pair.s() * q;
    if (cost > double(max_terms)) throw budget_error("dq_brute: diagonal budget exceeded");
    DiagonalDirectBSum bsum(pair, q);
    cplx acc{0.0, 0.0};
    for (i64 a1 = 0; a1 < q; ++a1)
      for (i64 a2 = 0; a2 < q; ++a2) {
        if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
        acc += bsum(a1, a2, u);
      }
    return finish(acc, Provenance::brute, q);
  }
  DqBruteTable table(pair, q, u, max_terms);
  return finish(table.dq(), Provenance::brute, q);
}

ExpSumValue s_qdc_brute(const QuadraticPair& pair, i64 q, i64 d, const Vec2i& c, const VecZ& u,
                        i64 max_terms) {
  if (q < 1 || d < 1 || q % d != 0) throw validation_error("s_qdc_brute: need d | q");
  if (!c.primitive()) throw validation_error("s_qdc_brute: c must be primitive");
  if (q == 1) return finish({1.0, 0.0}, Provenance::brute, 1);
  if (pair.diagonal()) {
    double cost = double(q) * q * pair.s() * q;
    if (cost > double(max_terms)) throw budget_error("s_qdc_brute: diagonal budget exceeded");
    DiagonalDirectBSum bsum(pair, q);
    cplx acc{0.0, 0.0};
    for (i64 a1 = 0; a1 < q; ++a1)
      for (i64 a2 = 0; a2 < q; ++a2) {
        if (std::gcd(std::gcd(a1, a2), q) != 1) continue;
        if (mod_pos(mulmod(mod_pos(d, q), mod_pos(c.x * a2 - c.y * a1, q), q), q) != 0) continue;
        acc += bsum(a1, a2, u);
      }
    return finish(acc, Provenance::brute, q);
  }
  DqBruteTable table(pair, q, u, max_terms);
  return finish(table.sqdc(d, c), Provenance::brute, q);
}

// ---------------------------------------------------------------------------
// Fast sums
// ---------------------------------------------------------------------------

ExpSumValue dq_fast(const QuadraticPair& pair, i64 q, const VecZ& u) {
  if (q < 1) throw validation_error("dq_fast: q >= 1 required");
  cplx total{1.0, 0.0};
  for (auto [p, k] : factorize(q).factors) total *= dq_prime_power(pair, p, k, u);
  return finish(total, Provenance::multiplicative, q);
}

ExpSumValue s_qdc_fast(const QuadraticPair& pair, i64 q, i64 d, const Vec2i& c, const VecZ& u) {
  if (q < 1 || d < 1 || q % d != 0) throw validation_error("s_qdc_fast: need d | q");
  if (!c.primitive()) throw validation_error("s_qdc_fast: c must be primitive");
  const int s = pair.s();
  BigInt det_hc = pair.pencil_value(c);

  cplx total{1.0, 0.0};
  bool all_closed = true;
  for (auto [p, k] : factorize(q).factors) {
    const i64 pk = pow_i64(p, k);
    const int m = (d % p == 0) ? std::min(valuation(d, p), k) : 0;
    cplx factor{0.0, 0.0};
    if (m >= k) {
      factor = dq_prime_power(pair, p, k, u);
      all_closed = false;
    } else if (m == 0) {
      bool unit_det = (p != 2) && (det_hc % p != 0);
      if (unit_det) {
        // Type I closed form
        DualForm df = dual_form(pair, c);
        i64 fstar = df.eval_mod(u, pk);
        int nu = fstar == 0 ? k : valuation(fstar, p);
        i64 det_mc_mod = mod_pos(BigInt(det_hc % p).convert_to<i64>(), p);
        det_mc_mod = mulmod(det_mc_mod, powmod(inv_mod(2, p), s, p), p);
        int chi = legendre_symbol(det_mc_mod, p);
        double scale = std::pow(double(p), 0.5 * double(s) * k);
        if (s % 2 == 0) {
          cplx eps = epsilon_pow(p, s * k);
          double chik = (k % 2 == 0) ? 1.0 : double(chi);
          factor = scale * eps * chik * ramanujan_pk(p, k, nu);
        } else if (k % 2 == 0) {
          factor = scale * ramanujan_pk(p, k, nu);
        } else {
          cplx eps = epsilon_pow(p, s);
          double chim1 = double(legendre_symbol(-1, p));
          factor = scale * eps * chim1 * gauss_char_sum(p, k, fstar);
        }
      } else {
        // a = t c, t a unit mod p^k
        for (i64 t = 0; t < pk; ++t) {
          if (t % p == 0) continue;
          factor += bsum_prime_power(pair, p, k, mod_pos(t * c.x, pk), mod_pos(t * c.y, pk), u);
        }
        all_closed = false;
      }
    } else {
      // 0 < m < k: a = t c + p^{k-m} dhat
      i64 pkm = pow_i64(p, k - m), pm = pow_i64(p, m);
      for (i64 t = 0; t < pkm; ++t) {
        if (t % p == 0) continue;
        for (i64 d1 = 0; d1 < pm; ++d1)
          for (i64 d2 = 0; d2 < pm; ++d2) {
            i64 a1 = mod_pos(t * c.x + pkm * d1, pk);
            i64 a2 = mod_pos(t * c.y + pkm * d2, pk);
            factor += bsum_prime_power(pair, p, k, a1, a2, u);
          }
      }
      all_closed = false;
    }
    total *= factor;
  }
  return finish(total, all_closed ? Provenance::closed_form : Provenance::multiplicative, q);
}

i64 ramanujan_sum(i64 q, i64 a) {
  if (q < 1) throw validation_error("ramanujan_sum: q >= 1 required");
  i64 g = std::gcd(mod_pos(a, q), q);
  if (g == 0) g = q;
  i64 n = q / g;
  int mu = moebius(n);
  if (mu == 0) return 0;
  return mu * (euler_phi(q) / euler_phi(n));
}

cplx gauss_char_sum(i64 p, int k, i64 a) {
  if (p == 2) throw validation_error("gauss_char_sum: p must be odd");
  if (!is_prime(p)) throw validation_error("gauss_char_sum: p must be prime");
  i64 pk = pow_i64(p, k);
  i64 am = mod_pos(a, pk);
  if (am == 0) return {0.0, 0.0};
  int m = valuation(am, p);
  if (m < k - 1) return {0.0, 0.0};
  i64 unit = am / pow_i64(p, k - 1);
  return double(pow_i64(p, k - 1)) * std::sqrt(double(p)) * double(legendre_symbol(unit, p)) *
         epsilon_p(p);
}

std::vector<PartialSumPoint> partial_sum_S(const QuadraticPair& pair, const Vec2i& c,
                                           const VecZ& u, i64 x_max, i64 coprime_to,
                                           i64 stride) {
  std::vector<PartialSumPoint> out;
  cplx acc{0.0, 0.0};
  const double exponent = 0.5 * pair.s() + 1.0;
  for (i64 q = 1; q <= x_max; ++q) {
    if (std::gcd(q, coprime_to) == 1) acc += s_qdc_fast(pair, q, 1, c, u).value;
    if (q % stride == 0 || q == x_max)
      out.push_back({double(q), acc, std::abs(acc) / std::pow(double(q), exponent)});
  }
  return out;
}

}  // namespace delta2d
