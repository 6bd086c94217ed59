#include "delta2d/quadpair.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace delta2d {

using BigRat = boost::multiprecision::cpp_rational;
using BigMat = std::vector<std::vector<BigInt>>;

namespace {

BigInt det_big(BigMat a) {
  const int n = int(a.size());
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  BigInt d = a[n - 1][n - 1];
  return sign > 0 ? d : -d;
}

BigMat adjugate_big(const BigMat& m) {
  const int n = int(m.size());
  BigMat adj(n, std::vector<BigInt>(n));
  if (n == 1) {
    adj[0][0] = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      BigMat minor(n - 1, std::vector<BigInt>(n - 1));
      int r = 0;
      for (int ii = 0; ii < n; ++ii) {
        if (ii == i) continue;
        int c = 0;
        for (int jj = 0; jj < n; ++jj) {
          if (jj == j) continue;
          minor[r][c++] = m[ii][jj];
        }
        ++r;
      }
      BigInt cof = det_big(minor);
      adj[j][i] = ((i + j) & 1) ? -cof : cof;
    }
  return adj;
}

// Coefficients of the degree-n polynomial through (t, v_t), t = 0..n.
std::vector<BigInt> interpolate_poly(const std::vector<BigInt>& values) {
  const int n = int(values.size()) - 1;
  std::vector<BigRat> coef(n + 1, BigRat(0));
  std::vector<BigRat> basis;  // running product prod (t - x_i), coefficients
  basis.push_back(BigRat(1));
  // Newton form with nodes 0..n
  std::vector<BigRat> dd(values.size());
  for (size_t i = 0; i < values.size(); ++i) dd[i] = BigRat(values[i]);
  std::vector<BigRat> newton(values.size());
  newton[0] = dd[0];
  for (int level = 1; level <= n; ++level) {
    for (int i = 0; i + level <= n; ++i) dd[i] = (dd[i + 1] - dd[i]) / level;
    newton[level] = dd[0];
  }
  for (int level = 0; level <= n; ++level) {
    for (size_t k = 0; k < basis.size(); ++k) coef[k] += newton[level] * basis[k];
    if (level < n) {
      // basis *= (t - level)
      basis.push_back(BigRat(0));
      for (int k = int(basis.size()) - 1; k >= 1; --k)
        basis[k] = basis[k - 1] - level * basis[k];
      basis[0] = -BigRat(level) * basis[0];
    }
  }
  std::vector<BigInt> out(n + 1);
  for (int k = 0; k <= n; ++k) {
    if (denominator(coef[k]) != 1) throw validation_error("interpolation produced non-integers");
    out[k] = numerator(coef[k]);
  }
  return out;
}

// Resultant of f (declared degree n) and g (declared degree m), Sylvester.
BigInt resultant(const std::vector<BigInt>& f, int n, const std::vector<BigInt>& g, int m) {
  const int size = n + m;
  BigMat syl(size, std::vector<BigInt>(size, BigInt(0)));
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) syl[r][r + k] = f[n - k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) syl[m + r][r + k] = g[m - k];
  return det_big(syl);
}

// Discriminant of the binary form sum_k c[k] x^k y^{n-k}; SL2(Z)-invariant,
// computed after a shear that makes the x^n coefficient nonzero.
BigInt disc_binary(std::vector<BigInt> c) {
  const int n = int(c.size()) - 1;
  bool all0 = true;
  for (auto& v : c) all0 &= (v == 0);
  if (all0) return 0;
  auto eval_1l = [&](i64 lam) {
    BigInt v = 0, pw = 1;  // sum c[k] * lam^{n-k}: form(1, lam)
    for (int k = n; k >= 0; --k) {
      v += c[k] * pw;
      pw *= lam;
    }
    return v;
  };
  i64 lam = 0;
  while (eval_1l(lam) == 0) {
    ++lam;
    if (lam > 2 * n + 2) throw validation_error("disc_binary: no shear found");
  }
  if (lam != 0) {
    // form(x, y + lam x): substitute and re-collect
    std::vector<BigInt> nc(n + 1, BigInt(0));
    for (int k = 0; k <= n; ++k) {
      // c[k] x^k (y + lam x)^{n-k}
      BigInt binom = 1;
      BigInt lampow = 1;
      for (int j = 0; j <= n - k; ++j) {
        // term: c[k] * C(n-k, j) * lam^j * x^{k+j} y^{n-k-j}
        nc[k + j] += c[k] * binom * lampow;
        binom = binom * (n - k - j) / (j + 1);
        lampow *= lam;
      }
    }
    c = std::move(nc);
  }
  // f(t) = form(t, 1) now has exact degree n with lc = c[n].
  std::vector<BigInt> f(n + 1), df(n);
  for (int k = 0; k <= n; ++k) f[k] = c[k];
  for (int k = 1; k <= n; ++k) df[k - 1] = f[k] * k;
  BigInt res = resultant(f, n, df, n - 1);
  BigInt disc = res / f[n];
  if (((n * (n - 1) / 2) & 1) != 0) disc = -disc;
  return disc;
}

BigMat to_big(const MatZ& m) {
  BigMat b(m.rows(), std::vector<BigInt>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) b[i][j] = BigInt(m(i, j));
  return b;
}

Vec2i canonical_sign_dir(Vec2i c) {
  if (c.x < 0 || (c.x == 0 && c.y < 0)) return -c;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// QuadraticPair
// ---------------------------------------------------------------------------

QuadraticPair::QuadraticPair(MatZ h1, MatZ h2) : h1_(std::move(h1)), h2_(std::move(h2)) {
  if (h1_.rows() != h1_.cols() || h2_.rows() != h2_.cols() || h1_.rows() != h2_.rows())
    throw validation_error("pair: H1, H2 must be square of equal size");
  s_ = int(h1_.rows());
  if (s_ < 3) throw validation_error("pair: s >= 3 required");
  for (const MatZ* h : {&h1_, &h2_}) {
    if (*h != h->transpose()) throw validation_error("pair: Hessians must be symmetric");
    for (int i = 0; i < s_; ++i)
      if ((*h)(i, i) % 2 != 0) throw validation_error("pair: Hessian diagonal must be even");
  }
  diagonal_ = h1_.isDiagonal() && h2_.isDiagonal();
  even_h_ = true;
  for (const MatZ* h : {&h1_, &h2_})
    for (int i = 0; i < s_; ++i)
      for (int j = 0; j < s_; ++j) even_h_ &= ((*h)(i, j) % 2 == 0);
}

QuadraticPair QuadraticPair::from_json_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int s = j.at("s").get<int>();
  auto read = [&](const char* key) {
    MatZ m(s, s);
    auto rows = j.at(key);
    if (int(rows.size()) != s) throw validation_error("pair json: row count mismatch");
    for (int i = 0; i < s; ++i) {
      if (int(rows[i].size()) != s) throw validation_error("pair json: column count mismatch");
      for (int k = 0; k < s; ++k) m(i, k) = rows[i][k].get<i64>();
    }
    return m;
  };
  return QuadraticPair(read("H1"), read("H2"));
}

QuadraticPair QuadraticPair::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open pair file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string QuadraticPair::to_json_text() const {
  nlohmann::json j;
  j["s"] = s_;
  auto dump = [&](const MatZ& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < s_; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int k = 0; k < s_; ++k) row.push_back(m(i, k));
      rows.push_back(row);
    }
    return rows;
  };
  j["H1"] = dump(h1_);
  j["H2"] = dump(h2_);
  return j.dump(2);
}

i64 QuadraticPair::eval_half_h(const MatZ& h, const VecZ& x) {
  const int n = int(h.rows());
  i128 acc = 0;
  for (int i = 0; i < n; ++i) {
    acc = add_checked(acc, mul_checked(i128(h(i, i) / 2), mul_checked(i128(x(i)), i128(x(i)))));
    for (int j = i + 1; j < n; ++j)
      acc = add_checked(acc, mul_checked(i128(h(i, j)), mul_checked(i128(x(i)), i128(x(j)))));
  }
  return narrow_checked(acc);
}

MatZ QuadraticPair::hc(const Vec2i& c) const {
  MatZ m(s_, s_);
  for (int i = 0; i < s_; ++i)
    for (int j = 0; j < s_; ++j)
      m(i, j) = add_checked(mul_checked(c.x, h1_(i, j)), mul_checked(c.y, h2_(i, j)));
  return m;
}

const std::vector<BigInt>& QuadraticPair::pencil_form_coeffs() const {
  std::scoped_lock lock(cache_mutex_);
  if (pencil_coeffs_.empty()) {
    std::vector<BigInt> vals(s_ + 1);
    for (int t = 0; t <= s_; ++t) {
      MatZ m = h1_ + t * h2_;
      vals[t] = det_big(to_big(m));
    }
    pencil_coeffs_ = interpolate_poly(vals);  // det(H1 + t H2) = sum a_i t^i
  }
  return pencil_coeffs_;
}

BigInt QuadraticPair::pencil_value(const Vec2i& c) const {
  const auto& a = pencil_form_coeffs();
  // det(x H1 + y H2) = sum_i a_i x^{s-i} y^i with x = c1, y = c2
  BigInt v = 0;
  for (int i = 0; i <= s_; ++i) {
    BigInt term = a[i];
    for (int k = 0; k < i; ++k) term *= c.y;
    for (int k = i; k < s_; ++k) term *= c.x;
    v += term;
  }
  return v;
}

const std::vector<std::pair<std::complex<double>, std::complex<double>>>&
QuadraticPair::pencil_roots() const {
  pencil_form_coeffs();
  std::scoped_lock lock(cache_mutex_);
  if (!roots_built_) {
    const auto& a = pencil_coeffs_;
    int deg = s_;
    while (deg > 0 && a[deg] == 0) --deg;
    if (deg == 0) throw validation_error("pencil form is degenerate");
    // companion matrix of the monic normalization
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    double lead = a[deg].convert_to<double>();
    for (int i = 0; i < deg; ++i) {
      comp(i, deg - 1) = -a[i].convert_to<double>() / lead;
      if (i + 1 < deg) comp(i + 1, i) = 1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    for (int i = 0; i < deg; ++i) {
      std::complex<double> t(es.eigenvalues()[i].real(), es.eigenvalues()[i].imag());
      // det(H1 + t H2) = 0 at t = -lambda/mu: root pair (lambda, mu) ~ (-t, 1)
      std::complex<double> lam = -t, mu = 1.0;
      double nrm = std::sqrt(std::norm(lam) + std::norm(mu));
      roots_.emplace_back(lam / nrm, mu / nrm);
    }
    for (int i = deg; i < s_; ++i) roots_.emplace_back(1.0, 0.0);  // factors x (mu = 0)
    roots_built_ = true;
  }
  return roots_;
}

const std::vector<Vec2i>& QuadraticPair::bad_directions() const {
  pencil_form_coeffs();
  std::scoped_lock lock(cache_mutex_);
  if (!bad_c_built_) {
    std::vector<Vec2i> out;
    if (diagonal_) {
      // bad directions are exactly (a_j, -e_j) up to scaling, per coordinate
      for (int j = 0; j < s_; ++j) {
        i64 e = h1_(j, j) / 2, aj = h2_(j, j) / 2;
        i64 g = gcd_i64(e, aj);
        if (g == 0) continue;
        out.push_back(canonical_sign_dir({aj / g, -e / g}));
      }
    } else {
      // rational roots of det(x H1 + y H2): t = c2/c1 from f(1,t) = sum a_i t^i
      const auto& a = pencil_coeffs_;
      int deg = s_;
      while (deg > 0 && a[deg] == 0) --deg;
      int low = 0;
      while (low <= deg && a[low] == 0) ++low;
      if (low > 0) out.push_back({1, 0});  // t = 0 root
      if (deg < s_) out.push_back({0, 1});  // root at infinity: det H2 = 0
      if (low <= deg && deg > low) {
        auto fits = [](const BigInt& v) {
          return v >= BigInt(INT64_MIN / 4) && v <= BigInt(INT64_MAX / 4);
        };
        if (!fits(a[low]) || !fits(a[deg]))
          throw budget_error("bad-direction scan: pencil coefficients beyond desk scale");
        i64 a0 = a[low].convert_to<i64>(), al = a[deg].convert_to<i64>();
        auto eval0 = [&](i64 num, i64 den) {
          // f(den, num) as binary form of degree s (x=den, y=num)
          BigInt v = 0;
          for (int i = 0; i <= s_; ++i) {
            BigInt term = pencil_coeffs_[i];
            for (int k = 0; k < i; ++k) term *= num;
            for (int k = i; k < s_; ++k) term *= den;
            v += term;
          }
          return v;
        };
        for (i64 num : divisors(std::abs(a0)))
          for (i64 den : divisors(std::abs(al)))
            if (std::gcd(num, den) == 1) {
              if (eval0(den, num) == 0) out.push_back(canonical_sign_dir({den, num}));
              if (eval0(den, -num) == 0) out.push_back(canonical_sign_dir({den, -num}));
            }
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    bad_c_ = std::move(out);
    bad_c_built_ = true;
  }
  return bad_c_;
}

bool QuadraticPair::df_divisible_by(i64 p) const {
  if (p == 2) return true;  // D_F carries an explicit factor 2
  if (!is_prime(p)) throw validation_error("df_divisible_by: p must be prime");
  const auto& a = pencil_form_coeffs();
  // disc of the degree-s binary form sum a_i x^{s-i} y^i, reduced mod p
  std::vector<i64> c(s_ + 1);
  bool all0 = true;
  for (int i = 0; i <= s_; ++i) {
    c[s_ - i] = mod_pos(BigInt(a[i] % p).convert_to<i64>(), p);  // coefficient of x^{s-i} y^i
    all0 &= (c[s_ - i] == 0);
  }
  if (all0) return true;
  const int n = s_;
  auto eval_1l = [&](i64 lam) {
    i64 v = 0, pw = 1;
    for (int k = n; k >= 0; --k) {
      v = (v + mulmod(c[k], pw, p)) % p;
      pw = mulmod(pw, lam, p);
    }
    return v;
  };
  i64 lam = 0;
  while (eval_1l(lam) == 0) {
    ++lam;
    if (lam >= p) return true;  // form vanishes on all of P^1(F_p) => p | disc
  }
  if (lam != 0) {
    // shear (x, y) -> (x, y + lam x); binomials are exact (n <= desk scale)
    std::vector<i64> nc(n + 1, 0);
    for (int k = 0; k <= n; ++k) {
      i64 binom = 1, lampow = 1;
      for (int j = 0; j <= n - k; ++j) {
        nc[k + j] = (nc[k + j] + mulmod(c[k], mulmod(mod_pos(binom, p), lampow, p), p)) % p;
        binom = binom * (n - k - j) / (j + 1);
        lampow = mulmod(lampow, lam, p);
      }
    }
    c = std::move(nc);
  }
  // Sylvester resultant of f, f' mod p with declared degrees (n, n-1)
  const int size = 2 * n - 1;
  std::vector<std::vector<i64>> syl(size, std::vector<i64>(size, 0));
  for (int r = 0; r < n - 1; ++r)
    for (int k = 0; k <= n; ++k) syl[r][r + k] = c[n - k];
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) syl[n - 1 + r][r + k] = mulmod(n - k, c[n - k], p);
  // determinant mod p
  i64 det = 1;
  for (int col = 0; col < size; ++col) {
    int piv = -1;
    for (int r = col; r < size; ++r)
      if (syl[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return true;  // resultant ≡ 0
    if (piv != col) {
      std::swap(syl[piv], syl[col]);
      det = p - det;
    }
    det = mulmod(det, syl[col][col], p);
    i64 inv = inv_mod(syl[col][col], p);
    for (int r = col + 1; r < size; ++r) {
      if (syl[r][col] == 0) continue;
      i64 f = mulmod(syl[r][col], inv, p);
      for (int k = col; k < size; ++k)
        syl[r][k] = mod_pos(syl[r][k] - mulmod(f, syl[col][k], p), p);
    }
  }
  return det % p == 0;
}

bool QuadraticPair::df_nonzero() const {
  {
    std::scoped_lock lock(cache_mutex_);
    if (df_sign_ != 2) return df_sign_ != 0;
  }
  bool nonzero = false;
  if (diagonal_) {
    // distinct projective ratios (H1_jj : H2_jj)
    nonzero = true;
    for (int i = 0; i < s_ && nonzero; ++i)
      for (int j = i + 1; j < s_ && nonzero; ++j) {
        i128 cross = i128(h1_(i, i)) * h2_(j, j) - i128(h1_(j, j)) * h2_(i, i);
        if (cross == 0) nonzero = false;
      }
  } else {
    static const i64 probes[] = {1000003, 1000033, 1000037, 1000039, 1000081, 1000099,
                                 1000117, 1000121, 1000133, 1000151, 1000159, 1000171,
                                 1000183, 1000187, 1000193, 1000199, 1000211, 1000213,
                                 1000231, 1000249};
    for (i64 p : probes)
      if (!df_divisible_by(p)) {
        nonzero = true;
        break;
      }
  }
  std::scoped_lock lock(cache_mutex_);
  df_sign_ = nonzero ? 1 : 0;
  return nonzero;
}

// ---------------------------------------------------------------------------
// Directions
// ---------------------------------------------------------------------------

i64 DirectionData::last_coordinate(const VecZ& u) const {
  i128 acc = 0;
  for (int i = 0; i < y_basis.rows(); ++i)
    acc = add_checked(acc, mul_checked(i128(y_basis(i, y_basis.cols() - 1)), i128(u(i))));
  return narrow_checked(acc);
}

VecZ DirectionData::project(const VecZ& u) const {
  // u' = u - (S u)_s y_s
  const int n = int(y_basis.rows());
  i128 alpha = 0;
  for (int j = 0; j < n; ++j) alpha = add_checked(alpha, mul_checked(i128(smith.s(n - 1, j)), i128(u(j))));
  VecZ out(n);
  for (int i = 0; i < n; ++i)
    out(i) = narrow_checked(add_checked(i128(u(i)), -mul_checked(alpha, i128(y_basis(i, n - 1)))));
  return out;
}

DirectionData classify_direction(const QuadraticPair& pair, const Vec2i& c) {
  if (!c.primitive()) throw validation_error("classify_direction: c must be primitive");
  DirectionData d;
  d.c = c;
  d.hc = pair.hc(c);
  d.det_hc = det_exact(d.hc);
  d.good = d.det_hc != 0;
  d.smith = smith_normal_form(d.hc);
  d.y_basis = unimodular_inverse(d.smith.s);
  d.rho = d.smith.d.diagonal();
  return d;
}

DualForm dual_form(const QuadraticPair& pair, const Vec2i& c) {
  if (!c.primitive()) throw validation_error("dual_form: c must be primitive");
  MatZ hc = pair.hc(c);
  if (pair.pencil_value(c) == 0) throw validation_error("dual_form: c is bad");
  DualForm f;
  if (pair.even_h()) {
    MatZ mc = hc / 2;
    f.gram = adjugate(mc);
    f.denom_pow2 = 0;
  } else {
    f.gram = adjugate(hc);
    f.denom_pow2 = pair.s() - 1;
  }
  return f;
}

i128 DualForm::eval_num(const VecZ& u) const {
  const int n = int(gram.rows());
  i128 acc = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      acc = add_checked(acc, mul_checked(i128(gram(i, j)), mul_checked(i128(u(i)), i128(u(j)))));
  return acc;
}

i128 DualForm::eval_exact(const VecZ& u) const {
  i128 num = eval_num(u);
  for (int k = 0; k < denom_pow2; ++k) {
    if (num % 2 != 0) throw validation_error("dual form value not integral for this pair");
    num /= 2;
  }
  return num;
}

i64 DualForm::eval_mod(const VecZ& u, i64 m) const {
  if (m % 2 == 0) throw validation_error("dual form eval_mod: odd modulus required");
  i64 num = mod_pos(eval_num(u), m);
  i64 inv2 = inv_mod(2, m);
  for (int k = 0; k < denom_pow2; ++k) num = mulmod(num, inv2, m);
  return num;
}

int DualForm::valuation_at(const VecZ& u, i64 p) const {
  i128 num = eval_num(u);
  if (num == 0) throw validation_error("valuation of zero dual-form value");
  int v = 0;
  while (num % p == 0) {
    num /= p;
    ++v;
  }
  return v;
}

BigInt dual_variety_value(const QuadraticPair& pair, const VecZ& u) {
  if (pair.s() < 4) throw validation_error("dual_variety_value: s >= 4 required");
  const int n = pair.s() - 1;
  // values of u^T adj(H1 + t H2) u at t = 0..n  (adj(M) when M integral)
  std::vector<BigInt> vals(n + 1);
  for (int t = 0; t <= n; ++t) {
    MatZ m = pair.even_h() ? MatZ((pair.h1() + t * pair.h2()) / 2) : MatZ(pair.h1() + t * pair.h2());
    BigMat adj = adjugate_big(to_big(m));
    BigInt acc = 0;
    for (int i = 0; i < pair.s(); ++i)
      for (int j = 0; j < pair.s(); ++j) acc += adj[i][j] * u(i) * u(j);
    vals[t] = acc;
  }
  std::vector<BigInt> poly = interpolate_poly(vals);  // g(1, t) ... coefficient of t^k
  // binary form: g(c1, c2) = sum_k poly[k] c1^{n-k} c2^k; disc_binary wants x^k y^{n-k}
  std::vector<BigInt> form(n + 1);
  for (int k = 0; k <= n; ++k) form[n - k] = poly[k];
  return disc_binary(std::move(form));
}

i64 dual_variety_mod(const QuadraticPair& pair, const VecZ& u, i64 p) {
  if (p == 2 || !is_prime(p)) throw validation_error("dual_variety_mod: odd prime required");
  BigInt v = dual_variety_value(pair, u) % p;
  return mod_pos(v.convert_to<i64>(), p);
}

RestrictedForm restricted_form_and_dual(const QuadraticPair& pair, const Vec2i& c) {
  DirectionData d = classify_direction(pair, c);
  int zeros = 0;
  for (int i = 0; i < pair.s(); ++i) zeros += (d.rho(i) == 0);
  if (zeros > 1) throw validation_error("restricted_form: rank(M_c) >= s-1 required");
  RestrictedForm r;
  r.y_basis = d.y_basis;
  const int n = pair.s();
  r.y_last = d.y_basis.col(n - 1);
  MatZ yprime = d.y_basis.leftCols(n - 1);
  r.q_gram = yprime.transpose() * d.hc * yprime;
  r.q_dual_gram = adjugate(r.q_gram);
  return r;
}

PrimeType prime_type(const QuadraticPair& pair, const Vec2i& c, i64 p) {
  if (!c.primitive()) throw validation_error("prime_type: c must be primitive");
  if (!is_prime(p)) throw validation_error("prime_type: p must be prime");
  if (pair.df_divisible_by(p)) return PrimeType::bad_prime;
  DirectionData d = classify_direction(pair, c);
  if (!d.good) return PrimeType::good_for_bad_c;
  if (d.det_hc % p != 0) return PrimeType::typeI;
  return PrimeType::typeII;
}

double lambda_w(const QuadraticPair& pair, double w1, double w2) {
  double nw = std::hypot(w1, w2);
  if (!(nw > 0.0)) throw validation_error("lambda_w: w must be nonzero");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [lam, mu] : pair.pencil_roots()) {
    double v = std::abs(lam * w1 + mu * w2) / nw;
    best = std::min(best, v);
  }
  return best;
}

ScreenResult nonsingularity_screen(const QuadraticPair& pair, int trials, uint64_t seed) {
  if (!pair.df_nonzero()) return ScreenResult::fail;
  // Randomized check: points of F1 = F2 = 0 over F_p must have rank-2 Jacobian.
  std::mt19937_64 rng(seed);
  const i64 primes[] = {101, 103, 107};
  int found = 0, witnesses = 0;
  for (i64 p : primes) {
    std::uniform_int_distribution<i64> dist(0, p - 1);
    for (int t = 0; t < trials; ++t) {
      VecZ x(pair.s());
      for (int i = 2; i < pair.s(); ++i) x(i) = dist(rng);
      bool got = false;
      for (i64 a = 0; a < p && !got; ++a)
        for (i64 b = 0; b < p && !got; ++b) {
          x(0) = a;
          x(1) = b;
          bool zero = true;
          for (int i = 0; i < pair.s(); ++i) zero &= (x(i) % p == 0);
          if (zero) continue;
          if (mod_pos(pair.eval_f1(x), p) == 0 && mod_pos(pair.eval_f2(x), p) == 0) got = true;
        }
      if (!got) continue;
      ++found;
      // Jacobian rows: (H1 x)^T, (H2 x)^T mod p; rank < 2 is a witness.
      VecZ g1 = pair.h1() * x, g2 = pair.h2() * x;
      bool g1z = true, g2z = true;
      for (int i = 0; i < pair.s(); ++i) {
        g1z &= (mod_pos(g1(i), p) == 0);
        g2z &= (mod_pos(g2(i), p) == 0);
      }
      bool rank2 = false;
      if (!g1z && !g2z) {
        for (int i = 0; i < pair.s() && !rank2; ++i)
          for (int j = i + 1; j < pair.s() && !rank2; ++j) {
            i128 det2 = i128(g1(i)) * g2(j) - i128(g1(j)) * g2(i);
            if (mod_pos(det2, p) != 0) rank2 = true;
          }
      }
      if (!rank2) ++witnesses;
    }
  }
  if (witnesses > 0) return ScreenResult::inconclusive;
  return found > 0 ? ScreenResult::pass : ScreenResult::inconclusive;
}

}  // namespace delta2d
