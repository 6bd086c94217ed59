#include "delta2d/arith.hpp"

#include <algorithm>
#include <cmath>

namespace delta2d {

std::string to_string_i128(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? -(unsigned __int128)v : (unsigned __int128)v;
  std::string s;
  while (u) {
    s += char('0' + int(u % 10));
    u /= 10;
  }
  if (neg) s += '-';
  std::reverse(s.begin(), s.end());
  return s;
}

i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
  if (b == 0) {
    x = a >= 0 ? 1 : -1;
    y = 0;
    return a >= 0 ? a : -a;
  }
  i64 x1, y1;
  i64 g = ext_gcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

i64 powmod(i64 base, i64 exp, i64 m) {
  if (m <= 0) throw validation_error("powmod: modulus must be positive");
  i64 b = mod_pos(base, m), r = 1 % m;
  while (exp > 0) {
    if (exp & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    exp >>= 1;
  }
  return r;
}

i64 inv_mod(i64 a, i64 m) {
  i64 x, y;
  i64 g = ext_gcd(mod_pos(a, m), m, x, y);
  if (g != 1) throw validation_error("inv_mod: arguments not coprime");
  return mod_pos(x, m);
}

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  i64 d = 7;
  int w = 0;
  while (d <= n / d) {
    if (n % d == 0) return false;
    d += wheel[w];
    w = (w + 1) & 7;
  }
  return true;
}

int valuation(i64 n, i64 p) {
  if (n == 0) throw validation_error("valuation of 0");
  int k = 0;
  while (n % p == 0) {
    n /= p;
    ++k;
  }
  return k;
}

Factorization factorize(i64 n) {
  if (n <= 0) throw validation_error("factorize: need n >= 1");
  Factorization f;
  for (i64 p : {2, 3, 5}) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) f.factors.emplace_back(p, e);
  }
  static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
  i64 d = 7;
  int w = 0;
  while (d <= n / d) {
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    if (e) f.factors.emplace_back(d, e);
    d += wheel[w];
    w = (w + 1) & 7;
  }
  if (n > 1) f.factors.emplace_back(n, 1);
  return f;
}

std::vector<i64> crt_decompose(i64 q) {
  if (q < 1) throw validation_error("crt_decompose: need q >= 1");
  std::vector<i64> parts;
  for (auto [p, e] : factorize(q).factors) {
    i64 pk = 1;
    for (int i = 0; i < e; ++i) pk = mul_checked(pk, p);
    parts.push_back(pk);
  }
  return parts;
}

i64 euler_phi(i64 n) {
  i64 phi = 1;
  for (auto [p, e] : factorize(n).factors) {
    i64 pe = 1;
    for (int i = 0; i < e - 1; ++i) pe = mul_checked(pe, p);
    phi = mul_checked(phi, mul_checked(pe, p - 1));
  }
  return phi;
}

int moebius(i64 n) {
  auto f = factorize(n);
  for (auto [p, e] : f.factors)
    if (e > 1) return 0;
  return f.factors.size() % 2 == 0 ? 1 : -1;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> ds{1};
  for (auto [p, e] : factorize(n).factors) {
    size_t m = ds.size();
    i64 pe = 1;
    for (int i = 1; i <= e; ++i) {
      pe = mul_checked(pe, p);
      for (size_t j = 0; j < m; ++j) ds.push_back(mul_checked(ds[j], pe));
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

int legendre_symbol(i64 a, i64 p) {
  if (p == 2 || !is_prime(p)) throw validation_error("legendre_symbol: p must be an odd prime");
  i64 r = mod_pos(a, p);
  if (r == 0) return 0;
  i64 e = powmod(r, (p - 1) / 2, p);
  return e == 1 ? 1 : -1;
}

double Vec2i::norm() const { return std::hypot(double(x), double(y)); }

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

i128 det_exact(const MatZ& m) {
  if (m.rows() != m.cols()) throw validation_error("det_exact: square matrix required");
  const int n = int(m.rows());
  if (n == 0) return 1;
  std::vector<std::vector<i128>> a(n, std::vector<i128>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
  i128 prev = 1;
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
      for (int j = k + 1; j < n; ++j) {
        i128 num = mul_checked(a[i][j], a[k][k]);
        num = add_checked(num, -mul_checked(a[i][k], a[k][j]));
        a[i][j] = num / prev;  // divides exactly (Bareiss)
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

MatZ adjugate(const MatZ& m) {
  const int n = int(m.rows());
  if (n != m.cols()) throw validation_error("adjugate: square matrix required");
  MatZ adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  MatZ minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      int r = 0;
      for (int ii = 0; ii < n; ++ii) {
        if (ii == i) continue;
        int c = 0;
        for (int jj = 0; jj < n; ++jj) {
          if (jj == j) continue;
          minor(r, c++) = m(ii, jj);
        }
        ++r;
      }
      i128 cof = det_exact(minor);
      if ((i + j) & 1) cof = -cof;
      adj(j, i) = narrow_checked(cof);
    }
  }
  return adj;
}

MatZ unimodular_inverse(const MatZ& m) {
  i128 d = det_exact(m);
  if (d != 1 && d != -1) throw validation_error("unimodular_inverse: |det| != 1");
  MatZ adj = adjugate(m);
  if (d == -1) adj = -adj;
  return adj;
}

namespace {

struct SmithWork {
  MatZ t, d, s;

  void row_swap(int i, int j) {
    if (i == j) return;
    d.row(i).swap(d.row(j));
    t.col(i).swap(t.col(j));
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    d.col(i).swap(d.col(j));
    s.row(i).swap(s.row(j));
  }
  // d.row(i) -= k * d.row(src); keeps t * d * s invariant.
  void row_sub(int i, int src, i64 k) {
    if (k == 0) return;
    for (int c = 0; c < d.cols(); ++c) d(i, c) = add_checked(d(i, c), -mul_checked(k, d(src, c)));
    for (int r = 0; r < t.rows(); ++r) t(r, src) = add_checked(t(r, src), mul_checked(k, t(r, i)));
  }
  void col_sub(int j, int src, i64 k) {
    if (k == 0) return;
    for (int r = 0; r < d.rows(); ++r) d(r, j) = add_checked(d(r, j), -mul_checked(k, d(r, src)));
    for (int c = 0; c < s.cols(); ++c) s(src, c) = add_checked(s(src, c), mul_checked(k, s(j, c)));
  }
  void row_negate(int i) {
    d.row(i) = -d.row(i);
    t.col(i) = -t.col(i);
  }
};

}  // namespace

SmithResult smith_normal_form(const MatZ& m) {
  if (m.rows() != m.cols()) throw validation_error("smith_normal_form: square matrix required");
  const int n = int(m.rows());
  SmithWork w;
  w.t = MatZ::Identity(n, n);
  w.s = MatZ::Identity(n, n);
  w.d = m;

  for (int k = 0; k < n; ++k) {
    for (;;) {
      // Pivot: minimal nonzero |entry| in the trailing block, lowest (row, col) on ties.
      int pi = -1, pj = -1;
      i64 best = 0;
      for (int i = k; i < n; ++i)
        for (int j = k; j < n; ++j) {
          i64 v = w.d(i, j) < 0 ? -w.d(i, j) : w.d(i, j);
          if (v != 0 && (pi < 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) {
        // trailing block is zero; done (zero invariant factors stay last)
        for (int i = k; i < n; ++i) w.d(i, i) = 0;
        return {w.t, w.d, w.s};
      }
      w.row_swap(k, pi);
      w.col_swap(k, pj);

      bool clean = true;
      for (int i = k + 1; i < n; ++i) {
        if (w.d(i, k) != 0) {
          w.row_sub(i, k, w.d(i, k) / w.d(k, k));
          if (w.d(i, k) != 0) clean = false;
        }
      }
      for (int j = k + 1; j < n; ++j) {
        if (w.d(k, j) != 0) {
          w.col_sub(j, k, w.d(k, j) / w.d(k, k));
          if (w.d(k, j) != 0) clean = false;
        }
      }
      if (!clean) continue;

      // Row k and column k are clean; enforce pivot | trailing entries.
      int bi = -1, bj = -1;
      for (int i = k + 1; i < n && bi < 0; ++i)
        for (int j = k + 1; j < n; ++j)
          if (w.d(i, j) % w.d(k, k) != 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi < 0) break;
      // Absorb the offending row and retry.
      w.row_sub(k, bi, -1);
    }
    if (w.d(k, k) < 0) w.row_negate(k);
  }
  return {w.t, w.d, w.s};
}

}  // namespace delta2d
