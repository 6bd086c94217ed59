#include <doctest.h>

#include <cmath>
#include <random>

#include "delta2d/kernels.hpp"

using namespace delta2d;

namespace {

// dense trapezoid oracle, 10^6 panels
template <class F>
double trapezoid(F&& f, double a, double b, int n = 1000000) {
  double h = (b - a) / n;
  double s = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) s += f(a + i * h);
  return s * h;
}

}  // namespace

TEST_CASE("kernel profile invariants") {
  KernelProfile p = build_kernel_profile(1e-10);

  CHECK(p.omega0(0.0) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(p.omega0(0.5) == 0.0);
  CHECK(p.omega0(-0.5) == 0.0);
  CHECK(p.omega0(0.7) == 0.0);
  for (double x : {0.1, 0.23, 0.41}) {
    CHECK(p.omega0(x) == p.omega0(-x));
    CHECK(p.omega0(x) >= 0.0);
  }
  double i0 = trapezoid([&](double x) { return p.omega0(x); }, -0.5, 0.5);
  CHECK(std::abs(i0 - 1.0) < 1e-10);

  CHECK(p.omega(0.25) == 0.0);
  CHECK(p.omega(1.25) == 0.0);
  CHECK(p.omega(0.5) == 0.0);
  CHECK(p.omega(1.0) == 0.0);
  for (double x : {0.6, 0.75, 0.93}) CHECK(p.omega(x) >= 0.0);
  double i1 = trapezoid([&](double x) { return p.omega(x); }, 0.5, 1.0);
  CHECK(std::abs(i1 - 1.0) < 1e-10);

  // c against an independent high-resolution trapezoid of (2 pi int r w)^{-1}
  double rmass = trapezoid([&](double r) { return r * p.omega(r); }, 0.5, 1.0);
  CHECK(std::abs(p.c - 1.0 / (2.0 * M_PI * rmass)) < 1e-8);

  CHECK_THROWS_AS(build_kernel_profile(0.0), validation_error);
  CHECK_THROWS_AS(build_kernel_profile(1e-3), validation_error);
}

TEST_CASE("h function examples") {
  KernelProfile p = build_kernel_profile(1e-10);
  CHECK(h_eval(p, 1.5, 0.5) == 0.0);
  CHECK(h_eval(p, 2.0, 0.0) == 0.0);
  // y = 0.4, z = 0: only j = 2 survives
  double expect = p.omega(0.8) / 0.8;
  CHECK(h_eval(p, 0.4, 0.0) == expect);
  CHECK_THROWS_AS(h_eval(p, 0.0, 1.0), validation_error);
  CHECK_THROWS_AS(h_eval(p, -1.0, 1.0), validation_error);
}

TEST_CASE("h agrees exactly with the naive full-range oracle") {
  KernelProfile p = build_kernel_profile(1e-10);
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> uy(1e-3, 2.0), uz(-2.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    double y = uy(rng), z = uz(rng);
    long jmax = long(std::ceil(std::max(1.0 / y, 2.0 * std::abs(z) / y))) + 1;
    double oracle = 0.0;
    for (long j = 1; j <= jmax; ++j) {
      double yj = y * double(j);
      oracle += (p.omega(yj) - p.omega(std::abs(z) / yj)) / yj;
    }
    CHECK(h_eval(p, y, z) == oracle);  // bitwise: same arithmetic, same order
  }
}

TEST_CASE("h support vanishing on a grid") {
  KernelProfile p = build_kernel_profile(1e-10);
  for (int iy = 0; iy < 30; ++iy) {
    double y = 1.0 + 0.1 * iy;
    for (int iz = 0; iz <= 20; ++iz) {
      double z = (iz / 20.0) * (y / 2.0);
      CHECK(h_eval(p, y, z) == 0.0);
      CHECK(h_eval(p, y, -z) == 0.0);
    }
  }
}

TEST_CASE("h derivative constants are mutually consistent") {
  KernelProfile p = build_kernel_profile(1e-10);
  double consts[3];
  int idx = 0;
  for (double y : {0.05, 0.1, 0.2}) {
    double dz = 1e-5, worst = 0.0;
    for (int iz = -30; iz <= 30; ++iz) {
      double z = iz * 0.06;
      double fd = (h_eval(p, y, z + dz) - h_eval(p, y, z - dz)) / (2.0 * dz);
      worst = std::max(worst, std::abs(fd));
    }
    consts[idx++] = worst * y * y;  // recorded C in |dh/dz| <= C y^{-2}
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(consts[i] / consts[j] < 16.0);
}

TEST_CASE("omega0_hat") {
  KernelProfile p = build_kernel_profile(1e-10);
  CHECK(std::abs(omega0_hat(p, 0.0) - 1.0) < 1e-9);
  for (double t : {0.5, 1.7, 3.0}) CHECK(omega0_hat(p, t) == omega0_hat(p, -t));
  // dense Riemann-sum oracle, 10^6 samples
  double t = 3.0, oracle = 0.0;
  int n = 1000000;
  double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    double x = -0.5 + (i + 0.5) * h;
    oracle += p.omega0(x) * std::cos(2.0 * M_PI * t * x) * h;
  }
  CHECK(std::abs(omega0_hat(p, 3.0) - oracle) < 1e-8);
}
