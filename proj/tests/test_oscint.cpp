#include <doctest.h>

#include <cmath>

#include "delta2d/oscint.hpp"
#include "delta2d/quadrature.hpp"

using namespace delta2d;

namespace {

QuadraticPair load(const char* name) {
  return QuadraticPair::from_json_file(std::string(DELTA2D_DATA_DIR) + "/" + name);
}

}  // namespace

TEST_CASE("plateau weight shape") {
  WeightFunction w = WeightFunction::plateau_product(3);
  CHECK(w.eval1d(0.0) == 1.0);
  CHECK(w.eval1d(0.49) == 1.0);
  CHECK(w.eval1d(-0.3) == 1.0);
  CHECK(w.eval1d(1.0) == 0.0);
  CHECK(w.eval1d(-1.2) == 0.0);
  CHECK(w.eval1d(0.75) > 0.0);
  CHECK(w.eval1d(0.75) < 1.0);
  CHECK(w.eval1d(0.6) > w.eval1d(0.9));
  Eigen::VectorXd x(3);
  x << 0.2, -0.4, 0.75;
  CHECK(w(x) == w.eval1d(0.75));
  CHECK_THROWS_AS(WeightFunction::plateau_product(3, 1.0, 0.5), validation_error);
}

TEST_CASE("iq basics") {
  QuadraticPair p = load("toy3diag.json");
  WeightFunction w = WeightFunction::plateau_product(3);
  VecZ zero = VecZ::Zero(3);
  double P = 4.0;
  // w = 0, u = 0: P^s int w
  double mass1 = quad::integrate([&](double x) { return w.eval1d(x); }, -1.0, 1.0, 1.0 / 64);
  cplx v = iq(p, w, 1, {0.0, 0.0}, zero, P);
  CHECK(v.real() == doctest::Approx(std::pow(P, 3) * std::pow(mass1, 3)).epsilon(1e-9));
  CHECK(std::abs(v.imag()) < 1e-12 * std::abs(v.real()));
  CHECK_THROWS_AS(iq(p, WeightFunction::plateau_product(4), 1, {0.0, 0.0}, zero, P),
                  validation_error);
}

TEST_CASE("product path agrees with the general tensor path") {
  QuadraticPair p = load("toy3diag.json");
  // same Hessians fed through a general (non-product) callable weight
  WeightFunction prod = WeightFunction::plateau_product(3);
  WeightFunction gen = WeightFunction::general(
      3,
      [&](const Eigen::VectorXd& x) {
        double v = 1.0;
        for (int i = 0; i < 3; ++i) v *= prod.eval1d(x(i));
        return v;
      },
      1.0);
  VecZ u(3);
  u << 1, 0, -1;
  for (double P : {2.0, 4.0}) {
    for (auto [w1, w2] : {std::pair{0.0, 0.0}, {0.01, -0.02}}) {
      cplx a = iq(p, prod, 2, {w1, w2}, u, P);
      cplx b = iq(p, gen, 2, {w1, w2}, u, P);
      CHECK(std::abs(a - b) < 1e-6 * std::pow(P, 3));
    }
  }
  // general path refuses s > 4
  QuadraticPair ex10 = load("ex10.json");
  WeightFunction gen10 = WeightFunction::general(
      10, [](const Eigen::VectorXd&) { return 1.0; }, 1.0);
  VecZ z10 = VecZ::Zero(10);
  CHECK_THROWS_AS(iq(ex10, gen10, 1, {0.0, 0.0}, z10, 2.0), budget_error);
}

TEST_CASE("iq truncation in u") {
  QuadraticPair p = load("toy3diag.json");
  WeightFunction w = WeightFunction::plateau_product(3);
  double P = 8.0;
  i64 q = 3;
  Eigen::Vector2d ww(1.0 / (P * P), 0.0);
  double cutoff = double(q) / P * (1.0 + P * P * ww.norm()) * std::pow(P, 0.3);
  VecZ u(3);
  u << i64(std::ceil(cutoff)) + 1, i64(std::ceil(cutoff)) + 1, 0;
  CHECK(std::abs(iq(p, w, q, ww, u, P)) < 1e-2 * std::pow(P, 3));
}

TEST_CASE("quadrature convergence: halving panels is stable") {
  // same integral with the default panel rule vs a twice-finer oscillation rule
  QuadraticPair p = load("toy3diag.json");
  WeightFunction w = WeightFunction::plateau_product(3);
  VecZ u(3);
  u << 2, -1, 1;
  cplx a = iq(p, w, 2, {0.02, -0.01}, u, 8.0);
  // the engine already places >= 2 panels per oscillation; compare against
  // a brute midpoint rule as an independent check
  double b = 1.0;
  int n = 20000;
  cplx prod{1.0, 0.0};
  for (int j = 0; j < 3; ++j) {
    double gamma = 0.02 * double(p.h1()(j, j) / 2) - 0.01 * double(p.h2()(j, j) / 2);
    cplx acc{0.0, 0.0};
    double h = 2.0 * b / n;
    for (int i = 0; i < n; ++i) {
      double x = -b + (i + 0.5) * h;
      acc += w.eval1d(x) * quad::unit_e(64.0 * gamma * x * x - 8.0 * x * double(u(j)) / 2.0) * h;
    }
    prod *= acc;
  }
  prod *= std::pow(8.0, 3);
  CHECK(std::abs(a - prod) < 1e-5 * std::pow(8.0, 3));
}

TEST_CASE("j_of_w basics") {
  QuadraticPair p = load("toy3diag.json");
  WeightFunction w = WeightFunction::plateau_product(3);
  double mass1 = quad::integrate([&](double x) { return w.eval1d(x); }, -1.0, 1.0, 1.0 / 64);
  cplx j0 = j_of_w(p, w, {0.0, 0.0});
  CHECK(j0.real() == doctest::Approx(std::pow(mass1, 3)).epsilon(1e-9));
  for (auto [w1, w2] : {std::pair{0.3, -0.8}, {2.0, 1.0}}) {
    cplx jp = j_of_w(p, w, {w1, w2});
    cplx jm = j_of_w(p, w, {-w1, -w2});
    CHECK(std::abs(jp - std::conj(jm)) < 1e-10);
  }
}

TEST_CASE("diagonal J engine matches direct evaluation") {
  QuadraticPair p = load("toy3diag.json");
  WeightFunction w = WeightFunction::plateau_product(3);
  DiagonalJEngine engine(p, w);
  for (auto [w1, w2] : {std::pair{0.0, 0.0}, {0.7, -0.3}, {3.1, 2.2}}) {
    cplx direct = j_of_w(p, w, {w1, w2});
    CHECK(std::abs(engine.j({w1, w2}) - direct) < 1e-6);
  }
  // disk integral vs direct polar quadrature with fresh j evaluations
  double R = 1.5;
  cplx disk = engine.disk_integral(R);
  quad::Neumaier re, im;
  int nr = 160;
  for (int ir = 0; ir < nr; ++ir) {
    double r = (ir + 0.5) * R / nr;
    int nt = 256;
    cplx ring{0.0, 0.0};
    for (int it = 0; it < nt; ++it) {
      double th = 2.0 * M_PI * it / nt;
      ring += j_of_w(p, w, {r * std::cos(th), r * std::sin(th)});
    }
    re.add((ring * (2.0 * M_PI / nt) * r * (R / nr)).real());
    im.add((ring * (2.0 * M_PI / nt) * r * (R / nr)).imag());
  }
  CHECK(disk.real() == doctest::Approx(re.value()).epsilon(2e-3));
  CHECK(std::abs(disk.imag()) < 1e-8);
}

TEST_CASE("singular integral") {
  QuadraticPair ex10 = load("ex10.json");
  WeightFunction w = WeightFunction::plateau_product(10);
  CHECK_THROWS_AS(singular_integral(load("toy3diag.json"), WeightFunction::plateau_product(3), 0.1),
                  validation_error);  // s >= 6
  auto r = singular_integral(ex10, w, 0.5);
  CHECK(r.value > 0.0);
  CHECK(r.imag_abs < 1e-6 * r.value);
  CHECK(r.tail_bound < 0.5);
  // stability under doubling W_max
  DiagonalJEngine engine(ex10, w);
  double v1 = engine.disk_integral(r.w_max).real();
  double v2 = engine.disk_integral(2.0 * r.w_max).real();
  CHECK(std::abs(v2 - v1) < 0.01 * std::abs(v1));
  // tail estimate halves by ~2^{-(s-5)/2} per doubling
  double slope = std::log2(r.tail_bound) - std::log2(r.tail_bound * std::pow(2.0, -2.5));
  CHECK(slope == doctest::Approx(2.5));
}
