#pragma once

#include <cmath>
#include <complex>
#include <cstddef>

namespace delta2d {
namespace quad {

// 16-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kOrder = 16;
inline constexpr double kNodes[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
    0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
inline constexpr double kWeights[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Compensated (Neumaier) accumulator; used wherever reproducible totals
// across orderings of identical term sequences matter.
struct Neumaier {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

template <class F>
double gl_panel(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 8; ++i) {
    double dx = half * kNodes[i];
    s += kWeights[i] * (f(mid + dx) + f(mid - dx));
  }
  return s * half;
}

template <class F>
std::complex<double> gl_panel_c(F&& f, double a, double b) {
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  std::complex<double> s{0.0, 0.0};
  for (int i = 0; i < 8; ++i) {
    double dx = half * kNodes[i];
    s += kWeights[i] * (f(mid + dx) + f(mid - dx));
  }
  return s * half;
}

// Fixed-width panels; width is clamped so each panel resolves the declared
// feature scale (typically half an oscillation period).
template <class F>
double integrate(F&& f, double a, double b, double max_panel) {
  if (!(b > a)) return 0.0;
  int n = std::max(1, int(std::ceil((b - a) / max_panel)));
  double h = (b - a) / n;
  Neumaier acc;
  for (int i = 0; i < n; ++i) acc.add(gl_panel(f, a + i * h, a + (i + 1) * h));
  return acc.value();
}

template <class F>
std::complex<double> integrate_c(F&& f, double a, double b, double max_panel) {
  if (!(b > a)) return {0.0, 0.0};
  int n = std::max(1, int(std::ceil((b - a) / max_panel)));
  double h = (b - a) / n;
  Neumaier re, im;
  for (int i = 0; i < n; ++i) {
    auto v = gl_panel_c(f, a + i * h, a + (i + 1) * h);
    re.add(v.real());
    im.add(v.imag());
  }
  return {re.value(), im.value()};
}

// Panel width resolving oscillation rate |freq| (cycles per unit) against a
// smooth feature scale.
inline double osc_panel_width(double feature_scale, double freq) {
  double w = feature_scale;
  double f = std::abs(freq);
  if (f > 0) w = std::min(w, 0.5 / f);
  return w;
}

inline double e_phase(double x) { return 2.0 * M_PI * x; }
inline std::complex<double> unit_e(double x) {
  return {std::cos(2.0 * M_PI * x), std::sin(2.0 * M_PI * x)};
}

}  // namespace quad
}  // namespace delta2d
