#pragma once

#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/kernels.hpp"
#include "delta2d/oscint.hpp"
#include "delta2d/quadpair.hpp"

namespace delta2d {

struct CountReport {
  double P = 0.0;
  double Q = 0.0;  // P^{4/3}
  double N_exact = 0.0;
  double main_term = 0.0;
  double n0 = 0.0;
  double ratio_N_main = 0.0;
  double ratio_n0_main = 0.0;
  double runtime_ms = 0.0;
};

// sum over integer x in the support box of weight(x/P) [F1(x) = F2(x) = 0].
double count_points_brute(const QuadraticPair& pair, const WeightFunction& weight, double P,
                          double max_points = 1e9);

// Meet-in-the-middle for diagonal pairs with even s and product weights:
// hash-join of (G1, G2) from the first half against -(H1, H2) from the
// second; exact integer keys, compensated weight accumulation.
double count_points_split(const QuadraticPair& pair, const WeightFunction& weight, double P,
                          double max_points = 1e9);

struct SingularSeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  double crude_bound_c = 0.0;  // recorded |D_q(0)| / q^{s/2+2+eps} maximum
  i64 q_max = 0;
};

// sum_{q <= q_max} q^{-s} D_q(0); s >= 7 required for the tail bound.
SingularSeriesResult singular_series(const QuadraticPair& pair, i64 q_max, double eps);

// N_0 main-arc term via the change of variables
//   int_{M_q} I_q(w, 0) dw = P^{s-4} int_{|w| < Q^{1/2-delta}/q} J(w) dw.
double n0_term(const QuadraticPair& pair, const WeightFunction& weight, double P,
               double delta_param, i64 series_q_max = 100);

std::vector<CountReport> end_to_end_report(const QuadraticPair& pair, const WeightFunction& weight,
                                           const std::vector<double>& p_list, double delta_param,
                                           i64 series_q_max = 100);

struct DecompositionResult {
  double n_exact = 0.0;
  double n0 = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double residual = 0.0;
  double imag_abs = 0.0;
};

// Exact N(P) against N0 + N1 + N2 for s = 3 at desk scale (P <= 6).
DecompositionResult decomposition_check(const QuadraticPair& pair, const KernelProfile& profile,
                                        const WeightFunction& weight, double P,
                                        double delta_param, int jobs = 1);

}  // namespace delta2d
