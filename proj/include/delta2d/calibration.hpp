#pragma once

#include <map>
#include <string>
#include <vector>

#include "delta2d/arith.hpp"
#include "delta2d/kernels.hpp"

namespace delta2d {

// Every empirically recorded threshold and bound constant, regenerated by
// `delta2d calibrate` and versioned with a hash of its inputs. Tests and the
// acceptance suite assert non-regression against the checked-in copy.
struct CalibrationFixture {
  int version = 1;
  std::string inputs_hash;

  double kernel_t0 = 0.0, kernel_beta = 0.0, kernel_c = 0.0;

  std::map<int, double> duality_residual;  // Q -> max residual over the n-sample
  double duality_zero_dev = 0.0;           // max |value - 1| at n = 0 over Q

  double h_bound_k = 0.0;                    // |h(y,z)| <= K / y
  std::map<double, double> h_dz_const;       // y -> max |dh/dz| * y^2

  std::map<int, double> p1bound2_c;  // Q -> envelope constant
  std::map<int, double> p2bound3_c;  // Q -> envelope constant

  std::map<int, double> lemma61_trunc;  // P -> max |I_q|/P^s past the cutoff
  std::map<int, double> lemma61_decay;  // P -> decay envelope constant

  double lemma71_c = 0.0;
  double lemma73_c = 0.0;
  double lemma78_c = 0.0;
  double lemma79_c = 0.0;
  double lemma_spkpm_c = 0.0;

  double stationary_dev = 0.0;   // Lemma 3.6 relative deviation at Q = 256
  double lemma44_dev = 0.0;      // lattice-sum vs integral deviation at Q = 256
  double plateau_dev = 0.0;      // max |p_lambda - 1| on the major-arc sample, Q = 64
  double basis_product_c = 0.0;  // |Mx1||Mx2| / (covol * meas)
  double kappa_min = 0.0;        // comparability constant
  double mu_bound_c = 0.0;       // mu_M / sqrt(covol * meas)

  double j_envelope_c = 0.0;
  double singular_series_value = 0.0;
  double singular_integral_value = 0.0;
  double n0_ratio_dev = 0.0;  // |n0/(S J P^{s-4}) - 1| at P = 16

  std::map<int, double> decomp_residual;  // P -> |N - (N0+N1+N2)| on the s=3 fixture

  std::string to_json() const;
  static CalibrationFixture from_json(const std::string& text);
  void save(const std::string& path) const;
  static CalibrationFixture load(const std::string& path);
};

// Deterministic sample of n-vectors with |n| <= Q^{3/2} (plus the caller
// usually adds n = 0 separately).
std::vector<Vec2i> sample_n_vectors(double Q, int count, uint64_t seed);

struct CalibrationOptions {
  std::string data_dir = "data";
  int jobs = 1;
  uint64_t seed = 0;
  bool include_counting = true;  // EX10 and decomposition entries (slower)
};

CalibrationFixture compute_calibration(const CalibrationOptions& opts);

// Throws calibration_error on regression (constants moving beyond 2x, or
// residual thresholds exceeded).
void check_against(const CalibrationFixture& fresh, const CalibrationFixture& reference);

std::string hash_inputs(const KernelProfile& profile, const std::vector<std::string>& pair_texts);

}  // namespace delta2d
