#include "delta2d/calibration.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "delta2d/counting.hpp"
#include "delta2d/deltasym.hpp"
#include "delta2d/expsum.hpp"
#include "delta2d/oscint.hpp"
#include "delta2d/parallel.hpp"
#include "delta2d/pfunc.hpp"
#include "delta2d/quadpair.hpp"
#include "delta2d/quadrature.hpp"
#include "json.hpp"

namespace delta2d {

namespace {

using nlohmann::json;

json map_to_json(const std::map<int, double>& m) {
  json j = json::object();
  for (auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::map<int, double> json_to_map(const json& j) {
  std::map<int, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[std::stoi(it.key())] = it.value().get<double>();
  return m;
}

json dmap_to_json(const std::map<double, double>& m) {
  json j = json::object();
  for (auto& [k, v] : m) {
    std::ostringstream key;
    key << k;
    j[key.str()] = v;
  }
  return j;
}

std::map<double, double> json_to_dmap(const json& j) {
  std::map<double, double> m;
  for (auto it = j.begin(); it != j.end(); ++it) m[std::stod(it.key())] = it.value().get<double>();
  return m;
}

}  // namespace

std::string CalibrationFixture::to_json() const {
  json j;
  j["version"] = version;
  j["inputs_hash"] = inputs_hash;
  j["kernel"] = {{"t0", kernel_t0}, {"beta", kernel_beta}, {"c", kernel_c}};
  j["duality_residual"] = map_to_json(duality_residual);
  j["duality_zero_dev"] = duality_zero_dev;
  j["h_bound_k"] = h_bound_k;
  j["h_dz_const"] = dmap_to_json(h_dz_const);
  j["p1bound2_c"] = map_to_json(p1bound2_c);
  j["p2bound3_c"] = map_to_json(p2bound3_c);
  j["lemma61_trunc"] = map_to_json(lemma61_trunc);
  j["lemma61_decay"] = map_to_json(lemma61_decay);
  j["lemma71_c"] = lemma71_c;
  j["lemma73_c"] = lemma73_c;
  j["lemma78_c"] = lemma78_c;
  j["lemma79_c"] = lemma79_c;
  j["lemma_spkpm_c"] = lemma_spkpm_c;
  j["stationary_dev"] = stationary_dev;
  j["lemma44_dev"] = lemma44_dev;
  j["plateau_dev"] = plateau_dev;
  j["basis_product_c"] = basis_product_c;
  j["kappa_min"] = kappa_min;
  j["mu_bound_c"] = mu_bound_c;
  j["j_envelope_c"] = j_envelope_c;
  j["singular_series_value"] = singular_series_value;
  j["singular_integral_value"] = singular_integral_value;
  j["n0_ratio_dev"] = n0_ratio_dev;
  j["decomp_residual"] = map_to_json(decomp_residual);
  return j.dump(2);
}

CalibrationFixture CalibrationFixture::from_json(const std::string& text) {
  json j = json::parse(text);
  CalibrationFixture f;
  f.version = j.at("version").get<int>();
  f.inputs_hash = j.at("inputs_hash").get<std::string>();
  f.kernel_t0 = j.at("kernel").at("t0").get<double>();
  f.kernel_beta = j.at("kernel").at("beta").get<double>();
  f.kernel_c = j.at("kernel").at("c").get<double>();
  f.duality_residual = json_to_map(j.at("duality_residual"));
  f.duality_zero_dev = j.at("duality_zero_dev").get<double>();
  f.h_bound_k = j.at("h_bound_k").get<double>();
  f.h_dz_const = json_to_dmap(j.at("h_dz_const"));
  f.p1bound2_c = json_to_map(j.at("p1bound2_c"));
  f.p2bound3_c = json_to_map(j.at("p2bound3_c"));
  f.lemma61_trunc = json_to_map(j.at("lemma61_trunc"));
  f.lemma61_decay = json_to_map(j.at("lemma61_decay"));
  f.lemma71_c = j.at("lemma71_c").get<double>();
  f.lemma73_c = j.at("lemma73_c").get<double>();
  f.lemma78_c = j.at("lemma78_c").get<double>();
  f.lemma79_c = j.at("lemma79_c").get<double>();
  f.lemma_spkpm_c = j.at("lemma_spkpm_c").get<double>();
  f.stationary_dev = j.at("stationary_dev").get<double>();
  f.lemma44_dev = j.at("lemma44_dev").get<double>();
  f.plateau_dev = j.at("plateau_dev").get<double>();
  f.basis_product_c = j.at("basis_product_c").get<double>();
  f.kappa_min = j.at("kappa_min").get<double>();
  f.mu_bound_c = j.at("mu_bound_c").get<double>();
  f.j_envelope_c = j.at("j_envelope_c").get<double>();
  f.singular_series_value = j.at("singular_series_value").get<double>();
  f.singular_integral_value = j.at("singular_integral_value").get<double>();
  f.n0_ratio_dev = j.at("n0_ratio_dev").get<double>();
  f.decomp_residual = json_to_map(j.at("decomp_residual"));
  return f;
}

void CalibrationFixture::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write fixture: " + path);
  out << to_json() << "\n";
}

CalibrationFixture CalibrationFixture::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot read fixture: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<Vec2i> sample_n_vectors(double Q, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  double nmax = std::pow(Q, 1.5);
  std::uniform_int_distribution<i64> dist(-i64(std::floor(nmax)), i64(std::floor(nmax)));
  std::vector<Vec2i> out;
  out.reserve(size_t(count));
  while (i64(out.size()) < count) {
    Vec2i n{dist(rng), dist(rng)};
    if (n.is_zero()) continue;
    if (n.norm() > nmax) continue;
    out.push_back(n);
  }
  return out;
}

std::string hash_inputs(const KernelProfile& profile, const std::vector<std::string>& pair_texts) {
  // FNV-1a over the kernel parameters' bit patterns and the fixture texts.
  uint64_t h = 1469598103934665603ULL;
  auto mix_bytes = [&h](const void* p, size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    for (size_t i = 0; i < len; ++i) {
      h ^= b[i];
      h *= 1099511628211ULL;
    }
  };
  for (double v : {profile.t0, profile.beta, profile.c}) mix_bytes(&v, sizeof(v));
  for (const auto& t : pair_texts) mix_bytes(t.data(), t.size());
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

// ---------------------------------------------------------------------------
// compute_calibration
// ---------------------------------------------------------------------------

namespace {

double max_ratio(double a, double b) { return std::max(a / b, b / a); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// |w| samples in units of a decay length.
const double kDecaySteps[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};

}  // namespace

CalibrationFixture compute_calibration(const CalibrationOptions& opts) {
  CalibrationFixture fix;
  KernelProfile prof = build_kernel_profile(1e-10);
  fix.kernel_t0 = prof.t0;
  fix.kernel_beta = prof.beta;
  fix.kernel_c = prof.c;

  auto path = [&](const char* name) { return opts.data_dir + "/" + name; };
  std::vector<std::string> pair_texts;
  for (const char* name : {"toy3.json", "toy3bad.json", "toy3diag.json", "toy4.json",
                           "toy4dd.json", "toy4split.json", "toy5.json", "ex10.json"})
    pair_texts.push_back(slurp(path(name)));
  fix.inputs_hash = hash_inputs(prof, pair_texts);

  QuadraticPair toy3 = QuadraticPair::from_json_text(pair_texts[0]);
  QuadraticPair toy3diag = QuadraticPair::from_json_text(pair_texts[2]);
  QuadraticPair toy4 = QuadraticPair::from_json_text(pair_texts[3]);
  QuadraticPair toy5 = QuadraticPair::from_json_text(pair_texts[6]);
  QuadraticPair ex10 = QuadraticPair::from_json_text(pair_texts[7]);

  // --- duality residuals ---
  for (int qi : {8, 16, 32}) {
    DualityEvaluator ev(prof, double(qi), opts.jobs);
    double worst = ev.eval({0, 0}).residual;  // n = 0 is part of the sample
    fix.duality_zero_dev = std::max(fix.duality_zero_dev, worst);
    for (const Vec2i& n : sample_n_vectors(double(qi), 200, opts.seed))
      worst = std::max(worst, ev.eval(n).residual);
    fix.duality_residual[qi] = worst;
  }

  // --- h bounds ---
  for (int iy = 1; iy <= 100; ++iy) {
    double y = 2.0 * iy / 100.0;
    for (int iz = -40; iz <= 40; ++iz)
      fix.h_bound_k = std::max(fix.h_bound_k, std::abs(h_eval(prof, y, iz * 0.05)) * y);
  }
  for (double y : {0.05, 0.1, 0.2}) {
    double dz = 1e-5, worst = 0.0;
    for (int iz = -40; iz <= 40; ++iz) {
      double z = iz * 0.05;
      worst = std::max(worst,
                       std::abs(h_eval(prof, y, z + dz) - h_eval(prof, y, z - dz)) / (2.0 * dz));
    }
    fix.h_dz_const[y] = worst * y * y;
  }

  // --- p1 / p2 envelope constants (N = 3 in both envelopes) ---
  for (int qi : {16, 64, 256}) {
    double Q = qi, sq = std::sqrt(Q);
    PContext ctx = make_pcontext(prof, Q);
    double c1 = 0.0;
    for (i64 q : {i64(1), i64(2), i64(4), i64(std::floor(sq))}) {
      for (double step : kDecaySteps) {
        double t = step / (double(q) * sq);
        double env = Q / (double(q) * (1.0 + t * std::pow(Q, 1.5))) *
                     std::pow(1.0 + t * double(q) * sq, -3.0);
        c1 = std::max(c1, std::abs(p1_radial(ctx, q, t)) / env);
      }
    }
    fix.p1bound2_c[qi] = c1;

    double c2 = 0.0;
    Vec2i r{i64(std::floor(0.8 * sq)), i64(std::floor(0.35 * sq))};
    double rn = r.norm();
    for (i64 q : {i64(1), i64(2)}) {
      for (double sa : {0.0, 1.0, 3.0}) {
        for (double sb : {0.0, 1.0, 3.0}) {
          double wr = sa / (double(q) * sq) * rn;   // |w| k q sqrt(Q) = sa along r-hat
          double wrp = sb / Q * rn;                 // |w.perp(r)| Q = sb
          double env = std::pow(1.0 + sa + sb, -3.0);
          c2 = std::max(c2, std::abs(p2_eval_proj(ctx, r, 1, q, wr, wrp)) / env);
        }
      }
    }
    fix.p2bound3_c[qi] = c2;
  }

  // --- Lemma 6.1 constants on the diagonal s = 3 fixture ---
  {
    WeightFunction wt = WeightFunction::plateau_product(3);
    VecZ zero = VecZ::Zero(3);
    for (int pi : {8, 16, 32}) {
      double P = pi;
      i64 q = 3;
      double trunc_worst = 0.0;
      for (double wmag : {0.0, 1.0 / (P * P), 4.0 / (P * P)}) {
        Eigen::Vector2d w(wmag, 0.5 * wmag);
        double cutoff = double(q) / P * (1.0 + P * P * w.norm()) * std::pow(P, 0.3);
        VecZ u(3);
        u << i64(std::ceil(cutoff)) + 1, i64(std::ceil(cutoff)), 1;
        trunc_worst = std::max(trunc_worst,
                               std::abs(iq(toy3diag, wt, q, w, u, P)) / std::pow(P, 3));
      }
      fix.lemma61_trunc[pi] = trunc_worst;

      double decay_worst = 0.0;
      for (double nu : {0.0, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        for (double ang : {0.0, 0.7, 1.9, 3.5, 5.1}) {
          Eigen::Vector2d w(nu / (P * P) * std::cos(ang), nu / (P * P) * std::sin(ang));
          double env = std::pow(P, 3);
          for (const auto& [lam, mu] : toy3diag.pencil_roots())
            env /= std::sqrt(1.0 + P * P * std::abs(lam * w(0) + mu * w(1)));
          decay_worst = std::max(decay_worst, std::abs(iq(toy3diag, wt, 1, w, zero, P)) / env);
        }
      }
      fix.lemma61_decay[pi] = decay_worst;
    }
  }

  // --- exponential-sum bound constants ---
  {
    std::mt19937_64 rng(opts.seed + 1);
    std::uniform_int_distribution<i64> du(-9, 9);
    auto sample_u = [&](int s) {
      VecZ u(s);
      for (int i = 0; i < s; ++i) u(i) = du(rng);
      return u;
    };
    // Lemma 7.1 on toy4 and toy5
    for (const QuadraticPair* pr : {&toy4, &toy5}) {
      int s = pr->s();
      for (i64 p : {3, 5, 7, 11, 13}) {
        if (pr->df_divisible_by(p)) continue;
        for (int t = 0; t < 6; ++t) {
          VecZ u = sample_u(s);
          if (dual_variety_mod(*pr, u, p) == 0) continue;
          double dp = std::abs(dq_fast(*pr, p, u).value);
          fix.lemma71_c = std::max(fix.lemma71_c, dp / std::pow(double(p), 0.5 * (s + 2)));
        }
      }
    }
    // Lemma 7.3 on toy3
    for (i64 q = 1; q <= 40; ++q)
      for (int t = 0; t < 3; ++t) {
        VecZ u = sample_u(3);
        fix.lemma73_c = std::max(fix.lemma73_c, std::abs(dq_fast(toy3, q, u).value) /
                                                    std::pow(double(q), 0.5 * 3 + 2.0 + 0.1));
      }
    // Lemma 7.8 on toy3
    for (i64 q = 1; q <= 12; ++q)
      for (i64 d : divisors(q))
        for (i64 cx = -3; cx <= 3; ++cx)
          for (i64 cy = 0; cy <= 3; ++cy) {
            Vec2i c{cx, cy};
            if (!c.primitive()) continue;
            DirectionData dir = classify_direction(toy3, c);
            VecZ u = sample_u(3);
            i64 g = std::gcd(q / d, std::abs(dir.last_coordinate(u)));
            i128 dh = dir.det_hc < 0 ? -dir.det_hc : dir.det_hc;
            g = std::gcd(g, i64(dh % (g == 0 ? 1 : g)) == 0 ? g : std::gcd(g, i64(dh % g)));
            double gval = std::max<double>(1.0, double(g));
            double env = double(d) * std::pow(double(q), 0.5 * 3 + 1.0) * std::sqrt(gval);
            fix.lemma78_c = std::max(
                fix.lemma78_c, std::abs(s_qdc_fast(toy3, q, d, c, u).value) / env);
          }
    // Lemma 7.9 on toy4 (bad directions exist there)
    for (const Vec2i& c : toy4.bad_directions())
      for (i64 p : {3, 5, 7, 11, 13}) {
        if (toy4.df_divisible_by(p)) continue;
        for (int t = 0; t < 4; ++t) {
          VecZ u = sample_u(4);
          double g1 = 1.0, g2 = 1.0;
          for (int i = 0; i < 4; ++i)
            if (u(i) % p == 0) {
              g1 = double(p);
              break;
            }
          if (dual_variety_mod(toy4, u, p) == 0) g2 = double(p);
          double env = std::pow(double(p), 0.5 * 4 + 1.0) * std::sqrt(g1) * std::sqrt(g2);
          fix.lemma79_c =
              std::max(fix.lemma79_c, std::abs(s_qdc_fast(toy4, p, p, c, u).value) / env);
        }
      }
    // Lemma spkpm on toy3
    for (auto [p, m, k] : std::vector<std::array<i64, 3>>{{3, 1, 2}, {5, 1, 1}, {3, 2, 2}}) {
      Vec2i c{1, 2};
      DirectionData dir = classify_direction(toy3, c);
      int k1 = int(std::min<i64>(k - m, dir.det_hc % p == 0 ? valuation(i64(dir.det_hc), p) : 0));
      i64 pk = 1, pm = 1;
      for (int i = 0; i < k; ++i) pk *= p;
      for (int i = 0; i < m; ++i) pm *= p;
      for (int t = 0; t < 4; ++t) {
        VecZ u = sample_u(3);
        double env = std::pow(double(p), double(k) * (0.5 * 3 + 1.0) + double(m) + 0.5 * k1);
        fix.lemma_spkpm_c =
            std::max(fix.lemma_spkpm_c, std::abs(s_qdc_fast(toy3, pk, pm, c, u).value) / env);
      }
    }
  }

  // --- Lemma 3.6 stationary agreement at Q = 256 ---
  {
    double Q = 256.0, sq = 16.0;
    PContext ctx = make_pcontext(prof, Q);
    double worst = 0.0;
    for (Vec2i r : {Vec2i{9, 4}, Vec2i{12, 5}, Vec2i{15, 2}}) {
      double rn = r.norm();
      for (double arg : {0.0, 0.5}) {
        for (double wrs : {0.0, 0.2}) {
          // k q (Q |w.r| + 1) <= Q^{0.8}: with k = q = 1 this allows |w.r| <= 0.3
          double wr = wrs / Q * 80.0;  // up to 0.0625
          double wrp = arg * rn / std::pow(Q, 1.5);
          double lhs = p2_eval_proj(ctx, r, 1, 1, wr, wrp);
          double asym = prof.c * sq / rn * omega0_hat(prof, std::pow(Q, 1.5) * wrp / rn);
          worst = std::max(worst, std::abs(lhs - asym) / std::abs(asym));
        }
      }
    }
    fix.stationary_dev = worst;
  }

  // --- Lemma 4.4 lattice-sum vs integral at Q = 256 ---
  {
    double Q = 256.0, sq = 16.0;
    PContext ctx = make_pcontext(prof, Q);
    i64 q = 16;
    Lattice2D lat = lattice_from({1, 3}, q);
    Eigen::Vector2d w(1e-4, 5e-5);
    double lhs = 0.0;
    for (const Vec2i& r : annulus_points(lat, sq / 2.0, sq)) {
      i64 ct = r.content();
      i64 k = ct / std::gcd(ct, q);
      double wr = w(0) * double(r.x) + w(1) * double(r.y);
      double wrp = w(0) * double(r.y) - w(1) * double(r.x);
      lhs += prof.omega(r.norm() / sq) * p2_eval_proj(ctx, r, k, q, wr, wrp);
    }
    // rhs: (c sqrt(Q)/q) \int |r|^{-1} omega(|r|/sqrt(Q)) what0(Q^{3/2} w.perp(r)/|r|) dr
    double rhs = 0.0;
    int ntheta = 256;
    for (int it = 0; it < ntheta; ++it) {
      double th = 2.0 * M_PI * (it + 0.5) / ntheta;
      double sinpart = w(0) * std::sin(th) - w(1) * std::cos(th);  // w . perp(rhat)
      rhs += quad::integrate(
                 [&](double t) {
                   return prof.omega(t / sq) * omega0_hat(prof, std::pow(Q, 1.5) * sinpart);
                 },
                 sq / 2.0, sq, 0.5) *
             (2.0 * M_PI / ntheta);
    }
    rhs *= prof.c * sq / double(q);
    fix.lemma44_dev = std::abs(lhs - rhs) / std::abs(rhs);
  }

  // --- major-arc plateau at Q = 64, delta = 0.1 ---
  {
    double Q = 64.0, delta = 0.1;
    PContext ctx = make_pcontext(prof, Q);
    std::mt19937_64 rng(opts.seed + 2);
    double qcut = std::pow(Q, 0.5 - delta);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      i64 q = 1 + i64(uni(rng) * (qcut - 1.0));
      std::uniform_int_distribution<i64> da(0, q - 1);
      Vec2i a;
      do {
        a = {da(rng), da(rng)};
      } while (std::gcd(a.content(), q) != 1);
      double rad = std::pow(Q, -1.0 - delta) / double(q);
      double wmag = rad * uni(rng), ang = 2.0 * M_PI * uni(rng);
      Eigen::Vector2d w(wmag * std::cos(ang), wmag * std::sin(ang));
      double pl = p_lambda(ctx, lattice_from(a, q), w);
      worst = std::max(worst, std::abs(pl - 1.0));
    }
    fix.plateau_dev = worst;
  }

  // --- geometry-of-numbers constants over 500 random instances ---
  {
    std::mt19937_64 rng(opts.seed + 3);
    std::uniform_int_distribution<i64> dq50(1, 50);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double kappa = 1e9, bprod = 0.0, mu_c = 0.0;
    for (int t = 0; t < 500; ++t) {
      i64 q = dq50(rng);
      std::uniform_int_distribution<i64> da(0, q - 1);
      Vec2i a;
      do {
        a = {da(rng), da(rng)};
      } while (std::gcd(a.content(), q) != 1);
      double Q = std::pow(2.0, 6.0 * uni(rng));  // 1..64
      double wscale = 1.0 / (double(q) * std::sqrt(Q));
      WeightedEmbedding e{(2.0 * uni(rng) - 1.0) * wscale, (2.0 * uni(rng) - 1.0) * wscale, Q};
      Lattice2D lat = lattice_from(a, q);
      auto [x1, x2] = reduced_basis(lat, e);
      double n1 = e.norm(x1), n2 = e.norm(x2);
      double meas = parallelogram_measure(e);
      bprod = std::max(bprod, n1 * n2 / (double(q) * meas));
      mu_c = std::max(mu_c, n1 / std::sqrt(double(q) * meas));
      for (int i = 0; i < 20; ++i) {
        double r1 = 2.0 * uni(rng) - 1.0, r2 = 2.0 * uni(rng) - 1.0;
        double num = std::sqrt(e.gram(x1, x1) * r1 * r1 + 2.0 * e.gram(x1, x2) * r1 * r2 +
                               e.gram(x2, x2) * r2 * r2);
        double den = std::abs(r1) * n1 + std::abs(r2) * n2;
        if (den > 0.0) kappa = std::min(kappa, num / den);
      }
    }
    fix.kappa_min = kappa;
    fix.basis_product_c = bprod;
    fix.mu_bound_c = mu_c;
  }

  // --- counting-side entries ---
  if (opts.include_counting) {
    WeightFunction wt10 = WeightFunction::plateau_product(10);
    SingularIntegralResult si = singular_integral(ex10, wt10, 0.25);
    fix.j_envelope_c = si.envelope_c;
    fix.singular_integral_value = si.value;
    SingularSeriesResult ss = singular_series(ex10, 100, 0.1);
    fix.singular_series_value = ss.value;
    double P = 16.0;
    double n0 = n0_term(ex10, wt10, P, 0.05);
    fix.n0_ratio_dev = std::abs(n0 / (ss.value * si.value * std::pow(P, 6)) - 1.0);
    WeightFunction wt3 = WeightFunction::plateau_product(3);
    for (int pi : {4, 6}) {
      DecompositionResult d = decomposition_check(toy3, prof, wt3, double(pi), 0.05, opts.jobs);
      fix.decomp_residual[pi] = d.residual;
    }
  }

  return fix;
}

void check_against(const CalibrationFixture& fresh, const CalibrationFixture& reference) {
  if (fresh.inputs_hash != reference.inputs_hash)
    throw calibration_error("fixture inputs hash mismatch (inputs changed; re-run calibrate)");
  auto check_map2x = [](const std::map<int, double>& a, const std::map<int, double>& b,
                        const char* what) {
    for (auto& [k, v] : a) {
      auto it = b.find(k);
      if (it == b.end()) throw calibration_error(std::string(what) + ": missing key");
      if (max_ratio(v, it->second) > 2.0)
        throw calibration_error(std::string(what) + ": constant moved beyond 2x");
    }
  };
  check_map2x(fresh.p1bound2_c, reference.p1bound2_c, "p1 envelope");
  check_map2x(fresh.p2bound3_c, reference.p2bound3_c, "p2 envelope");
  check_map2x(fresh.lemma61_decay, reference.lemma61_decay, "I_q decay envelope");
  for (auto& [q, v] : fresh.duality_residual) {
    auto it = reference.duality_residual.find(q);
    if (it == reference.duality_residual.end())
      throw calibration_error("duality residual: missing Q");
    if (v > 1.05 * it->second + 1e-12)
      throw calibration_error("duality residual regression at Q=" + std::to_string(q));
  }
  if (max_ratio(fresh.lemma71_c, reference.lemma71_c) > 2.0 ||
      max_ratio(fresh.lemma73_c, reference.lemma73_c) > 2.0 ||
      max_ratio(fresh.lemma78_c, reference.lemma78_c) > 2.0 ||
      max_ratio(fresh.lemma79_c, reference.lemma79_c) > 2.0)
    throw calibration_error("exponential-sum bound constant moved beyond 2x");
  if (fresh.plateau_dev > 1.05 * reference.plateau_dev + 1e-12)
    throw calibration_error("major-arc plateau regression");
}

}  // namespace delta2d
