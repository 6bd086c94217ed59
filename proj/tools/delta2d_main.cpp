// delta2d: two-dimensional delta symbol toolkit.
//
// Subcommands: delta, expsum, lattice, pfunc, integral, count, calibrate,
// report. Exit codes: 0 success, 2 validation error, 3 budget guard,
// 4 calibration regression. Errors are emitted as JSON on stderr.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>

#include "delta2d/calibration.hpp"
#include "delta2d/counting.hpp"
#include "delta2d/deltasym.hpp"
#include "delta2d/expsum.hpp"
#include "delta2d/lattice.hpp"
#include "delta2d/oscint.hpp"
#include "delta2d/pfunc.hpp"
#include "delta2d/quadpair.hpp"
#include "json.hpp"

using namespace delta2d;
using nlohmann::json;

namespace {

VecZ parse_csv_vec(const std::string& text) {
  std::vector<i64> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stoll(item));
  VecZ v(vals.size());
  for (size_t i = 0; i < vals.size(); ++i) v(i64(i)) = vals[i];
  return v;
}

Vec2i parse_vec2(const std::string& text) {
  VecZ v = parse_csv_vec(text);
  if (v.size() != 2) throw validation_error("expected x,y");
  return {v(0), v(1)};
}

void emit(const json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    if (!out) throw validation_error("cannot open output: " + out_path);
    out << j.dump(2) << "\n";
  }
}

json expsum_json(const ExpSumValue& v) {
  const char* prov = v.provenance == Provenance::brute ? "brute"
                     : v.provenance == Provenance::multiplicative ? "multiplicative"
                                                                  : "closed_form";
  return json{{"re", v.value.real()},
              {"im", v.value.imag()},
              {"modulus", v.modulus},
              {"imag_residual", v.imag_residual},
              {"provenance", prov}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-dimensional delta symbol toolkit"};
  app.require_subcommand(1);
  int jobs = 1;
  uint64_t seed = 0;
  app.add_option("--jobs", jobs, "worker cap for parallel sections");
  app.add_option("--seed", seed, "seed for randomized checks");

  // ---- delta ----
  auto* delta = app.add_subcommand("delta", "delta symbol identities");
  auto* verify = delta->add_subcommand("verify", "evaluate the duality right side at one n");
  double vq = 16.0;
  std::string vn = "0,0", vmode = "duality", vout;
  bool vforce = false;
  verify->add_option("--Q", vq, "delta-symbol parameter Q")->required();
  verify->add_option("--n", vn, "target vector x,y")->required();
  verify->add_option("--mode", vmode, "duality | closed | quad");
  verify->add_option("--json", vout, "write the report to a file");
  verify->add_flag("--force", vforce, "lift the Q cost guard");

  // ---- expsum ----
  auto* es = app.add_subcommand("expsum", "complete exponential sums");
  std::string es_pair;
  es->add_option("--pair", es_pair, "pair JSON file")->required();
  auto* dq = es->add_subcommand("dq", "D_q(u)");
  i64 dq_q = 1;
  std::string dq_u;
  dq->add_option("--q", dq_q)->required();
  dq->add_option("--u", dq_u)->required();
  auto* sq = es->add_subcommand("sqdc", "S_{q,dc}(u)");
  i64 sq_q = 1, sq_d = 1;
  std::string sq_c, sq_u;
  sq->add_option("--q", sq_q)->required();
  sq->add_option("--d", sq_d)->required();
  sq->add_option("--c", sq_c)->required();
  sq->add_option("--u", sq_u)->required();
  auto* esc = es->add_subcommand("check", "fast vs brute oracle sweep");
  i64 es_maxq = 8;
  esc->add_option("--max-q", es_maxq);

  // ---- lattice ----
  auto* lat = app.add_subcommand("lattice", "Lambda(a,q) inspection");
  std::string lat_a = "1,0";
  i64 lat_q = 1;
  double lat_Q = 1.0, lat_w1 = 0.0, lat_w2 = 0.0;
  lat->add_option("--a", lat_a)->required();
  lat->add_option("--q", lat_q)->required();
  lat->add_option("--Q", lat_Q);
  lat->add_option("--w1", lat_w1);
  lat->add_option("--w2", lat_w2);

  // ---- pfunc ----
  auto* pf = app.add_subcommand("pfunc", "kernel p-functions");
  double pf_Q = 16.0, pf_w1 = 0.0, pf_w2 = 0.0;
  i64 pf_q = 1;
  std::string pf_a;
  pf->add_option("--Q", pf_Q)->required();
  pf->add_option("--q", pf_q)->required();
  pf->add_option("--w1", pf_w1);
  pf->add_option("--w2", pf_w2);
  pf->add_option("--a", pf_a, "with a residue: evaluate p_Lambda instead of p_1");

  // ---- integral ----
  auto* integ = app.add_subcommand("integral", "oscillatory integrals");
  std::string ig_pair;
  double ig_w1 = 0.0, ig_w2 = 0.0, ig_tol = 0.25;
  bool ig_singular = false;
  integ->add_option("--pair", ig_pair)->required();
  integ->add_option("--w1", ig_w1);
  integ->add_option("--w2", ig_w2);
  integ->add_flag("--singular", ig_singular, "compute the singular integral");
  integ->add_option("--tol", ig_tol, "tail tolerance for --singular");

  // ---- count ----
  auto* count = app.add_subcommand("count", "point counts and main terms");
  auto* crun = count->add_subcommand("run", "end-to-end report");
  std::string c_pair, c_plist = "8,12,16", c_out, c_format = "json";
  double c_delta = 0.05;
  crun->add_option("--pair", c_pair)->required();
  crun->add_option("--P", c_plist, "comma-separated P values");
  crun->add_option("--delta", c_delta);
  crun->add_option("--out", c_out);
  crun->add_option("--format", c_format, "json | csv");

  // ---- calibrate ----
  auto* cal = app.add_subcommand("calibrate", "regenerate the threshold fixture");
  std::string cal_data = "data", cal_out, cal_check;
  bool cal_fast = false;
  cal->add_option("--data", cal_data, "fixture pair directory");
  cal->add_option("--out", cal_out, "output fixture path");
  cal->add_option("--check", cal_check, "compare against an existing fixture (exit 4 on regression)");
  cal->add_flag("--fast", cal_fast, "skip the slow counting entries");

  // ---- report ----
  auto* rep = app.add_subcommand("report", "render a count report as CSV columns");
  std::string rep_in, rep_out;
  rep->add_option("--in", rep_in)->required();
  rep->add_option("--out", rep_out);

  CLI11_PARSE(app, argc, argv);

  auto fail = [](int code, const std::string& kind, const std::string& msg) {
    std::cerr << json{{"error", kind}, {"message", msg}}.dump() << "\n";
    return code;
  };

  try {
    if (*verify) {
      if (vq > 200.0 && !vforce) throw budget_error("Q over the cost guard (use --force)");
      Vec2i n = parse_vec2(vn);
      KernelProfile prof = build_kernel_profile(1e-10);
      DeltaReport r;
      if (vmode == "duality") {
        r = duality_rhs(prof, n, vq, jobs);
      } else {
        PContext ctx = make_pcontext(prof, vq);
        r = delta_decomposition(ctx, n, vq,
                                vmode == "quad" ? DeltaMode::quadrature : DeltaMode::closed_form,
                                CharMode::direct, jobs);
      }
      json per_q = json::array();
      for (auto& [q, v] : r.per_q) per_q.push_back({{"q", q}, {"contribution", v}});
      emit(json{{"n", {n.x, n.y}},
                {"Q", r.Q},
                {"value", r.value},
                {"residual", r.residual},
                {"imag_abs", r.imag_abs},
                {"terms", r.term_count},
                {"per_q", per_q}},
           vout);
    } else if (*es) {
      QuadraticPair pair = QuadraticPair::from_json_file(es_pair);
      if (*dq) {
        VecZ u = parse_csv_vec(dq_u);
        if (u.size() != pair.s()) throw validation_error("u has wrong dimension");
        json j;
        j["fast"] = expsum_json(dq_fast(pair, dq_q, u));
        emit(j, "");
      } else if (*sq) {
        VecZ u = parse_csv_vec(sq_u);
        if (u.size() != pair.s()) throw validation_error("u has wrong dimension");
        json j;
        j["fast"] = expsum_json(s_qdc_fast(pair, sq_q, sq_d, parse_vec2(sq_c), u));
        emit(j, "");
      } else if (*esc) {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<i64> du(-9, 9);
        double worst = 0.0;
        i64 checked = 0;
        for (i64 q = 1; q <= es_maxq; ++q) {
          VecZ u(pair.s());
          for (int i = 0; i < pair.s(); ++i) u(i) = du(rng);
          auto fast = dq_fast(pair, q, u), brute = dq_brute(pair, q, u);
          double scale = std::max(1.0, std::abs(brute.value));
          worst = std::max(worst, std::abs(fast.value - brute.value) / scale);
          ++checked;
          for (i64 d : divisors(q))
            for (i64 cx = -2; cx <= 2; ++cx)
              for (i64 cy = -2; cy <= 2; ++cy) {
                Vec2i c{cx, cy};
                if (!c.primitive()) continue;
                auto f2 = s_qdc_fast(pair, q, d, c, u);
                auto b2 = s_qdc_brute(pair, q, d, c, u);
                double sc = std::max(1.0, std::abs(b2.value));
                worst = std::max(worst, std::abs(f2.value - b2.value) / sc);
                ++checked;
              }
        }
        emit(json{{"checked", checked}, {"max_rel_difference", worst}, {"pass", worst < 1e-6}}, "");
        if (worst >= 1e-6) return 4;
      }
    } else if (*lat) {
      Lattice2D l = lattice_from(parse_vec2(lat_a), lat_q);
      WeightedEmbedding e{lat_w1, lat_w2, lat_Q};
      auto sv = shortest_vector(l, e);
      auto [x1, x2] = reduced_basis(l, e);
      emit(json{{"a", {l.a.x, l.a.y}},
                {"q", l.q},
                {"basis", {{l.b1.x, l.b1.y}, {l.b2.x, l.b2.y}}},
                {"covolume", std::abs(l.b1.x * l.b2.y - l.b2.x * l.b1.y)},
                {"mu", sv.mu},
                {"shortest", {sv.v.x, sv.v.y}},
                {"reduced", {{x1.x, x1.y}, {x2.x, x2.y}}},
                {"parallelogram_measure", parallelogram_measure(e)}},
           "");
    } else if (*pf) {
      KernelProfile prof = build_kernel_profile(1e-10);
      PContext ctx = make_pcontext(prof, pf_Q);
      Eigen::Vector2d w(pf_w1, pf_w2);
      json j;
      if (pf_a.empty()) {
        j["p1"] = p1_eval(ctx, pf_q, w);
      } else {
        Lattice2D l = lattice_from(parse_vec2(pf_a), pf_q);
        j["p_lambda"] = p_lambda(ctx, l, w);
      }
      emit(j, "");
    } else if (*integ) {
      QuadraticPair pair = QuadraticPair::from_json_file(ig_pair);
      WeightFunction wt = WeightFunction::plateau_product(pair.s());
      if (ig_singular) {
        auto r = singular_integral(pair, wt, ig_tol);
        emit(json{{"value", r.value},
                  {"tail_bound", r.tail_bound},
                  {"w_max", r.w_max},
                  {"envelope_c", r.envelope_c}},
             "");
      } else {
        cplx v = j_of_w(pair, wt, Eigen::Vector2d(ig_w1, ig_w2));
        emit(json{{"re", v.real()}, {"im", v.imag()}}, "");
      }
    } else if (*crun) {
      QuadraticPair pair = QuadraticPair::from_json_file(c_pair);
      WeightFunction wt = WeightFunction::plateau_product(pair.s());
      std::vector<double> ps;
      {
        std::stringstream ss(c_plist);
        std::string item;
        while (std::getline(ss, item, ',')) ps.push_back(std::stod(item));
      }
      auto reports = end_to_end_report(pair, wt, ps, c_delta);
      if (c_format == "csv") {
        std::ostringstream csv;
        csv << "P,Q,N,main_term,n0,ratio_N_main,ratio_n0_main,runtime_ms\n";
        for (auto& r : reports)
          csv << r.P << "," << r.Q << "," << r.N_exact << "," << r.main_term << "," << r.n0 << ","
              << r.ratio_N_main << "," << r.ratio_n0_main << "," << r.runtime_ms << "\n";
        if (c_out.empty()) {
          std::cout << csv.str();
        } else {
          std::ofstream out(c_out);
          out << csv.str();
        }
      } else {
        json arr = json::array();
        for (auto& r : reports)
          arr.push_back({{"P", r.P},
                         {"Q", r.Q},
                         {"N", r.N_exact},
                         {"main_term", r.main_term},
                         {"n0", r.n0},
                         {"ratio_N_main", r.ratio_N_main},
                         {"ratio_n0_main", r.ratio_n0_main},
                         {"runtime_ms", r.runtime_ms}});
        emit(arr, c_out);
      }
    } else if (*cal) {
      CalibrationOptions opts;
      opts.data_dir = cal_data;
      opts.jobs = jobs;
      opts.seed = seed;
      opts.include_counting = !cal_fast;
      CalibrationFixture fresh = compute_calibration(opts);
      if (!cal_check.empty()) {
        CalibrationFixture ref = CalibrationFixture::load(cal_check);
        check_against(fresh, ref);
      }
      if (!cal_out.empty()) fresh.save(cal_out);
      if (cal_out.empty() && cal_check.empty()) std::cout << fresh.to_json() << "\n";
    } else if (*rep) {
      std::ifstream in(rep_in);
      if (!in) throw validation_error("cannot open report: " + rep_in);
      json arr = json::parse(in);
      std::ostringstream csv;
      csv << "P,Q,N,main_term,n0,ratio_N_main,ratio_n0_main,runtime_ms\n";
      for (auto& r : arr)
        csv << r.at("P").get<double>() << "," << r.at("Q").get<double>() << ","
            << r.at("N").get<double>() << "," << r.at("main_term").get<double>() << ","
            << r.at("n0").get<double>() << "," << r.at("ratio_N_main").get<double>() << ","
            << r.at("ratio_n0_main").get<double>() << "," << r.at("runtime_ms").get<double>()
            << "\n";
      if (rep_out.empty()) {
        std::cout << csv.str();
      } else {
        std::ofstream out(rep_out);
        out << csv.str();
      }
    }
  } catch (const validation_error& e) {
    return fail(2, "validation", e.what());
  } catch (const budget_error& e) {
    return fail(3, "budget", e.what());
  } catch (const calibration_error& e) {
    return fail(4, "calibration", e.what());
  } catch (const overflow_error& e) {
    return fail(2, "overflow", e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
  return 0;
}
