// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace mmreach;
using mmreach::testing::max_abs_diff;
using mmreach::testing::sample_T_point;
using mmreach::testing::shared_builtin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const Vector none;

DecompositionEvaluator field_as_decomposition(SystemPtr sys) {
  const SystemSpec* raw = sys.get();
  return DecompositionEvaluator(DecompositionKind::user_defined, sys, "field",
                                [raw](auto x, auto w, auto, auto, Orientation) { return eval_field(*raw, x, w); });
}

std::vector<std::pair<std::string, DecompositionEvaluator>> both_kinds(const SystemPtr& sys) {
  return {{"closed", closed_form_decomp(sys->name(), sys)}, {"numeric", make_numeric_tight(sys)}};
}

// 1: d(x, w, x, w) = F(x, w).
Outcome diagonal_identity() {
  Outcome o{true, ""};
  for (const auto& name : builtin_names()) {
    const auto sys = shared_builtin(name);
    for (const auto& [kind, d] : both_kinds(sys)) {
      const auto r = check_condition1(d, *sys, 1000, 101);
      o.pass = o.pass && r.pass;
      o.detail += name + "/" + kind + " max err " + fmt(r.max_error) + "; ";
    }
  }
  return o;
}

// 2: Kamke C1/C2 on the shipped evaluators, plus a negative control.
Outcome kamke_suite() {
  Outcome o{true, ""};
  for (const auto& name : builtin_names()) {
    const auto sys = shared_builtin(name);
    for (const auto& [kind, d] : both_kinds(sys)) {
      const auto r = check_kamke(d, 1000, 202);
      o.pass = o.pass && r.pass();
      o.detail += name + "/" + kind + " " + std::to_string(r.violations) + " violations; ";
    }
  }
  const auto control = check_kamke(field_as_decomposition(shared_builtin("abs2d")), 1000, 202);
  o.pass = o.pass && control.violations >= 1;
  o.detail += "negative control " + std::to_string(control.violations) + " violations";
  return o;
}

// 3: numeric tight vs grid-201 brute force, and closed form vs numeric.
Outcome oracle_equivalence() {
  Outcome o{true, ""};
  for (const auto& name : builtin_names()) {
    const auto sys = shared_builtin(name);
    const auto closed = closed_form_decomp(name, sys);
    const Box region = default_sample_box(*sys);
    std::vector<double> oracle_gap(200), closed_gap(200);
    parallel_for(200, [&](std::size_t s) {
      const auto p = sample_T_point(*sys, region, 303, s);
      const Vector tight = tight_decomp_eval(*sys, p[0], p[1], p[2], p[3], {});
      oracle_gap[s] = max_abs_diff(tight, brute_force_decomp_oracle(*sys, p[0], p[1], p[2], p[3], 201));
      closed_gap[s] = max_abs_diff(tight, closed(p[0], p[1], p[2], p[3]));
    });
    const double og = *std::max_element(oracle_gap.begin(), oracle_gap.end());
    const double cg = *std::max_element(closed_gap.begin(), closed_gap.end());
    const auto over = std::count_if(oracle_gap.begin(), oracle_gap.end(), [](double g) { return g > 1e-4; });
    o.pass = o.pass && og <= 1e-4 && cg <= 1e-4;
    o.detail += name + " tight-vs-grid max gap " + fmt(og) + " (" + std::to_string(over) +
                "/200 points above 1e-4), closed-vs-numeric max gap " + fmt(cg) + "; ";
  }
  return o;
}

// 4: abs2d over-approximation against the Monte Carlo cloud at T = 1/2.
Outcome abs2d_over_vs_sampling() {
  const auto sys = shared_builtin("abs2d");
  const Box X0({-1, 0}, {1, 1});
  const double T = 0.5;
  const auto d = make_numeric_tight(sys);
  const auto over = over_approximate(*sys, d, X0, T, {});
  if (!over.ok()) return {false, "over-approximation status " + to_string(over.status)};
  const auto mc = mc_reach(*sys, X0, T, OracleConfig{});
  const auto check = check_over(*over.box, mc.endpoints, 1e-3);
  // Optimizer error bound carried along the horizon.
  const double slack = d.config().tolerance * T;
  bool tight_enough = true;
  std::string widths;
  for (std::size_t j = 0; j < 2; ++j) {
    const double ref = mc.bounding_box->width(j) + 2 * slack;
    const double ratio = over.box->width(j) / ref;
    tight_enough = tight_enough && ratio <= 1.05;
    widths += " axis " + std::to_string(j + 1) + " width ratio " + fmt(ratio) + ";";
  }
  return {check.pass && tight_enough, std::to_string(check.outside) + " of " + std::to_string(check.endpoints) +
                                          " endpoints outside over box + 1e-3;" + widths};
}

// 5: poly3d over/under pipeline on the three-state example.
Outcome poly3d_pipeline() {
  const auto sys = shared_builtin("poly3d");
  const Box X0 = Box::cube(3, -0.5, 0.5);
  const double T = 0.5;
  const auto delta = closed_form_decomp("poly3d", sys);
  const auto over = over_approximate(*sys, delta, X0, T, {});
  const auto under = under_approximate(*sys, backward_special_case(delta), X0, T, {});
  if (!over.ok()) return {false, "over status " + to_string(over.status)};
  const auto mc = mc_reach(*sys, X0, T, OracleConfig{});
  const auto a = check_over(*over.box, mc.endpoints, 1e-3);
  const bool b = under.ok();
  bool c = false, strict = false;
  std::string rt;
  if (b) {
    const auto r = roundtrip_under_check(*sys, *under.box, X0, T, 200, OracleConfig{});
    c = r.pass;
    rt = std::to_string(r.failures) + " roundtrip failures, worst error " + fmt(r.worst_roundtrip_error);
    strict = true;
    for (std::size_t j = 0; j < 3; ++j) {
      strict = strict && over.box->lower[j] < under.box->lower[j] && under.box->upper[j] < over.box->upper[j];
    }
  }
  return {a.pass && b && c && strict, "(a) " + std::to_string(a.outside) + " endpoints outside; (b) under status " +
                                          to_string(under.status) + "; (c) " + rt + "; (d) strict nesting " +
                                          (strict ? "yes" : "no")};
}

// 6: backward transform vs tight evaluation of the negated system.
Outcome special_case_consistency() {
  const auto sys = shared_builtin("poly3d");
  const auto D = backward_special_case(closed_form_decomp("poly3d", sys));
  const auto neg = negate_system(*sys);
  const Box region = default_sample_box(*sys);
  std::vector<double> gap(200);
  parallel_for(200, [&](std::size_t s) {
    const auto p = sample_T_point(*sys, region, 606, s);
    gap[s] = max_abs_diff(D(p[0], p[1], p[2], p[3]), tight_decomp_eval(neg, p[0], p[1], p[2], p[3], {}));
  });
  const double g = *std::max_element(gap.begin(), gap.end());
  return {g <= 1e-4, "max gap " + fmt(g) + " over 200 points"};
}

// 7: southeast order preserved by the embedding flow.
Outcome se_monotonicity() {
  const auto sys = shared_builtin("abs2d");
  const auto r = check_se_monotonicity(closed_form_decomp("abs2d", sys), sys->disturbance(), 100, 0.5, {}, 707);
  return {r.pass() && r.skipped == 0, std::to_string(r.violations) + " violations, " + std::to_string(r.skipped) +
                                          " skipped, worst margin " + fmt(r.worst_margin)};
}

// 8: tight embedding boxes lie inside the loose ones.
Outcome tight_inside_loose() {
  const auto sys = shared_builtin("abs2d");
  const auto loose = make_user_decomposition(sys, abs2d_loose_decomposition(), "loose");
  const auto gate = check_kamke(loose, 1000, 202);
  if (!gate.pass()) return {false, "loose decomposition failed the Kamke gate"};
  const auto tight = make_numeric_tight(sys);
  const Box X0({-1, 0}, {1, 1});
  bool all = true;
  std::string detail = "Kamke gate passed;";
  for (double t : {0.1, 0.25, 0.5}) {
    const auto a = over_approximate(*sys, tight, X0, t, {});
    const auto b = over_approximate(*sys, loose, X0, t, {});
    const bool in = a.ok() && b.ok() && b.box->contains(*a.box, 1e-6);
    all = all && in;
    detail += " t=" + fmt(t) + (in ? " contained" : " NOT contained") + ";";
  }
  return {all, detail};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MMREACH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 9: T = 0 identity everywhere, and bit-identical reruns.
Outcome zero_horizon_and_determinism() {
  bool zero = true;
  std::string detail;
  for (const auto& name : builtin_names()) {
    const auto sys = shared_builtin(name);
    const Box X0 = name == "abs2d" ? Box({-1, 0}, {1, 1}) : Box::cube(3, -0.5, 0.5);
    const auto delta = closed_form_decomp(name, sys);
    const DecompositionEvaluator D =
        check_special_case(*sys).overall ? backward_special_case(delta) : make_backward_numeric(*sys);
    zero = zero && over_approximate(*sys, delta, X0, 0.0).box == X0;
    zero = zero && over_approximate(*sys, make_numeric_tight(sys), X0, 0.0).box == X0;
    zero = zero && under_approximate(*sys, D, X0, 0.0).box == X0;
    zero = zero && mc_reach(*sys, X0, 0.0, OracleConfig{}).bounding_box == X0;
    zero = zero && roundtrip_under_check(*sys, X0, X0, 0.0, 50, OracleConfig{}).pass;
  }

  const fs::path root = fs::temp_directory_path() / "mmreach_acceptance";
  fs::remove_all(root);
  const std::string x0 = "--x0 -0.5,0.5 -0.5,0.5 -0.5,0.5";
  const int zero_code = run_cli("reach --system poly3d " + x0 + " --T 0 --oracle --samples 200 --out " +
                                (root / "zero").string());
  const auto zero_json = nlohmann::json::parse(slurp(root / "zero" / "result.json"));
  const nlohmann::json X0json = Box::cube(3, -0.5, 0.5);
  zero = zero && zero_code == 0 && zero_json["over"]["box"] == X0json && zero_json["under"]["box"] == X0json;
  const int cmp_code = run_cli("compare --system abs2d --x0 -1,1 0,1 --other loose --times 0 --out " +
                               (root / "cmp0").string());
  const auto cmp_json = nlohmann::json::parse(slurp(root / "cmp0" / "compare.json"));
  const nlohmann::json X0abs = Box({-1, 0}, {1, 1});
  zero = zero && cmp_code == 0 && cmp_json["boxes"][0]["tight"] == X0abs && cmp_json["boxes"][0]["other"] == X0abs;
  detail += std::string("T=0 identity ") + (zero ? "holds" : "FAILS") + " (library and CLI);";

  bool same = true;
  const std::string args = "reach --system poly3d " + x0 + " --T 0.5 --oracle --samples 2000 --probes 50 --seed 9 --out ";
  const int c1 = run_cli(args + (root / "run1").string());
  const int c2 = run_cli(args + (root / "run2").string());
  same = same && c1 == 0 && c2 == 0;
  for (const char* file : {"result.json", "validation.json", "oracle.csv"}) {
    same = same && slurp(root / "run1" / file) == slurp(root / "run2" / file);
  }
  const auto a = mc_reach(*shared_builtin("poly3d"), Box::cube(3, -0.5, 0.5), 0.5, OracleConfig{});
  const auto b = mc_reach(*shared_builtin("poly3d"), Box::cube(3, -0.5, 0.5), 0.5, OracleConfig{});
  same = same && a.endpoints == b.endpoints;
  detail += std::string(" identical-seed reruns ") + (same ? "bit-identical" : "DIFFER");
  return {zero && same, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "diagonal identity", 5, diagonal_identity},
      {2, "Kamke property suite", 30, kamke_suite},
      {3, "tight construction vs brute-force oracle", 120, oracle_equivalence},
      {4, "abs2d over-approximation vs Monte Carlo", 60, abs2d_over_vs_sampling},
      {5, "poly3d over/under-approximation pipeline", 180, poly3d_pipeline},
      {6, "backward transform consistency", 60, special_case_consistency},
      {7, "SE-monotonicity of the embedding flow", 60, se_monotonicity},
      {8, "tight boxes inside loose boxes", 60, tight_inside_loose},
      {9, "zero horizon and determinism", 600, zero_horizon_and_determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " -- " << o.detail << " ["
              << fmt(secs) << " s" << (in_time ? "" : ", over budget " + fmt(c.budget_s) + " s") << "]" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
