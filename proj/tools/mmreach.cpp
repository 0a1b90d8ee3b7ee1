// mmreach: command-line front end.
//
//   mmreach reach   --system poly3d --x0 -0.5,0.5 -0.5,0.5 -0.5,0.5 --T 0.5 --method both --oracle
//   mmreach decomp eval --system abs2d --x 0.5,0 --xhat 1,1 --compare-oracle
//   mmreach verify  --system abs2d --decomp closed
//   mmreach compare --system abs2d --x0 -1,1 0,1 --other loose
//
// Exit codes: 0 ok, 2 under-approximation left T_X, 3 left the domain,
// 4 validation failure, 64 usage error, 65 domain precondition violated.

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmreach/mmreach.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mmreach;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_left_tx = 2;
constexpr int exit_left_domain = 3;
constexpr int exit_validation = 4;
constexpr int exit_usage = 64;
constexpr int exit_precondition = 65;

// Raised for flag values that parse but make no sense (wrong arity, T < 0).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Vector parse_list(const std::string& text, const std::string& flag) {
  Vector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

// Per-axis "lo,hi" tokens.
Box parse_box_tokens(const std::vector<std::string>& tokens, int n, const std::string& flag) {
  if (static_cast<int>(tokens.size()) != n) {
    throw UsageError(flag + " needs " + std::to_string(n) + " \"lo,hi\" tokens, got " + std::to_string(tokens.size()));
  }
  Vector lo, hi;
  for (const auto& t : tokens) {
    const Vector v = parse_list(t, flag);
    if (v.size() != 2) throw UsageError(flag + ": token '" + t + "' must be \"lo,hi\"");
    if (!(v[0] <= v[1])) throw UsageError(flag + ": token '" + t + "' has lo > hi");
    lo.push_back(v[0]);
    hi.push_back(v[1]);
  }
  return Box(lo, hi);
}

struct LoadedSystem {
  SystemPtr sys;
  std::string config_text;  // empty for built-ins
  std::string source;
};

LoadedSystem load_system(const std::string& which, const std::vector<std::string>& w_tokens) {
  LoadedSystem out;
  out.source = which;
  const auto names = builtin_names();
  SystemSpec sys = [&] {
    if (std::find(names.begin(), names.end(), which) != names.end()) return builtin(which);
    out.config_text = read_file(which);
    return parse_system(out.config_text);
  }();
  if (!w_tokens.empty()) sys = sys.with_disturbance(parse_box_tokens(w_tokens, sys.m(), "--w"));
  out.sys = std::make_shared<const SystemSpec>(std::move(sys));
  return out;
}

// tight | closed | loose | <path to JSON with a "decomposition" key>
DecompositionEvaluator make_decomposition(const std::string& choice, const LoadedSystem& ls,
                                          const OptimizerConfig& cfg) {
  if (choice == "tight") return make_numeric_tight(ls.sys, cfg);
  if (choice == "closed") {
    if (!ls.sys->closed_form()) throw UsageError("system '" + ls.sys->name() + "' has no closed-form decomposition");
    return closed_form_decomp(*ls.sys->closed_form(), ls.sys);
  }
  if (choice == "loose") {
    if (ls.sys->closed_form() != "abs2d") throw UsageError("the shipped loose decomposition is defined for abs2d only");
    return make_user_decomposition(ls.sys, abs2d_loose_decomposition(), "loose(abs2d)");
  }
  if (choice == "config") {
    if (ls.config_text.empty()) throw UsageError("--decomp config needs --system to be a config file");
    return parse_user_decomposition(ls.config_text, ls.sys);
  }
  return parse_user_decomposition(read_file(choice), ls.sys);
}

// Decomposition of the backward-time system: the special-case transform when
// no F_i depends on x_i, otherwise the numeric tight construction for -F.
DecompositionEvaluator make_backward(const DecompositionEvaluator& d, const SystemSpec& sys,
                                     const OptimizerConfig& cfg) {
  if (check_special_case(sys).overall) return backward_special_case(d);
  return make_backward_numeric(sys, cfg);
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json optimizer_json(const OptimizerConfig& c) {
  return {{"coarse_grid_points_per_axis", c.coarse_grid_points_per_axis},
          {"refine_iterations", c.refine_iterations},
          {"refine_shrink", c.refine_shrink},
          {"tolerance", c.tolerance},
          {"candidates", c.candidates}};
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path.string() + "'");
  out << j.dump(2) << "\n";
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

// ------------------------------------------------------------------ reach --

struct ReachArgs {
  std::string system;
  std::vector<std::string> x0;
  std::vector<std::string> w;
  double T = -1.0;
  std::string method = "both";
  std::string decomp = "tight";
  double step = 1e-3;
  int grid = 9;
  std::uint64_t seed = 0;
  std::string out = "mmreach-out";
  bool oracle = false;
  int samples = 10000;
  int segments = 8;
  int probes = 200;
};

int cmd_reach(const ReachArgs& a, const std::string& command_line) {
  if (!(a.T >= 0.0) || !std::isfinite(a.T)) throw UsageError("--T must be a finite number >= 0");
  if (a.method != "over" && a.method != "under" && a.method != "both") {
    throw UsageError("--method must be over, under or both");
  }
  const LoadedSystem ls = load_system(a.system, a.w);
  const SystemSpec& sys = *ls.sys;
  const Box X0 = parse_box_tokens(a.x0, sys.n(), "--x0");
  OptimizerConfig ocfg;
  ocfg.coarse_grid_points_per_axis = a.grid;
  ocfg.validate();
  IntegratorConfig icfg;
  icfg.step = a.step;
  icfg.validate();

  const auto d = make_decomposition(a.decomp, ls, ocfg);
  const fs::path out = prepare_out(a.out);

  json result = json::object();
  std::optional<ReachResult> over, under;
  if (a.method != "under") {
    over = over_approximate(sys, d, X0, a.T, icfg);
    result["over"] = *over;
  }
  std::string backward_label;
  if (a.method != "over") {
    const auto D = make_backward(d, sys, ocfg);
    backward_label = D.label();
    under = under_approximate(sys, D, X0, a.T, icfg);
    result["under"] = *under;
  }
  write_json(out / "result.json", result);

  bool valid = true;
  if (a.oracle) {
    OracleConfig oc;
    oc.samples = a.samples;
    oc.dist_segments = a.segments;
    oc.seed = a.seed;
    oc.integrator = icfg;
    const McReachResult mc = mc_reach(sys, X0, a.T, oc);
    {
      std::ofstream csv(out / "oracle.csv");
      write_endpoints_csv(csv, mc.endpoints, static_cast<std::size_t>(sys.n()));
    }
    json validation = {{"oracle_endpoints", mc.endpoints.size()}, {"oracle_exited", mc.exited.size()}};
    validation["oracle_bounding_box"] = mc.bounding_box ? json(*mc.bounding_box) : json(nullptr);
    if (over && over->ok()) {
      const auto rep = check_over(*over->box, mc.endpoints, 1e-3);
      validation["over"] = rep;
      valid = valid && rep.pass;
    }
    if (under && under->ok()) {
      const auto rep = roundtrip_under_check(sys, *under->box, X0, a.T, a.probes, oc);
      validation["under"] = rep;
      valid = valid && rep.pass;
      if (over && over->ok()) {
        const bool nested = over->box->contains(*under->box);
        validation["under_in_over"] = nested;
        valid = valid && nested;
      }
    }
    validation["pass"] = valid;
    write_json(out / "validation.json", validation);
  }

  json manifest = {{"command", "reach"},
                   {"command_line", command_line},
                   {"system", ls.source},
                   {"system_name", sys.name()},
                   {"x0", X0},
                   {"disturbance", sys.disturbance()},
                   {"T", a.T},
                   {"method", a.method},
                   {"decomposition", d.label()},
                   {"integrator", {{"method", "rk4"}, {"step", icfg.step}}},
                   {"optimizer", optimizer_json(ocfg)},
                   {"oracle", a.oracle ? json{{"samples", a.samples}, {"dist_segments", a.segments}, {"probes", a.probes}}
                                       : json(nullptr)},
                   {"seed", a.seed},
                   {"version", MMREACH_VERSION},
                   {"timestamp", timestamp()}};
  if (!backward_label.empty()) manifest["backward_decomposition"] = backward_label;
  write_json(out / "manifest.json", manifest);

  json summary = json::object();
  if (over) summary["over"] = {{"status", to_string(over->status)}, {"box", over->box ? json(*over->box) : json(nullptr)}};
  if (under) summary["under"] = {{"status", to_string(under->status)}, {"box", under->box ? json(*under->box) : json(nullptr)}};
  if (a.oracle) summary["validation"] = valid ? "pass" : "fail";
  std::cout << summary.dump() << "\n";

  for (const auto* r : {over ? &*over : nullptr, under ? &*under : nullptr}) {
    if (r && (r->status == ReachStatus::left_domain || r->status == ReachStatus::nonfinite)) return exit_left_domain;
  }
  if (under && under->status == ReachStatus::left_TX) return exit_left_tx;
  if (over && !over->ok()) return exit_validation;
  return valid ? exit_ok : exit_validation;
}

// ------------------------------------------------------------ decomp eval --

struct DecompEvalArgs {
  std::string system;
  std::string decomp = "tight";
  std::string x, w, xhat, what;
  bool compare_oracle = false;
  int oracle_grid = 201;
  double gap_tol = 1e-4;
  int grid = 9;
};

int cmd_decomp_eval(const DecompEvalArgs& a) {
  const LoadedSystem ls = load_system(a.system, {});
  const SystemSpec& sys = *ls.sys;
  OptimizerConfig ocfg;
  ocfg.coarse_grid_points_per_axis = a.grid;
  ocfg.validate();
  const auto d = make_decomposition(a.decomp, ls, ocfg);

  auto vec = [&](const std::string& text, int len, const char* flag) {
    Vector v = text.empty() ? Vector{} : parse_list(text, flag);
    if (static_cast<int>(v.size()) != len) {
      throw UsageError(std::string(flag) + " needs " + std::to_string(len) + " comma-separated values");
    }
    return v;
  };
  const Vector x = vec(a.x, sys.n(), "--x");
  const Vector xh = vec(a.xhat, sys.n(), "--xhat");
  const Vector w = vec(a.w, sys.m(), "--w");
  const Vector wh = vec(a.what, sys.m(), "--what");

  const Vector value = d(x, w, xh, wh);
  json j = {{"decomposition", d.label()}, {"value", value}};
  int code = exit_ok;
  if (a.compare_oracle) {
    const Vector ref = brute_force_decomp_oracle(sys, x, w, xh, wh, a.oracle_grid);
    double gap = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) gap = std::max(gap, std::abs(ref[i] - value[i]));
    j["oracle"] = ref;
    j["oracle_grid"] = a.oracle_grid;
    j["gap"] = gap;
    j["gap_tol"] = a.gap_tol;
    if (gap > a.gap_tol) code = exit_validation;
  }
  std::cout << j.dump() << "\n";
  return code;
}

// ----------------------------------------------------------------- verify --

struct VerifyArgs {
  std::string system;
  std::string decomp = "closed";
  std::string against;
  int samples = 1000;
  int pairs = 100;
  int gap_points = 200;
  double T = 0.5;
  double step = 1e-3;
  std::uint64_t seed = 0;
  int grid = 9;
  std::string out;
};

// Random tuples of T inside the sampling region and W, both orientations.
std::vector<std::array<Vector, 4>> sample_T_points(const SystemSpec& sys, int count, std::uint64_t seed) {
  const Box region = default_sample_box(sys);
  std::vector<std::array<Vector, 4>> pts;
  for (int s = 0; s < count; ++s) {
    Rng rng(seed, static_cast<std::uint64_t>(s));
    Vector p = rng.in_box(region), q = rng.in_box(region);
    Vector pw = rng.in_box(sys.disturbance()), qw = rng.in_box(sys.disturbance());
    for (std::size_t j = 0; j < p.size(); ++j) {
      if (p[j] > q[j]) std::swap(p[j], q[j]);
    }
    for (std::size_t k = 0; k < pw.size(); ++k) {
      if (pw[k] > qw[k]) std::swap(pw[k], qw[k]);
    }
    if (rng.coin()) {
      pts.push_back({p, pw, q, qw});
    } else {
      pts.push_back({q, qw, p, pw});
    }
  }
  return pts;
}

int cmd_verify(const VerifyArgs& a) {
  const LoadedSystem ls = load_system(a.system, {});
  const SystemSpec& sys = *ls.sys;
  OptimizerConfig ocfg;
  ocfg.coarse_grid_points_per_axis = a.grid;
  ocfg.validate();
  IntegratorConfig icfg;
  icfg.step = a.step;
  icfg.validate();
  const auto d = make_decomposition(a.decomp, ls, ocfg);

  json report = {{"system", sys.name()}, {"decomposition", d.label()}};
  bool pass = true;

  const auto c1 = check_condition1(d, sys, a.samples, a.seed);
  report["condition1"] = {{"samples", c1.samples}, {"max_error", c1.max_error}, {"pass", c1.pass}};
  pass = pass && c1.pass;

  const auto kamke = check_kamke(d, a.samples, a.seed + 1);
  report["kamke"] = {{"samples", kamke.samples},
                     {"checks", kamke.checks},
                     {"violations", kamke.violations},
                     {"worst_margin", kamke.worst_margin},
                     {"pass", kamke.pass()}};
  pass = pass && kamke.pass();

  if (a.pairs > 0) {
    const auto se = check_se_monotonicity(d, sys.disturbance(), a.pairs, a.T, icfg, a.seed + 2);
    report["se_monotonicity"] = {{"pairs", se.pairs},
                                 {"violations", se.violations},
                                 {"skipped", se.skipped},
                                 {"worst_margin", se.worst_margin},
                                 {"pass", se.pass()}};
    pass = pass && se.pass();
  }

  if (!a.against.empty()) {
    const auto other = make_decomposition(a.against, ls, ocfg);
    double gap = 0.0;
    for (const auto& p : sample_T_points(sys, a.gap_points, a.seed + 3)) {
      const Vector u = d(p[0], p[1], p[2], p[3]);
      const Vector v = other(p[0], p[1], p[2], p[3]);
      for (std::size_t i = 0; i < u.size(); ++i) gap = std::max(gap, std::abs(u[i] - v[i]));
    }
    const bool ok = gap <= 1e-4;
    report["against"] = {{"decomposition", other.label()}, {"points", a.gap_points}, {"max_gap", gap}, {"pass", ok}};
    pass = pass && ok;
  }
  report["pass"] = pass;
  std::cout << report.dump(2) << "\n";
  if (!a.out.empty()) write_json(prepare_out(a.out) / "verify.json", report);
  return pass ? exit_ok : exit_validation;
}

// ---------------------------------------------------------------- compare --

struct CompareArgs {
  std::string system;
  std::vector<std::string> x0;
  std::string tight = "tight";
  std::string other;
  std::string times = "0.1,0.25,0.5";
  double step = 1e-3;
  int gate_samples = 1000;
  std::uint64_t seed = 0;
  int grid = 9;
  std::string out;
};

int cmd_compare(const CompareArgs& a) {
  const LoadedSystem ls = load_system(a.system, {});
  const SystemSpec& sys = *ls.sys;
  const Box X0 = parse_box_tokens(a.x0, sys.n(), "--x0");
  const Vector times = parse_list(a.times, "--times");
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw UsageError("--times entries must be finite and >= 0");
  }
  OptimizerConfig ocfg;
  ocfg.coarse_grid_points_per_axis = a.grid;
  ocfg.validate();
  IntegratorConfig icfg;
  icfg.step = a.step;
  icfg.validate();
  const auto tight = make_decomposition(a.tight, ls, ocfg);
  const auto other = make_decomposition(a.other, ls, ocfg);

  json report = {{"system", sys.name()}, {"tight", tight.label()}, {"other", other.label()}};
  const auto c1 = check_condition1(other, sys, a.gate_samples, a.seed);
  const auto kamke = check_kamke(other, a.gate_samples, a.seed + 1);
  report["gate"] = {{"condition1_max_error", c1.max_error}, {"kamke_violations", kamke.violations},
                    {"pass", c1.pass && kamke.pass()}};
  if (!c1.pass || !kamke.pass()) {
    report["pass"] = false;
    std::cout << report.dump(2) << "\n";
    std::cerr << "comparison decomposition failed the decomposition-function gate\n";
    return exit_validation;
  }

  bool contained = true;
  double max_diff = 0.0;
  auto rows = json::array();
  for (double t : times) {
    const auto rt = over_approximate(sys, tight, X0, t, icfg);
    const auto ro = over_approximate(sys, other, X0, t, icfg);
    json row = {{"t", t}, {"tight", rt.box ? json(*rt.box) : json(nullptr)}, {"other", ro.box ? json(*ro.box) : json(nullptr)}};
    if (rt.status == ReachStatus::left_domain || ro.status == ReachStatus::left_domain) return exit_left_domain;
    if (!rt.ok() || !ro.ok()) {
      contained = false;
    } else {
      const bool in = ro.box->contains(*rt.box, 1e-6);
      for (std::size_t j = 0; j < X0.dim(); ++j) {
        max_diff = std::max({max_diff, std::abs(rt.box->lower[j] - ro.box->lower[j]),
                             std::abs(rt.box->upper[j] - ro.box->upper[j])});
      }
      row["contained"] = in;
      contained = contained && in;
    }
    rows.push_back(std::move(row));
  }
  report["boxes"] = rows;
  report["max_bound_difference"] = max_diff;
  report["pass"] = contained;
  std::cout << report.dump(2) << "\n";
  if (!a.out.empty()) write_json(prepare_out(a.out) / "compare.json", report);
  return contained ? exit_ok : exit_validation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-monotone reachability: tight decomposition functions, over- and under-approximations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(MMREACH_VERSION));

  ReachArgs reach;
  auto* r = app.add_subcommand("reach", "Over-/under-approximate the reachable set from a box");
  r->add_option("--system", reach.system, "Built-in name (abs2d, poly3d) or JSON config path")->required();
  r->add_option("--x0", reach.x0, "Initial box, one lo,hi token per axis")->required()->expected(1, 64);
  r->add_option("--T", reach.T, "Horizon")->required();
  r->add_option("--method", reach.method, "over | under | both");
  r->add_option("--decomp", reach.decomp, "tight | closed | loose | config | <path>");
  r->add_option("--w", reach.w, "Override the disturbance box, one lo,hi token per axis")->expected(1, 64);
  r->add_option("--step", reach.step, "RK4 step");
  r->add_option("--grid", reach.grid, "Optimizer coarse grid points per axis");
  r->add_option("--seed", reach.seed, "Oracle seed");
  r->add_option("--out", reach.out, "Output directory");
  r->add_flag("--oracle", reach.oracle, "Validate against Monte Carlo simulation");
  r->add_option("--samples", reach.samples, "Oracle samples");
  r->add_option("--segments", reach.segments, "Disturbance segments per oracle signal");
  r->add_option("--probes", reach.probes, "Under-approximation roundtrip probes");

  DecompEvalArgs de;
  auto* decomp = app.add_subcommand("decomp", "Decomposition function tools");
  decomp->require_subcommand(1);
  auto* ev = decomp->add_subcommand("eval", "Evaluate a decomposition at one point of T");
  ev->add_option("--system", de.system, "Built-in name or JSON config path")->required();
  ev->add_option("--decomp", de.decomp, "tight | closed | loose | config | <path>");
  ev->add_option("--x", de.x, "x, comma separated")->required();
  ev->add_option("--xhat", de.xhat, "xhat, comma separated")->required();
  ev->add_option("--w", de.w, "w, comma separated");
  ev->add_option("--what", de.what, "what, comma separated");
  ev->add_flag("--compare-oracle", de.compare_oracle, "Also run the brute-force grid oracle");
  ev->add_option("--oracle-grid", de.oracle_grid, "Oracle grid points per axis");
  ev->add_option("--gap-tol", de.gap_tol, "Maximum allowed oracle gap");
  ev->add_option("--grid", de.grid, "Optimizer coarse grid points per axis");

  VerifyArgs va;
  auto* v = app.add_subcommand("verify", "Check decomposition-function properties");
  v->add_option("--system", va.system, "Built-in name or JSON config path")->required();
  v->add_option("--decomp", va.decomp, "tight | closed | loose | config | <path>");
  v->add_option("--against", va.against, "Second decomposition to compare values with");
  v->add_option("--samples", va.samples, "Samples for the diagonal and Kamke checks");
  v->add_option("--pairs", va.pairs, "SE-monotonicity pairs (0 skips)");
  v->add_option("--gap-points", va.gap_points, "Points for the --against comparison");
  v->add_option("--T", va.T, "Horizon of the SE-monotonicity check");
  v->add_option("--step", va.step, "RK4 step");
  v->add_option("--seed", va.seed, "Sampling seed");
  v->add_option("--grid", va.grid, "Optimizer coarse grid points per axis");
  v->add_option("--out", va.out, "Write verify.json to this directory");

  CompareArgs ca;
  auto* c = app.add_subcommand("compare", "Compare embedding boxes of two decompositions");
  c->add_option("--system", ca.system, "Built-in name or JSON config path")->required();
  c->add_option("--x0", ca.x0, "Initial box, one lo,hi token per axis")->required()->expected(1, 64);
  c->add_option("--tight", ca.tight, "Decomposition expected to be tighter");
  c->add_option("--other", ca.other, "Comparison decomposition")->required();
  c->add_option("--times", ca.times, "Comma-separated sample times");
  c->add_option("--step", ca.step, "RK4 step");
  c->add_option("--gate-samples", ca.gate_samples, "Samples for the validity gate");
  c->add_option("--seed", ca.seed, "Sampling seed");
  c->add_option("--grid", ca.grid, "Optimizer coarse grid points per axis");
  c->add_option("--out", ca.out, "Write compare.json to this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_usage;
  }

  try {
    if (r->parsed()) return cmd_reach(reach, join_args(argc, argv));
    if (ev->parsed()) return cmd_decomp_eval(de);
    if (v->parsed()) return cmd_verify(va);
    if (c->parsed()) return cmd_compare(ca);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const OrderViolationError& e) {
    std::cerr << "domain precondition: " << e.what() << "\n";
    return exit_precondition;
  } catch (const PreconditionError& e) {
    std::cerr << "domain precondition: " << e.what() << "\n";
    return exit_precondition;
  } catch (const UnboundedDomainError& e) {
    std::cerr << "domain precondition: " << e.what() << "\n";
    return exit_precondition;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
