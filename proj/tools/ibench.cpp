// ibench: batch front end.  Loads JSON configs, runs simulations and
// certificate computations, emits CSV and JSON reports.
//
// Exit codes: 0 success, 2 config/schema error, 3 scenario validation
// failure, 4 runtime policy error, 5 zero/absent gap where a gap bound was
// requested.  stderr carries diagnostics; stdout only machine-readable
// output (report JSON or paths of written files).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ib/agents.hpp"
#include "ib/certificates.hpp"
#include "ib/model.hpp"
#include "ib/nature.hpp"
#include "ib/scenarios.hpp"
#include "ib/sim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ib;

namespace {

constexpr const char* kVersion = "1.0.0";

enum ExitCode {
  kOk = 0,
  kSchemaError = 2,
  kValidationError = 3,
  kRuntimeError = 4,
  kZeroGap = 5,
};

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// JSON helpers

json parse_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& ctx) {
  if (!obj.is_object()) throw SchemaError(ctx + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const std::string& k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw SchemaError(ctx + ": unknown key '" + it.key() + "'");
  }
}

template <typename T>
T get_req(const json& obj, const std::string& key, const std::string& ctx) {
  if (!obj.contains(key)) throw SchemaError(ctx + ": missing key '" + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(ctx + "." + key + ": " + e.what());
  }
}

template <typename T>
T get_opt(const json& obj, const std::string& key, T fallback,
          const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw SchemaError(ctx + "." + key + ": " + e.what());
  }
}

Vec vec_from(const json& a, const std::string& ctx) {
  if (!a.is_array()) throw SchemaError(ctx + ": expected an array of numbers");
  Vec v((int)a.size());
  for (int i = 0; i < (int)a.size(); ++i) {
    if (!a[(size_t)i].is_number())
      throw SchemaError(ctx + ": expected an array of numbers");
    v(i) = a[(size_t)i].get<double>();
  }
  return v;
}

std::vector<Vec> vec_list_from(const json& a, const std::string& ctx) {
  if (!a.is_array()) throw SchemaError(ctx + ": expected an array of arrays");
  std::vector<Vec> out;
  for (size_t i = 0; i < a.size(); ++i)
    out.push_back(vec_from(a[i], ctx + "[" + std::to_string(i) + "]"));
  return out;
}

Mat mat_from(const json& rows, const std::string& ctx) {
  std::vector<Vec> r = vec_list_from(rows, ctx);
  if (r.empty()) throw SchemaError(ctx + ": empty matrix");
  Mat m((int)r.size(), (int)r[0].size());
  for (int i = 0; i < m.rows(); ++i) {
    if (r[(size_t)i].size() != m.cols())
      throw SchemaError(ctx + ": ragged matrix");
    m.row(i) = r[(size_t)i].transpose();
  }
  return m;
}

// FNV-1a over the canonical (sorted-key) dump; recorded in manifests so a
// rerun can be checked against the exact config that produced an output.
std::string config_hash(const json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)h);
  return buf;
}

// ---------------------------------------------------------------------------
// Scenario loading

Scenario build_scenario(const std::string& name, const json& p) {
  const std::string ctx = "scenario.params";
  if (name == "finite_stochastic") {
    check_keys(p, {"means_grid"}, ctx);
    return finite_stochastic(
        get_req<std::vector<std::vector<double>>>(p, "means_grid", ctx));
  }
  if (name == "linear_bandit") {
    check_keys(p, {"arms", "h_grid"}, ctx);
    if (!p.contains("arms") || !p.contains("h_grid"))
      throw SchemaError(ctx + ": linear_bandit needs 'arms' and 'h_grid'");
    return linear_bandit(vec_list_from(p.at("arms"), ctx + ".arms"),
                         vec_list_from(p.at("h_grid"), ctx + ".h_grid"));
  }
  if (name == "dhk_torus") {
    check_keys(p, {"n", "arm_res", "h_res"}, ctx);
    return dhk_torus(get_req<int>(p, "n", ctx), get_req<int>(p, "arm_res", ctx),
                     get_req<int>(p, "h_res", ctx));
  }
  if (name == "rot_triangle") {
    check_keys(p, {"arm_res", "h_res"}, ctx);
    return rot_triangle(get_req<int>(p, "arm_res", ctx),
                        get_req<int>(p, "h_res", ctx));
  }
  if (name == "square_isometries") {
    check_keys(p, {"h_res"}, ctx);
    return square_isometries(get_req<int>(p, "h_res", ctx));
  }
  if (name == "hyperplane") {
    check_keys(p, {"n", "m", "arm_res", "h_res"}, ctx);
    return hyperplane_scenario(get_req<int>(p, "n", ctx), get_req<int>(p, "m", ctx),
                               get_req<int>(p, "arm_res", ctx),
                               get_req<int>(p, "h_res", ctx));
  }
  if (name == "moment") {
    check_keys(p, {"n", "h_res", "curve_samples"}, ctx);
    return moment_scenario(get_req<int>(p, "n", ctx), get_req<int>(p, "h_res", ctx),
                           get_opt<int>(p, "curve_samples", 65, ctx));
  }
  if (name == "traffic_abcde") {
    check_keys(p, {"tau_min", "tau_max", "grid"}, ctx);
    return traffic_abcde(get_req<double>(p, "tau_min", ctx),
                         get_req<double>(p, "tau_max", ctx),
                         get_req<int>(p, "grid", ctx));
  }
  if (name == "zerosum") {
    check_keys(p, {"payoffs", "x_grid"}, ctx);
    if (!p.contains("payoffs")) throw SchemaError(ctx + ": missing 'payoffs'");
    std::vector<Mat> payoffs;
    for (size_t i = 0; i < p.at("payoffs").size(); ++i)
      payoffs.push_back(mat_from(p.at("payoffs")[i],
                                 ctx + ".payoffs[" + std::to_string(i) + "]"));
    return zerosum_scenario(payoffs, get_req<int>(p, "x_grid", ctx));
  }
  if (name == "lower_s") {
    check_keys(p, {"D", "alpha", "h_res"}, ctx);
    return lower_s_scenario(get_req<int>(p, "D", ctx),
                            get_req<double>(p, "alpha", ctx),
                            get_req<int>(p, "h_res", ctx));
  }
  if (name == "lower_r") {
    check_keys(p, {"lambda", "alpha", "arm_res", "h_res"}, ctx);
    return lower_r_scenario(get_req<double>(p, "lambda", ctx),
                            get_req<double>(p, "alpha", ctx),
                            get_req<int>(p, "arm_res", ctx),
                            get_req<int>(p, "h_res", ctx));
  }
  if (name == "pcb_desk") {
    check_keys(p, {}, ctx);
    return pcb_desk_example();
  }
  throw SchemaError("scenario.builder: unknown builder '" + name + "'");
}

// Accepted forms: a path string (scenario JSON file); {"file": path};
// {"builder": name, "params": {...}}; or an inline scenario object.
Scenario load_scenario(const json& node, const fs::path& base_dir) {
  try {
    if (node.is_string()) {
      fs::path p = node.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      return scenario_from_json(parse_json_file(p).dump());
    }
    if (!node.is_object()) throw SchemaError("scenario: expected object or path");
    if (node.contains("file")) {
      check_keys(node, {"file"}, "scenario");
      fs::path p = get_req<std::string>(node, "file", "scenario");
      if (p.is_relative()) p = base_dir / p;
      return scenario_from_json(parse_json_file(p).dump());
    }
    if (node.contains("builder")) {
      check_keys(node, {"builder", "params"}, "scenario");
      return build_scenario(get_req<std::string>(node, "builder", "scenario"),
                            node.contains("params") ? node.at("params")
                                                    : json::object());
    }
    if (node.contains("space")) return scenario_from_json(node.dump());
    throw SchemaError("scenario: need 'file', 'builder', or an inline scenario");
  } catch (const Inconsistent& e) {
    throw SchemaError(e.what());
  } catch (const IbError& e) {
    // Builder rejections (degenerate parameters etc.) are config errors.
    throw SchemaError(std::string("scenario: ") + e.what());
  }
}

void validate_or_throw(const Scenario& sc) {
  if (sc.family.num_hypotheses() == 0)
    throw ValidationError("scenario '" + sc.meta.name + "': empty hypothesis grid");
  if (sc.family.num_arms() == 0)
    throw ValidationError("scenario '" + sc.meta.name + "': no arms");
  ValidationReport rep = validate_family(sc.family, sc.space);
  if (!rep.ok)
    throw ValidationError("scenario '" + sc.meta.name + "': " + rep.summary);
}

// ---------------------------------------------------------------------------
// Policy factories

std::unique_ptr<AgentPolicy> make_agent(const json& node) {
  check_keys(node, {"kind", "params"}, "agent");
  const std::string kind = get_req<std::string>(node, "kind", "agent");
  const json p = node.contains("params") ? node.at("params") : json::object();
  if (kind == "iucb") {
    check_keys(p, {"eta"}, "agent.params");
    return std::make_unique<IUCBAgent>(get_opt<double>(p, "eta", -1.0, "agent"));
  }
  check_keys(p, {}, "agent.params");
  if (kind == "ucb") return std::make_unique<UCBAgent>();
  if (kind == "confidence_ball") return std::make_unique<ConfidenceBallAgent>();
  if (kind == "game_ucb") return std::make_unique<GameUCBAgent>();
  throw SchemaError("agent.kind: unknown agent '" + kind + "'");
}

std::unique_ptr<NaturePolicy> make_nature(const json& node) {
  check_keys(node, {"kind", "params"}, "nature");
  const std::string kind = get_req<std::string>(node, "kind", "nature");
  const json p = node.contains("params") ? node.at("params") : json::object();
  if (kind == "greedy") {
    check_keys(p, {}, "nature.params");
    return greedy_adversary();
  }
  if (kind == "fixed_mean") {
    check_keys(p, {"means"}, "nature.params");
    if (!p.contains("means")) throw SchemaError("nature.params: missing 'means'");
    return fixed_mean_nature(vec_list_from(p.at("means"), "nature.params.means"));
  }
  if (kind == "lower_s") {
    check_keys(p, {"alpha", "delta", "u_star"}, "nature.params");
    LowerSParams sp;
    sp.alpha = get_opt<double>(p, "alpha", sp.alpha, "nature");
    sp.delta = get_opt<double>(p, "delta", sp.delta, "nature");
    if (!p.contains("u_star"))
      throw SchemaError("nature.params: lower_s needs 'u_star'");
    sp.u_star = vec_from(p.at("u_star"), "nature.params.u_star");
    return lower_s_adversary(sp);
  }
  if (kind == "lower_r") {
    check_keys(p, {"lambda", "alpha", "psi", "delta", "theta_star"},
               "nature.params");
    LowerRParams rp;
    rp.lambda = get_opt<double>(p, "lambda", rp.lambda, "nature");
    rp.alpha = get_opt<double>(p, "alpha", rp.alpha, "nature");
    rp.psi = get_opt<double>(p, "psi", rp.psi, "nature");
    rp.delta = get_opt<double>(p, "delta", rp.delta, "nature");
    if (!p.contains("theta_star"))
      throw SchemaError("nature.params: lower_r needs 'theta_star'");
    rp.theta_star = vec_from(p.at("theta_star"), "nature.params.theta_star");
    return lower_r_adversary(rp);
  }
  throw SchemaError("nature.kind: unknown nature '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Certificates

Certificates compute_certificates(const Scenario& sc) {
  Certificates cert;
  cert.R = param_R(sc.family, sc.space);
  cert.notes.push_back("R: polyhedral dual of the W-norm over the grid");
  auto [s, note] = param_S(sc.family, sc.space, sc.meta.sine_method,
                           sc.meta.sine_opts);
  cert.S = s;
  cert.notes.push_back("S: " + note);
  cert.C = param_C(sc.reward, sc.space);
  cert.notes.push_back("C: reward range over arms x extreme points");
  cert.g = gap_compute(sc.family, sc.reward, sc.space);
  cert.notes.push_back(std::isfinite(cert.g)
                           ? "g: min distance over qualifying pairs"
                           : "g: no qualifying hypothesis pair (vacuous)");
  return cert;
}

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

int thread_budget(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("IB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

// ---------------------------------------------------------------------------
// Commands

struct RunOptions {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

int cmd_run(const RunOptions& opt) {
  json cfg = parse_json_file(opt.config_path);
  check_keys(cfg,
             {"scenario", "agent", "nature", "theta", "N", "reps", "seed", "out"},
             "config");
  const fs::path base = fs::path(opt.config_path).parent_path();

  Scenario sc = load_scenario(
      cfg.contains("scenario") ? cfg.at("scenario")
                               : throw SchemaError("config: missing 'scenario'"),
      base);
  const int N = get_req<int>(cfg, "N", "config");
  const int reps = get_opt<int>(cfg, "reps", 1, "config");
  if (N < 0 || reps < 1) throw SchemaError("config: need N >= 0 and reps >= 1");
  std::uint64_t seed = get_opt<std::uint64_t>(cfg, "seed", 1, "config");
  if (opt.seed_override) seed = *opt.seed_override;

  fs::path out = opt.out_dir.empty()
                     ? fs::path(get_opt<std::string>(cfg, "out", "", "config"))
                     : fs::path(opt.out_dir);
  if (out.empty()) throw SchemaError("config: no output directory ('out' or --out)");

  // Hypothesis selection: an index, or "sweep" for the whole grid.
  std::vector<int> thetas;
  const json th = cfg.contains("theta") ? cfg.at("theta") : json(0);
  if (th.is_string()) {
    if (th.get<std::string>() != "sweep")
      throw SchemaError("config.theta: expected an index or \"sweep\"");
  } else if (!th.is_number_integer()) {
    throw SchemaError("config.theta: expected an index or \"sweep\"");
  }

  validate_or_throw(sc);
  if (th.is_string()) {
    for (int j = 0; j < sc.family.num_hypotheses(); ++j) thetas.push_back(j);
  } else {
    const int j = th.get<int>();
    if (j < 0 || j >= sc.family.num_hypotheses())
      throw SchemaError("config.theta: index out of range");
    thetas.push_back(j);
  }

  std::unique_ptr<AgentPolicy> agent = make_agent(
      cfg.contains("agent") ? cfg.at("agent")
                            : json{{"kind", "iucb"}});
  std::unique_ptr<NaturePolicy> nature = make_nature(
      cfg.contains("nature") ? cfg.at("nature")
                             : json{{"kind", "greedy"}});

  fs::create_directories(out);
  std::vector<std::string> outputs;
  std::vector<std::string> policy_errors;

  for (int j : thetas) {
    fs::path dir = thetas.size() == 1 ? out : out / ("theta_" + std::to_string(j));
    fs::create_directories(dir);
    const Vec& theta = sc.family.H_grid[(size_t)j];
    auto emit = [&](int rep, const Trace& tr, const RegretRecord& rec) {
      char name[32];
      std::snprintf(name, sizeof(name), "rep_%04d.csv", rep);
      std::ostringstream os;
      write_trace_csv(os, tr, rec);
      write_text(dir / name, os.str());
      outputs.push_back((dir / name).string());
      for (const std::string& f : tr.flags)
        policy_errors.push_back("theta " + std::to_string(j) + " rep " +
                                std::to_string(rep) + ": " + f);
    };
    MonteCarloSummary summary =
        monte_carlo(*agent, *nature, sc, theta, N, reps, seed, emit);
    std::ostringstream os;
    write_summary_csv(os, summary);
    write_text(dir / "summary.csv", os.str());
    outputs.push_back((dir / "summary.csv").string());
  }

  json manifest;
  manifest["tool"] = "ibench";
  manifest["version"] = kVersion;
  manifest["command"] = "run";
  manifest["config"] = cfg;
  manifest["config_hash"] = config_hash(cfg);
  manifest["seed_used"] = seed;
  manifest["threads"] = thread_budget(opt.threads);
  manifest["scenario_name"] = sc.meta.name;
  manifest["outputs"] = outputs;
  write_text(out / "manifest.json", manifest.dump(2) + "\n");

  if (!policy_errors.empty()) {
    for (const std::string& e : policy_errors) std::cerr << "ibench: " << e << "\n";
    return kRuntimeError;
  }
  std::cout << (out / "manifest.json").string() << "\n";
  for (const std::string& o : outputs) std::cout << o << "\n";
  return kOk;
}

int cmd_params(const std::string& scenario_path, const std::string& out_path) {
  Scenario sc = load_scenario(parse_json_file(scenario_path),
                              fs::path(scenario_path).parent_path());
  validate_or_throw(sc);
  Certificates cert = compute_certificates(sc);
  json rep;
  rep["scenario"] = sc.meta.name;
  rep["dim_Z"] = sc.family.dim_Z;
  rep["dim_W"] = sc.family.dim_W;
  rep["num_arms"] = sc.family.num_arms();
  rep["num_hypotheses"] = sc.family.num_hypotheses();
  rep["R"] = cert.R;
  rep["S"] = cert.S;
  rep["C"] = cert.C;
  rep["gap"] = number_or_inf(cert.g);
  rep["notes"] = cert.notes;
  const std::string text = rep.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
    std::cout << out_path << "\n";
  }
  return kOk;
}

int cmd_validate(const std::string& scenario_path) {
  Scenario sc = load_scenario(parse_json_file(scenario_path),
                              fs::path(scenario_path).parent_path());
  json rep;
  rep["scenario"] = sc.meta.name;
  if (sc.family.num_hypotheses() == 0) {
    rep["ok"] = false;
    rep["summary"] = "empty hypothesis grid";
    std::cout << rep.dump(2) << "\n";
    return kValidationError;
  }
  ValidationReport vr = validate_family(sc.family, sc.space);
  rep["ok"] = vr.ok;
  rep["summary"] = vr.summary;
  json failures = json::array();
  for (const ValidationEntry& e : vr.entries)
    if (!e.onto || !e.feasible)
      failures.push_back({{"arm", e.arm},
                          {"hyp", e.hyp},
                          {"onto", e.onto},
                          {"feasible", e.feasible}});
  rep["failures"] = failures;
  std::cout << rep.dump(2) << "\n";
  return vr.ok ? kOk : kValidationError;
}

struct BoundsOptions {
  std::string scenario_path;
  std::vector<double> Ns;
  double eta = 1.0;
  double delta = 0.05;
  double c_exp = 1.0;
  bool with_gap = false;
  double g_override = -1.0;  // < 0: use the computed gap
  std::string out_path;
};

int cmd_bounds(const BoundsOptions& opt) {
  Scenario sc = load_scenario(parse_json_file(opt.scenario_path),
                              fs::path(opt.scenario_path).parent_path());
  validate_or_throw(sc);
  Certificates cert = compute_certificates(sc);
  const BoundDims dims{sc.family.dim_Z, sc.family.dim_W};
  const bool simplex = sc.space.body.kind == ConvexBody::Kind::SimplexOfLabels;

  double g = cert.g;
  if (opt.with_gap) {
    if (opt.g_override >= 0) g = opt.g_override;
    if (!(g > 0) || std::isinf(g)) {
      std::cerr << "ibench: gap bound needs a finite positive gap (g = " << g
                << ")\n";
      return kZeroGap;
    }
  }

  std::ostringstream os;
  os.precision(17);
  os << "N,bound_main" << (simplex ? ",bound_simplex" : "")
     << (opt.with_gap ? ",bound_gap" : "") << "\n";
  for (double N : opt.Ns) {
    os << N << ','
       << bound_main(cert, dims, N, opt.eta, opt.delta, opt.c_exp);
    if (simplex)
      os << ',' << bound_simplex(cert, dims, N, opt.eta, opt.delta,
                                 sc.space.body.labels);
    if (opt.with_gap)
      os << ',' << bound_gap(cert, dims, N, opt.eta, g, opt.c_exp);
    os << '\n';
  }
  if (opt.out_path.empty()) {
    std::cout << os.str();
  } else {
    write_text(opt.out_path, os.str());
    std::cout << opt.out_path << "\n";
  }
  return kOk;
}

struct ConcentrationOptions {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed_override;
};

int cmd_concentration(const ConcentrationOptions& opt) {
  json cfg = parse_json_file(opt.config_path);
  check_keys(cfg,
             {"scenario", "nature", "theta", "x", "taus", "delta", "reps",
              "seed", "c_exp", "out"},
             "config");
  const fs::path base = fs::path(opt.config_path).parent_path();
  Scenario sc = load_scenario(
      cfg.contains("scenario") ? cfg.at("scenario")
                               : throw SchemaError("config: missing 'scenario'"),
      base);
  validate_or_throw(sc);

  const int theta_idx = get_opt<int>(cfg, "theta", 0, "config");
  if (theta_idx < 0 || theta_idx >= sc.family.num_hypotheses())
    throw SchemaError("config.theta: index out of range");
  const int x = get_opt<int>(cfg, "x", 0, "config");
  if (x < 0 || x >= sc.family.num_arms())
    throw SchemaError("config.x: arm index out of range");
  const std::vector<int> taus =
      get_req<std::vector<int>>(cfg, "taus", "config");
  const double delta = get_req<double>(cfg, "delta", "config");
  const int reps = get_opt<int>(cfg, "reps", 1000, "config");
  const double c_exp = get_opt<double>(cfg, "c_exp", 1.0, "config");
  std::uint64_t seed = get_opt<std::uint64_t>(cfg, "seed", 1, "config");
  if (opt.seed_override) seed = *opt.seed_override;
  if (reps < 1 || taus.empty() || delta <= 0)
    throw SchemaError("config: need reps >= 1, delta > 0, nonempty taus");

  std::unique_ptr<NaturePolicy> nature = make_nature(
      cfg.contains("nature") ? cfg.at("nature") : json{{"kind", "greedy"}});

  std::ostringstream os;
  os.precision(17);
  os << "tau,empirical_rate,simplex_bound,main_bound\n";
  for (int tau : taus) {
    ConcentrationResult r =
        concentration_experiment(sc, sc.family.H_grid[(size_t)theta_idx],
                                 *nature, x, tau, delta, reps, seed, c_exp);
    os << tau << ',' << r.empirical_rate << ',' << r.simplex_bound << ','
       << r.main_bound << '\n';
  }

  std::string out_path = opt.out_path.empty()
                             ? get_opt<std::string>(cfg, "out", "", "config")
                             : opt.out_path;
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    write_text(out_path, os.str());
    std::cout << out_path << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ibench: imprecise-bandit experiments"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunOptions run_opt;
  std::uint64_t seed_flag = 0;
  bool seed_set = false;
  CLI::App* run = app.add_subcommand("run", "run an experiment config");
  run->add_option("--config", run_opt.config_path, "experiment config JSON")
      ->required();
  run->add_option("--out", run_opt.out_dir, "output directory (overrides config)");
  run->add_option("--seed", seed_flag, "seed override")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--threads", run_opt.threads, "thread budget (or IB_THREADS)");

  std::string sc_path, out_path;
  CLI::App* params = app.add_subcommand("params", "certificate report for a scenario");
  params->add_option("--scenario", sc_path, "scenario JSON or builder spec")
      ->required();
  params->add_option("--out", out_path, "write report here instead of stdout");

  std::string val_path;
  CLI::App* validate = app.add_subcommand("validate", "hypothesis-family checks");
  validate->add_option("--scenario", val_path, "scenario JSON or builder spec")
      ->required();

  BoundsOptions b_opt;
  CLI::App* bounds = app.add_subcommand("bounds", "regret-bound curves as CSV");
  bounds->add_option("--scenario", b_opt.scenario_path, "scenario JSON or builder spec")
      ->required();
  bounds->add_option("--N", b_opt.Ns, "horizon list")->required();
  bounds->add_option("--eta", b_opt.eta, "confidence-radius scale")->required();
  bounds->add_option("--delta", b_opt.delta, "failure probability");
  bounds->add_option("--c-exp", b_opt.c_exp, "exponential constant knob");
  bounds->add_flag("--gap", b_opt.with_gap, "include the gap bound column");
  bounds->add_option("--g", b_opt.g_override, "gap override for the gap bound");
  bounds->add_option("--out", b_opt.out_path, "write CSV here instead of stdout");

  ConcentrationOptions c_opt;
  std::uint64_t cseed_flag = 0;
  bool cseed_set = false;
  CLI::App* conc = app.add_subcommand("concentration", "concentration experiment CSV");
  conc->add_option("--config", c_opt.config_path, "concentration config JSON")
      ->required();
  conc->add_option("--out", c_opt.out_path, "write CSV here instead of stdout");
  conc->add_option("--seed", cseed_flag, "seed override")
      ->each([&](const std::string&) { cseed_set = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchemaError;
  }

  try {
    if (*run) {
      if (seed_set) run_opt.seed_override = seed_flag;
      return cmd_run(run_opt);
    }
    if (*params) return cmd_params(sc_path, out_path);
    if (*validate) return cmd_validate(val_path);
    if (*bounds) return cmd_bounds(b_opt);
    if (*conc) {
      if (cseed_set) c_opt.seed_override = cseed_flag;
      return cmd_concentration(c_opt);
    }
  } catch (const SchemaError& e) {
    std::cerr << "ibench: config error: " << e.what() << "\n";
    return kSchemaError;
  } catch (const ValidationError& e) {
    std::cerr << "ibench: validation error: " << e.what() << "\n";
    return kValidationError;
  } catch (const ZeroGap& e) {
    std::cerr << "ibench: " << e.what() << "\n";
    return kZeroGap;
  } catch (const IbError& e) {
    std::cerr << "ibench: runtime error: " << e.what() << "\n";
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "ibench: " << e.what() << "\n";
    return kRuntimeError;
  }
  return kOk;
}
