// Experiment harness for the stochastic proximal point family: runs seeded
// trajectory grids to CSV/SVG, prints rate certificates, and drives the
// verification suite.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sppm/engine.hpp"
#include "sppm/io.hpp"
#include "sppm/theory.hpp"
#include "sppm/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sppm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitVerification = 4;

struct LambdaRule {
  bool powers_of_two = true;
  double constant = 1.0;
};

struct MethodConfig {
  std::string name;
  bool has_gamma = false;
  double gamma = 0.0;
  bool theory_gamma = false;
  double p = 1.0;          // lsvrp
  std::size_t tau = 0;     // sppm-nice
  std::size_t blocks = 0;  // sppm-block / sppm-stratified
  std::vector<double> probs;
};

struct ExperimentConfig {
  std::size_t n = 0, d = 0;
  std::uint64_t problem_seed = 0;
  double row_scale = 1.0;
  LambdaRule lambda_rule;
  std::vector<MethodConfig> methods;
  std::vector<double> global_gammas;
  std::size_t iterations = 0;
  std::size_t runs = 1;
  std::uint64_t base_seed = 42;
  double x0_distance = 10.0;
  std::string csv_path;
  std::string svg_path;  // optional
};

const std::vector<std::string> kMethodNames = {
    "sppm",      "sppm-us",    "sppm-is",         "sppm-vs",
    "sppm-nice", "sppm-block", "sppm-stratified", "sppm-star",
    "sppm-gc",   "lsvrp",      "point-saga"};

bool known_method(const std::string& name) {
  for (const auto& m : kMethodNames)
    if (m == name) return true;
  return false;
}

LambdaRule parse_lambda_rule(const json& j) {
  LambdaRule rule;
  require_keys(j, {"rule", "value"}, "problem.lambda");
  const std::string name = j.at("rule").get<std::string>();
  if (name == "powers-of-two") {
    rule.powers_of_two = true;
    if (j.contains("value")) throw ConfigError("problem.lambda: powers-of-two takes no value");
  } else if (name == "constant") {
    rule.powers_of_two = false;
    rule.constant = j.at("value").get<double>();
    if (!(rule.constant > 0.0)) throw ConfigError("problem.lambda.value: must be positive");
  } else {
    throw ConfigError("problem.lambda.rule: expected powers-of-two or constant");
  }
  return rule;
}

MethodConfig parse_method(const json& j, std::size_t index) {
  const std::string path = "methods[" + std::to_string(index) + "]";
  require_keys(j, {"name", "gamma", "p", "tau", "blocks", "probs"}, path);
  MethodConfig m;
  m.name = j.at("name").get<std::string>();
  if (!known_method(m.name)) throw ConfigError(path + ".name: unknown method '" + m.name + "'");
  if (j.contains("gamma")) {
    m.has_gamma = true;
    if (j["gamma"].is_string()) {
      if (j["gamma"].get<std::string>() != "theory")
        throw ConfigError(path + ".gamma: expected a number or \"theory\"");
      m.theory_gamma = true;
    } else {
      m.gamma = j["gamma"].get<double>();
      if (!(m.gamma > 0.0)) throw ConfigError(path + ".gamma: must be positive");
    }
  }
  if (m.theory_gamma && m.name != "sppm-gc" && m.name != "lsvrp" && m.name != "point-saga")
    throw ConfigError(path + ".gamma: no theory stepsize selector for " + m.name);
  if (j.contains("p")) {
    m.p = j["p"].get<double>();
    if (!(m.p > 0.0 && m.p <= 1.0)) throw ConfigError(path + ".p: must be in (0, 1]");
  }
  if (m.name == "lsvrp" && !j.contains("p")) throw ConfigError(path + ": lsvrp requires p");
  if (j.contains("tau")) m.tau = j["tau"].get<std::size_t>();
  if (m.name == "sppm-nice" && m.tau == 0) throw ConfigError(path + ": sppm-nice requires tau");
  if (j.contains("blocks")) m.blocks = j["blocks"].get<std::size_t>();
  if ((m.name == "sppm-block" || m.name == "sppm-stratified") && m.blocks == 0)
    throw ConfigError(path + ": " + m.name + " requires blocks");
  if (j.contains("probs")) {
    m.probs = j["probs"].get<std::vector<double>>();
    if (m.name != "sppm") throw ConfigError(path + ".probs: only valid for sppm");
  }
  return m;
}

ExperimentConfig parse_config(const json& j) {
  require_keys(j, {"problem", "methods", "gammas", "iterations", "runs", "base_seed",
                   "x0_distance", "output"},
               "config");
  ExperimentConfig cfg;
  const json& prob = j.at("problem");
  require_keys(prob, {"n", "d", "seed", "lambda", "row_scale"}, "problem");
  cfg.n = prob.at("n").get<std::size_t>();
  cfg.d = prob.at("d").get<std::size_t>();
  cfg.problem_seed = prob.at("seed").get<std::uint64_t>();
  if (prob.contains("row_scale")) {
    cfg.row_scale = prob["row_scale"].get<double>();
    if (!(cfg.row_scale > 0.0)) throw ConfigError("problem.row_scale: must be positive");
  }
  cfg.lambda_rule = parse_lambda_rule(prob.at("lambda"));
  if (cfg.n == 0 || cfg.d == 0) throw ConfigError("problem: n and d must be positive");

  const json& methods = j.at("methods");
  if (!methods.is_array() || methods.empty())
    throw ConfigError("methods: expected a nonempty array");
  for (std::size_t i = 0; i < methods.size(); ++i)
    cfg.methods.push_back(parse_method(methods[i], i));

  if (j.contains("gammas")) {
    cfg.global_gammas = j["gammas"].get<std::vector<double>>();
    for (double g : cfg.global_gammas)
      if (!(g > 0.0)) throw ConfigError("gammas: entries must be positive");
    if (cfg.global_gammas.empty()) throw ConfigError("gammas: must be nonempty when present");
  }
  for (const auto& m : cfg.methods)
    if (!m.has_gamma && cfg.global_gammas.empty())
      throw ConfigError("methods: " + m.name + " has no gamma and no global gammas are set");

  cfg.iterations = j.at("iterations").get<std::size_t>();
  if (cfg.iterations == 0) throw ConfigError("iterations: must be positive");
  cfg.runs = j.at("runs").get<std::size_t>();
  if (cfg.runs == 0) throw ConfigError("runs: must be positive");
  cfg.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("x0_distance")) {
    cfg.x0_distance = j["x0_distance"].get<double>();
    if (!(cfg.x0_distance > 0.0)) throw ConfigError("x0_distance: must be positive");
  }
  const json& output = j.at("output");
  require_keys(output, {"csv", "svg"}, "output");
  cfg.csv_path = output.at("csv").get<std::string>();
  if (output.contains("svg")) cfg.svg_path = output["svg"].get<std::string>();
  return cfg;
}

Vec make_lambdas(const ExperimentConfig& cfg) {
  Vec lambdas(cfg.n);
  for (std::size_t i = 0; i < cfg.n; ++i)
    lambdas[i] = cfg.lambda_rule.powers_of_two
                     ? std::pow(2.0, -double((i % cfg.d) + 1))
                     : cfg.lambda_rule.constant;
  return lambdas;
}

std::vector<std::vector<std::size_t>> contiguous_partition(std::size_t n, std::size_t blocks) {
  if (blocks == 0 || blocks > n) throw ConfigError("blocks: must satisfy 1 <= blocks <= n");
  std::vector<std::vector<std::size_t>> part(blocks);
  for (std::size_t i = 0; i < n; ++i) part[i * blocks / n].push_back(i);
  return part;
}

std::vector<double> importance_probs(const ProblemConstants& consts) {
  std::vector<double> q(consts.mu_each.size());
  double total = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) total += consts.mu_each[i];
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = consts.mu_each[i] / total;
  return q;
}

// Probabilities proportional to gradient norms at the optimum; when some norm
// vanishes the pure rule is degenerate, so a uniform floor of 1e-6 total mass
// is mixed in (implementation choice, flagged in the method label).
std::vector<double> variance_probs(const ProblemConstants& consts, bool* floored) {
  const std::size_t n = consts.grad_at_star.size();
  std::vector<double> norms(n);
  double total = 0.0, min_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    norms[i] = norm(consts.grad_at_star[i]);
    total += norms[i];
    min_norm = std::min(min_norm, norms[i]);
  }
  std::vector<double> q(n);
  *floored = min_norm == 0.0;
  if (total == 0.0) {
    for (auto& e : q) e = 1.0 / double(n);
    return q;
  }
  if (!*floored) {
    for (std::size_t i = 0; i < n; ++i) q[i] = norms[i] / total;
    return q;
  }
  const double floor_mass = 1e-6;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = (1.0 - floor_mass) * norms[i] / total + floor_mass / double(n);
    sum += q[i];
  }
  for (auto& e : q) e /= sum;
  return q;
}

struct ResolvedMethod {
  std::string label;
  MethodSpec spec;  // gamma set per cell
};

ResolvedMethod resolve_method(const MethodConfig& m, const RegressionProblem& p,
                              const ProblemConstants& consts) {
  ResolvedMethod r;
  r.label = m.name;
  MethodSpec& spec = r.spec;
  spec.strategy = {CorrectionKind::none, 1.0};
  spec.sampler = Sampler::uniform_singleton(p.n);
  if (m.name == "sppm" && !m.probs.empty()) {
    spec.sampler = Sampler::singleton(m.probs);
  } else if (m.name == "sppm-is") {
    spec.sampler = Sampler::singleton(importance_probs(consts));
  } else if (m.name == "sppm-vs") {
    bool floored = false;
    spec.sampler = Sampler::singleton(variance_probs(consts, &floored));
    if (floored) r.label += "-floored";
  } else if (m.name == "sppm-nice") {
    spec.sampler = Sampler::nice(p.n, m.tau);
    r.label += "-tau" + std::to_string(m.tau);
  } else if (m.name == "sppm-block") {
    const auto part = contiguous_partition(p.n, m.blocks);
    spec.sampler = Sampler::block(part, std::vector<double>(m.blocks, 1.0 / double(m.blocks)));
    r.label += "-b" + std::to_string(m.blocks);
  } else if (m.name == "sppm-stratified") {
    spec.sampler = Sampler::stratified(contiguous_partition(p.n, m.blocks));
    r.label += "-b" + std::to_string(m.blocks);
  } else if (m.name == "sppm-star") {
    spec.strategy = {CorrectionKind::star, 1.0};
  } else if (m.name == "sppm-gc") {
    spec.strategy = {CorrectionKind::gc, 1.0};
  } else if (m.name == "lsvrp") {
    spec.strategy = {CorrectionKind::lsvrp, m.p};
    r.label += "-p" + format_double(m.p);
  } else if (m.name == "point-saga") {
    spec.strategy = {CorrectionKind::point_saga, 1.0};
  }
  return r;
}

double resolve_theory_gamma(const MethodConfig& m, const MethodSpec& spec,
                            const ProblemConstants& consts, std::size_t n) {
  RateInputs in;
  in.mu = consts.mu;
  in.delta = consts.delta;
  in.nu = consts.nu;
  in.n = n;
  in.p = m.p;
  const StepsizeSelection sel =
      optimal_stepsize(spec.strategy.kind, in, 1.0, std::exp(1.0) + 1.0);
  if (sel.unbounded_gamma)
    throw ConfigError("methods: theory stepsize for " + m.name +
                      " is unbounded on this instance (no finite optimum)");
  return sel.gamma;
}

bool recorded_iteration(std::size_t k) { return k <= 1000 || k % 10 == 0; }

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet) {
  RegressionProblem p = make_gaussian_problem(cfg.n, cfg.d, make_lambdas(cfg), cfg.problem_seed);
  if (cfg.row_scale != 1.0)
    for (auto& row : p.rows)
      for (double& e : row) e *= cfg.row_scale;
  const ProblemConstants consts = compute_constants(p);
  Vec x0 = consts.x_star;
  for (auto& e : x0) e += cfg.x0_distance / std::sqrt(double(p.d));

  // Cells in fixed CSV order: methods outer, gammas inner.
  struct Cell {
    ResolvedMethod method;
    double gamma;
    std::size_t gamma_group;  // index into the global grid, 0 when per-method
  };
  std::vector<Cell> cells;
  for (const auto& mc : cfg.methods) {
    ResolvedMethod rm = resolve_method(mc, p, consts);
    if (mc.has_gamma) {
      const double g = mc.theory_gamma ? resolve_theory_gamma(mc, rm.spec, consts, p.n) : mc.gamma;
      cells.push_back({rm, g, 0});
    } else {
      for (std::size_t gi = 0; gi < cfg.global_gammas.size(); ++gi)
        cells.push_back({rm, cfg.global_gammas[gi], gi});
    }
  }

  fs::create_directories(out_dir.empty() ? "." : out_dir);
  auto out_path = [&](const std::string& name) {
    return (fs::path(out_dir.empty() ? "." : out_dir) / name).string();
  };

  std::ofstream csv(out_path(cfg.csv_path), std::ios::binary);
  if (!csv) throw IoError("cannot write " + out_path(cfg.csv_path));
  csv << "method,gamma,run,iteration,sq_dist,lyapunov\n";

  // Mean curves per gamma group for the charts.
  std::map<std::size_t, std::vector<Series>> charts;

  for (const auto& cell : cells) {
    MethodSpec spec = cell.method.spec;
    spec.gamma = cell.gamma;
    spec.iterations = cfg.iterations;
    if (spec.strategy.kind == CorrectionKind::lsvrp)
      spec.record_lyapunov_alpha = spec.gamma * consts.mu / spec.strategy.lsvrp_p;
    else if (spec.strategy.kind == CorrectionKind::point_saga)
      spec.record_lyapunov_alpha = spec.gamma * consts.mu * double(p.n);
    const bool with_ly = spec.record_lyapunov_alpha.has_value();

    std::vector<double> mean_sq(cfg.iterations + 1, 0.0);
    for (std::size_t run_index = 0; run_index < cfg.runs; ++run_index) {
      const Trajectory t = run(spec, p, consts, x0, cfg.base_seed, run_index);
      for (std::size_t k = 0; k <= cfg.iterations; ++k) {
        mean_sq[k] += t.sq_dist[k] / double(cfg.runs);
        if (!recorded_iteration(k)) continue;
        csv << cell.method.label << ',' << format_double(cell.gamma) << ',' << run_index << ','
            << k << ',' << format_double(t.sq_dist[k]) << ',';
        if (with_ly) csv << format_double(t.lyapunov[k]);
        csv << '\n';
      }
    }
    Series s;
    s.name = cell.method.label + " (gamma=" + format_double(cell.gamma) + ")";
    for (std::size_t k = 0; k <= cfg.iterations; ++k) {
      if (!recorded_iteration(k)) continue;
      s.xs.push_back(double(k));
      s.ys.push_back(mean_sq[k]);
    }
    charts[cell.gamma_group].push_back(std::move(s));
    if (!quiet)
      std::cerr << "done: " << cell.method.label << " gamma=" << format_double(cell.gamma)
                << "\n";
  }
  csv.flush();
  if (!csv) throw IoError("write failed for " + out_path(cfg.csv_path));

  if (!cfg.svg_path.empty()) {
    const fs::path base(cfg.svg_path);
    for (const auto& [group, series] : charts) {
      std::string name = base.string();
      if (charts.size() > 1) {
        const std::string tag = "-gamma" + format_double(cfg.global_gammas[group]);
        name = (base.parent_path() / (base.stem().string() + tag + base.extension().string()))
                   .string();
      }
      write_file(out_path(name),
                 render_log_chart("mean squared distance to the minimizer", "iteration",
                                  "mean sq_dist", series));
    }
  }
}

json preset_config(const std::string& name) {
  if (name == "fig1")
    return json{
        {"problem",
         {{"n", 10}, {"d", 3}, {"seed", 1001}, {"lambda", {{"rule", "powers-of-two"}}}}},
        {"methods",
         {{{"name", "sppm-us"}},
          {{"name", "sppm-is"}},
          {{"name", "sppm-vs"}},
          {{"name", "sppm-nice"}, {"tau", 9}}}},
        {"gammas", {1e-4, 1e-2, 1.0, 1e2}},
        {"iterations", 10000},
        {"runs", 10},
        {"base_seed", 42},
        {"output", {{"csv", "fig1.csv"}, {"svg", "fig1.svg"}}}};
  if (name == "fig2") {
    json methods = json::array();
    for (int tau : {1, 2, 5, 9, 10}) methods.push_back({{"name", "sppm-nice"}, {"tau", tau}});
    return json{
        {"problem",
         {{"n", 10}, {"d", 3}, {"seed", 1001}, {"lambda", {{"rule", "powers-of-two"}}}}},
        {"methods", methods},
        {"gammas", {1e-2, 1e-1, 1.0}},
        {"iterations", 10000},
        {"runs", 10},
        {"base_seed", 42},
        {"output", {{"csv", "fig2.csv"}, {"svg", "fig2.svg"}}}};
  }
  if (name == "fig3")
    return json{
        {"problem",
         {{"n", 1000},
          {"d", 10},
          {"seed", 3003},
          {"row_scale", 1.5},
          {"lambda", {{"rule", "constant"}, {"value", 1.0}}}}},
        {"methods", {{{"name", "sppm-us"}}, {{"name", "sppm-gc"}}, {{"name", "sppm-star"}}}},
        {"gammas", {1e-2, 1.0, 1e2}},
        {"iterations", 1000},
        {"runs", 5},
        {"base_seed", 42},
        {"output", {{"csv", "fig3.csv"}, {"svg", "fig3.svg"}}}};
  if (name == "fig4") {
    json methods = json::array();
    methods.push_back({{"name", "sppm-gc"}, {"gamma", "theory"}});
    methods.push_back({{"name", "point-saga"}, {"gamma", "theory"}});
    for (double p : {1e-3, 5e-3, 1e-2, 5e-2, 1e-1, 1.0})
      methods.push_back({{"name", "lsvrp"}, {"gamma", "theory"}, {"p", p}});
    return json{
        {"problem",
         {{"n", 1000},
          {"d", 10},
          {"seed", 3003},
          {"lambda", {{"rule", "constant"}, {"value", 1.0}}}}},
        {"methods", methods},
        {"iterations", 30000},
        {"runs", 5},
        {"base_seed", 42},
        {"output", {{"csv", "fig4.csv"}, {"svg", "fig4.svg"}}}};
  }
  throw ConfigError("preset: expected fig1, fig2, fig3 or fig4");
}

RegressionProblem toy1_problem() {
  RegressionProblem p;
  p.n = 2;
  p.d = 1;
  p.rows = {{1.0}, {1.0}};
  p.targets = {2.0, -2.0};
  p.lambdas = {0.5, 0.5};
  return p;
}

int cmd_certify(const std::string& method_name, bool toy1, std::size_t n, std::size_t d,
                std::uint64_t data_seed, double lambda_value, const std::string& gamma_arg,
                double alpha_arg, double eps, double lsvrp_p, std::size_t tau) {
  RegressionProblem p;
  if (toy1) {
    p = toy1_problem();
  } else {
    p = make_gaussian_problem(n, d, Vec(n, lambda_value), data_seed);
  }
  const ProblemConstants consts = compute_constants(p);
  MethodConfig mc;
  mc.name = method_name;
  mc.p = lsvrp_p;
  mc.tau = tau;
  if (mc.name == "sppm-nice" && tau == 0) throw ConfigError("sppm-nice requires --tau");
  const ResolvedMethod rm = resolve_method(mc, p, consts);
  const RateInputs in = effective_rate_inputs(rm.spec, p, consts);

  double gamma;
  StepsizeSelection sel;
  bool have_sel = false;
  if (gamma_arg == "theory") {
    const double psi0 = 100.0;  // default starting distance squared
    sel = optimal_stepsize(rm.spec.strategy.kind, in, eps, psi0);
    have_sel = true;
    if (sel.unbounded_gamma)
      throw ConfigError("theory stepsize is unbounded on this instance; pass a numeric gamma");
    gamma = sel.gamma;
  } else {
    gamma = std::stod(gamma_arg);
    if (!(gamma > 0.0)) throw ConfigError("--gamma must be positive");
  }

  double alpha = alpha_arg;
  if (alpha <= 0.0) {
    switch (rm.spec.strategy.kind) {
      case CorrectionKind::lsvrp: alpha = gamma * in.mu / lsvrp_p; break;
      case CorrectionKind::point_saga: alpha = gamma * in.mu * double(p.n); break;
      default: alpha = 1.0;
    }
  }

  const AssumptionParams q = params_from_inputs(rm.spec.strategy.kind, in);
  const RateCertificate cert = certificate(q, gamma, alpha, in.mu);
  std::cout << "method " << rm.label << "\n"
            << "gamma " << format_double(gamma) << "\n"
            << "alpha " << format_double(alpha) << "\n"
            << "mu " << format_double(in.mu) << "\n"
            << "theta " << format_double(cert.theta) << "\n"
            << "zeta " << format_double(cert.zeta) << "\n"
            << "neighborhood " << format_double(cert.neighborhood) << "\n";
  if (!have_sel && rm.spec.strategy.kind != CorrectionKind::star) {
    try {
      sel = optimal_stepsize(rm.spec.strategy.kind, in, eps, 100.0);
      have_sel = true;
    } catch (const Error&) {
      have_sel = false;
    }
  }
  if (have_sel) {
    std::cout << "gamma_star "
              << (sel.unbounded_gamma ? std::string("unbounded") : format_double(sel.gamma))
              << "\n"
              << "iterations_for_eps " << format_double(sel.iterations) << "\n";
  }
  return kExitOk;
}

int cmd_verify(bool full, std::uint64_t seed) {
  const std::vector<CheckReport> reports = default_suite(seed, !full);
  bool all_passed = true;
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["worst_margin"] = r.worst_margin;
    j["samples"] = r.samples;
    j["notes"] = r.notes;
    std::cout << j.dump() << "\n";
    all_passed = all_passed && r.passed;
  }
  return all_passed ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stochastic proximal point experiment harness"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out_dir;
  std::size_t runs_override = 0;
  bool quiet = false;
  app.add_option("--seed", seed, "base seed override")->each([&](const std::string&) {
    seed_set = true;
  });
  app.add_option("--out-dir", out_dir, "directory for output files");
  app.add_option("--runs", runs_override, "number of runs override");
  app.add_flag("--quiet", quiet, "suppress progress output");

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config");
  std::string config_path;
  run_cmd->add_option("config", config_path, "config file")->required();

  auto* preset_cmd = app.add_subcommand("preset", "run a named built-in experiment");
  std::string preset_name;
  preset_cmd->add_option("name", preset_name, "fig1|fig2|fig3|fig4")->required();

  auto* certify_cmd = app.add_subcommand("certify", "print the rate certificate for a method");
  std::string method_name, gamma_arg = "1";
  bool toy1 = false;
  std::size_t cn = 10, cd = 3, ctau = 0;
  std::uint64_t cseed = 1001;
  double clambda = 1.0, alpha_arg = 0.0, eps = 1e-6, lsvrp_p = 1.0;
  certify_cmd->add_option("--method", method_name, "method name")->required();
  certify_cmd->add_flag("--toy1", toy1, "use the built-in two-function 1-D fixture");
  certify_cmd->add_option("--n", cn, "number of functions");
  certify_cmd->add_option("--d", cd, "dimension");
  certify_cmd->add_option("--data-seed", cseed, "instance seed");
  certify_cmd->add_option("--lambda", clambda, "constant regularizer");
  certify_cmd->add_option("--gamma", gamma_arg, "stepsize or \"theory\"");
  certify_cmd->add_option("--alpha", alpha_arg, "Lyapunov weight (default per method)");
  certify_cmd->add_option("--eps", eps, "target accuracy for the complexity bound");
  certify_cmd->add_option("--p", lsvrp_p, "control-update probability");
  certify_cmd->add_option("--tau", ctau, "subset size for sppm-nice");

  auto* verify_cmd = app.add_subcommand("verify", "run the verification suite");
  bool full = false;
  verify_cmd->add_flag("--full", full, "run the full-scale suite");

  // Let the global options (--seed etc.) appear after the subcommand too.
  for (auto* sub : {run_cmd, preset_cmd, certify_cmd, verify_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (run_cmd->parsed() || preset_cmd->parsed()) {
      json doc;
      if (run_cmd->parsed()) {
        std::ifstream in(config_path);
        if (!in) throw IoError("cannot open " + config_path);
        try {
          in >> doc;
        } catch (const nlohmann::json::exception& e) {
          throw ConfigError(config_path + ": " + e.what());
        }
      } else {
        doc = preset_config(preset_name);
      }
      ExperimentConfig cfg = parse_config(doc);
      if (seed_set) cfg.base_seed = seed;
      if (runs_override > 0) cfg.runs = runs_override;
      run_experiment(cfg, out_dir, quiet);
      return kExitOk;
    }
    if (certify_cmd->parsed())
      return cmd_certify(method_name, toy1, cn, cd, cseed, clambda, gamma_arg, alpha_arg, eps,
                         lsvrp_p, ctau);
    if (verify_cmd->parsed()) return cmd_verify(full, seed_set ? seed : 12345);
  } catch (const CertificateInvalid& e) {
    std::cerr << "certificate invalid: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
