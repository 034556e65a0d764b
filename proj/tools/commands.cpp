#include "commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "ikwsms/errors.hpp"
#include "ikwsms/io.hpp"

namespace ikwsms::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
T typed(const json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    throw UsageError("config key '" + key + "' has the wrong type");
  }
}

double number(const json& value, const std::string& key) {
  if (!value.is_number()) throw UsageError("config key '" + key + "' must be a number");
  return value.get<double>();
}

int integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) throw UsageError("config key '" + key + "' must be an integer");
  return value.get<int>();
}

std::vector<double> numbers(const json& value, const std::string& key) {
  if (!value.is_array()) throw UsageError("config key '" + key + "' must be an array");
  std::vector<double> out;
  for (const auto& x : value) out.push_back(number(x, key));
  return out;
}

ThetaAtObservation parse_theta_mode(const std::string& s) {
  if (s == "interpolate") return ThetaAtObservation::interpolate;
  if (s == "refine") return ThetaAtObservation::refine;
  if (s == "resolve") return ThetaAtObservation::resolve;
  throw UsageError("theta_mode must be one of interpolate, refine, resolve");
}

BandwidthMode parse_bandwidth_mode(const std::string& s) {
  if (s == "global") return BandwidthMode::global;
  if (s == "per_node") return BandwidthMode::per_node;
  throw UsageError("bandwidth_mode must be global or per_node");
}

using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"input", [](RunConfig& c, const json& v, const std::string& k) { c.input = typed<std::string>(v, k); }},
      {"design", [](RunConfig& c, const json& v, const std::string& k) { c.design = parse_design(typed<std::string>(v, k)); }},
      {"n", [](RunConfig& c, const json& v, const std::string& k) {
         const int n = integer(v, k);
         if (n < 1) throw UsageError("n must be positive");
         c.n = static_cast<std::size_t>(n);
       }},
      {"beta_true", [](RunConfig& c, const json& v, const std::string& k) { c.beta_true = number(v, k); }},
      {"rho", [](RunConfig& c, const json& v, const std::string& k) { c.rho = number(v, k); }},
      {"weight_lower", [](RunConfig& c, const json& v, const std::string& k) { c.weight_lower = number(v, k); }},
      {"weight_upper", [](RunConfig& c, const json& v, const std::string& k) { c.weight_upper = number(v, k); }},
      {"weight_height", [](RunConfig& c, const json& v, const std::string& k) { c.weight_height = number(v, k); }},
      {"grid_size", [](RunConfig& c, const json& v, const std::string& k) { c.grid_size = integer(v, k); }},
      {"h", [](RunConfig& c, const json& v, const std::string& k) { c.h = number(v, k); }},
      {"h_v", [](RunConfig& c, const json& v, const std::string& k) { c.h_v = number(v, k); }},
      {"multiplier", [](RunConfig& c, const json& v, const std::string& k) { c.multiplier = number(v, k); }},
      {"starts", [](RunConfig& c, const json& v, const std::string& k) { c.starts = integer(v, k); }},
      {"screen_points", [](RunConfig& c, const json& v, const std::string& k) { c.screen_points = integer(v, k); }},
      {"theta_half_width", [](RunConfig& c, const json& v, const std::string& k) { c.theta_half_width = number(v, k); }},
      {"theta_lower", [](RunConfig& c, const json& v, const std::string& k) { c.theta_lower = numbers(v, k); }},
      {"theta_upper", [](RunConfig& c, const json& v, const std::string& k) { c.theta_upper = numbers(v, k); }},
      {"theta_mode", [](RunConfig& c, const json& v, const std::string& k) { c.theta_mode = parse_theta_mode(typed<std::string>(v, k)); }},
      {"bandwidth_mode", [](RunConfig& c, const json& v, const std::string& k) { c.bandwidth_mode = parse_bandwidth_mode(typed<std::string>(v, k)); }},
      {"test", [](RunConfig& c, const json& v, const std::string& k) {
         c.test = typed<std::string>(v, k);
         if (c.test != "t" && c.test != "wald") throw UsageError("test must be t or wald");
       }},
      {"coefficient", [](RunConfig& c, const json& v, const std::string& k) { c.coefficient = typed<std::string>(v, k); }},
      {"null_value", [](RunConfig& c, const json& v, const std::string& k) { c.null_value = number(v, k); }},
      {"restriction_r", [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_array()) throw UsageError("config key '" + k + "' must be an array of rows");
         c.restriction_r.clear();
         for (const auto& row : v) c.restriction_r.push_back(numbers(row, k));
       }},
      {"restriction_c", [](RunConfig& c, const json& v, const std::string& k) { c.restriction_c = numbers(v, k); }},
      {"bootstrap", [](RunConfig& c, const json& v, const std::string& k) { c.bootstrap = integer(v, k); }},
      {"alpha", [](RunConfig& c, const json& v, const std::string& k) { c.alpha = number(v, k); }},
      {"mode", [](RunConfig& c, const json& v, const std::string& k) { c.mode = parse_mode(typed<std::string>(v, k)); }},
      {"replications", [](RunConfig& c, const json& v, const std::string& k) { c.replications = integer(v, k); }},
      {"alphas", [](RunConfig& c, const json& v, const std::string& k) { c.alphas = numbers(v, k); }},
      {"multipliers", [](RunConfig& c, const json& v, const std::string& k) { c.multipliers = numbers(v, k); }},
      {"seed", [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned()) throw UsageError("config key '" + k + "' must be a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"threads", [](RunConfig& c, const json& v, const std::string& k) { c.threads = integer(v, k); }},
      {"out_dir", [](RunConfig& c, const json& v, const std::string& k) { c.out_dir = typed<std::string>(v, k); }},
      {"output", [](RunConfig& c, const json& v, const std::string& k) { c.output = typed<std::string>(v, k); }},
      {"quiet", [](RunConfig& c, const json& v, const std::string& k) { c.quiet = typed<bool>(v, k); }},
  };
  return table;
}

RunConfig decode(const json& object) {
  if (!object.is_object()) throw UsageError("config must be a JSON object");
  RunConfig config;
  for (const auto& [key, value] : object.items()) {
    const auto it = setters().find(key);
    if (it == setters().end()) throw UsageError("unknown config key '" + key + "'");
    it->second(config, value, key);
  }
  return config;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw UsageError("config file " + path + ": " + e.what());
  }
}

WeightFunction weight_function(const RunConfig& c) {
  if (!c.weight_lower && !c.weight_upper && !c.weight_height) return WeightFunction::standard();
  const double lower = c.weight_lower.value_or(0.1);
  const double upper = c.weight_upper.value_or(0.9);
  if (!(upper > lower)) throw UsageError("weight_upper must exceed weight_lower");
  const double height = c.weight_height.value_or(1.0 / (upper - lower));
  auto w = WeightFunction::constant(lower, upper, height);
  w.validate();
  return w;
}

Dataset load_or_simulate(const RunConfig& c, std::ostream& out) {
  if (c.input) {
    io::LoadReport report;
    Dataset data = io::load_dataset(*c.input, &report);
    if (!c.quiet) {
      out << "loaded " << report.rows << " rows from " << *c.input << " (columns";
      for (const auto& col : report.columns) out << ' ' << col;
      out << ")\n";
    }
    return data;
  }
  Dataset data = generate_dataset(dgp_spec(c));
  if (!c.quiet) {
    out << "simulated design " << design_name(c.design) << ", n = " << c.n << ", seed " << c.seed
        << "\n";
  }
  return data;
}

int coefficient_index(const RunConfig& c, const Dataset& data) {
  const auto names = io::coefficient_names(data);
  if (!c.coefficient) return 0;
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (names[k] == *c.coefficient) return static_cast<int>(k);
  }
  std::string valid;
  for (const auto& name : names) valid += (valid.empty() ? "" : ", ") + name;
  throw UsageError("unknown coefficient '" + *c.coefficient + "' (valid: " + valid + ")");
}

Bandwidths resolve_bandwidths(const RunConfig& c, const Dataset& data,
                              const EstimatorConfig& cfg) {
  Bandwidths bw;
  if (c.h && c.h_v) {
    bw.h = *c.h;
    bw.h_v = *c.h_v;
  } else {
    bw = select_bandwidths(data, cfg).bandwidths;
    if (c.h) {
      bw.h = *c.h;
      bw.h_nodes.clear();
    }
    if (c.h_v) bw.h_v = *c.h_v;
  }
  bw.multiplier = c.multiplier;
  bw.validate();
  return bw;
}

std::string fmt(double x) { return io::format_double(x); }

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

fs::path out_path(const RunConfig& c, const std::string& name) {
  return fs::path(c.out_dir) / name;
}

void write_json(const fs::path& path, const json& doc) {
  io::write_file_atomic(path, doc.dump(2) + "\n");
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  try {
    return decode(json::parse(json_text));
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
}

EstimatorConfig estimator_config(const RunConfig& c, int dim) {
  EstimatorConfig cfg;
  cfg.weight = weight_function(c);
  if (c.grid_size < 2) throw UsageError("grid_size must be at least 2");
  cfg.grid_size = c.grid_size;
  if (c.starts < 1) throw UsageError("starts must be positive");
  cfg.solver.starts = c.starts;
  cfg.solver.screen_points = c.screen_points;
  if (!c.theta_lower.empty() || !c.theta_upper.empty()) {
    if (c.theta_lower.size() != static_cast<std::size_t>(dim) ||
        c.theta_upper.size() != static_cast<std::size_t>(dim)) {
      throw UsageError("theta_lower and theta_upper need " + std::to_string(dim) + " entries");
    }
    ThetaDomain d;
    d.lower = Eigen::Map<const Eigen::VectorXd>(c.theta_lower.data(), dim);
    d.upper = Eigen::Map<const Eigen::VectorXd>(c.theta_upper.data(), dim);
    d.validate(dim);
    cfg.domain = d;
  } else if (c.theta_half_width) {
    cfg.domain = ThetaDomain::cube(dim, *c.theta_half_width);
  }
  cfg.theta_mode = c.theta_mode;
  cfg.bandwidth_mode = c.bandwidth_mode;
  cfg.seed = c.seed;
  if (c.threads < 1) throw UsageError("threads must be positive");
  cfg.threads = c.threads;
  return cfg;
}

DgpSpec dgp_spec(const RunConfig& c) {
  DgpSpec spec;
  spec.design = c.design;
  spec.n = c.n;
  spec.beta_true = c.beta_true;
  spec.rho = c.rho;
  spec.seed = c.seed;
  spec.validate();
  return spec;
}

int cmd_estimate(const RunConfig& c, std::ostream& out) {
  const Dataset data = load_or_simulate(c, out);
  const EstimatorConfig cfg = estimator_config(c, data.dim());
  const Bandwidths bw = resolve_bandwidths(c, data, cfg);
  const EstimationResult r = estimate(data, cfg, bw);
  const auto names = io::coefficient_names(data);
  const double nh = static_cast<double>(r.n) * bw.effective_h();

  out << "n = " << r.n << ", d = " << data.dim() << "\n";
  out << "h = " << fmt(bw.h) << ", h_v = " << fmt(bw.h_v) << ", multiplier = " << fmt(bw.multiplier)
      << "\n";
  out << "grid nodes: " << r.grid.size() << ", non-converged: " << r.nonconverged_nodes << "\n";
  out << "variance terms: " << r.variance_contributing << " contributing, " << r.variance_dropped
      << " dropped\n";
  out << std::left << std::setw(8) << "coef" << std::setw(24) << "beta_hat" << "std_err\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out << std::setw(8) << names[k] << std::setw(24) << fmt(r.beta_hat(i))
        << fmt(std::sqrt(std::max(r.omega_hat(i, i), 0.0) / nh)) << "\n";
  }
  out << "omega_hat:\n";
  for (Eigen::Index i = 0; i < r.omega_hat.rows(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < r.omega_hat.cols(); ++j) out << ' ' << fmt(r.omega_hat(i, j));
    out << "\n";
  }

  json doc;
  doc["n"] = r.n;
  doc["d"] = data.dim();
  doc["coefficients"] = names;
  doc["beta_hat"] = vector_json(r.beta_hat);
  doc["omega_hat"] = matrix_json(r.omega_hat);
  doc["h"] = bw.h;
  doc["h_v"] = bw.h_v;
  doc["multiplier"] = bw.multiplier;
  doc["nonconverged_nodes"] = r.nonconverged_nodes;
  doc["variance_contributing"] = r.variance_contributing;
  doc["variance_dropped"] = r.variance_dropped;
  json grid = json::array();
  for (const auto& node : r.grid) {
    grid.push_back({{"v", node.v},
                    {"theta", vector_json(node.theta_hat)},
                    {"objective", node.objective_value},
                    {"converged", node.converged},
                    {"kernel_mass", node.effective_kernel_mass}});
  }
  doc["grid"] = grid;
  const fs::path path = c.output ? fs::path(*c.output) : out_path(c, "estimate.json");
  write_json(path, doc);
  out << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_test(const RunConfig& c, std::ostream& out) {
  const Dataset data = load_or_simulate(c, out);
  BootstrapConfig bc;
  bc.estimator = estimator_config(c, data.dim());
  bc.multiplier = c.multiplier;
  if (c.h || c.h_v) bc.bandwidths = resolve_bandwidths(c, data, bc.estimator);
  if (c.bootstrap < 1) throw UsageError("bootstrap must be positive");

  const auto names = io::coefficient_names(data);
  const int index = coefficient_index(c, data);
  const double beta0 = c.null_value.value_or(0.0);
  TestOutcome outcome;
  std::string hypothesis;
  if (c.test == "t") {
    outcome = bootstrap_t_test(data, bc, index, beta0, c.bootstrap, c.alpha, c.seed);
    hypothesis = names[static_cast<std::size_t>(index)] + " = " + fmt(beta0);
  } else {
    Restriction restriction = Restriction::component(index, beta0);
    hypothesis = names[static_cast<std::size_t>(index)] + " = " + fmt(beta0);
    if (!c.restriction_r.empty()) {
      const auto rows = static_cast<Eigen::Index>(c.restriction_r.size());
      const auto cols = static_cast<Eigen::Index>(names.size());
      Eigen::MatrixXd r(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = c.restriction_r[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != cols) {
          throw UsageError("restriction_r rows need " + std::to_string(cols) + " entries");
        }
        for (Eigen::Index j = 0; j < cols; ++j) r(i, j) = row[static_cast<std::size_t>(j)];
      }
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
      if (!c.restriction_c.empty()) {
        if (static_cast<Eigen::Index>(c.restriction_c.size()) != rows) {
          throw UsageError("restriction_c needs one entry per restriction_r row");
        }
        rhs = Eigen::Map<const Eigen::VectorXd>(c.restriction_c.data(), rows);
      }
      restriction = Restriction::linear(r, rhs);
      hypothesis = "R beta = c (" + std::to_string(rows) + " restrictions)";
    }
    outcome = bootstrap_wald_test(data, bc, restriction, c.bootstrap, c.alpha, c.seed);
  }

  const char* label = outcome.kind == TestKind::t ? "t" : "wald";
  out << "test: " << label << ", H0: " << hypothesis << ", alpha = " << fmt(c.alpha) << "\n";
  out << "statistic: " << fmt(outcome.statistic) << "\n";
  out << "ACV: " << fmt(outcome.acv) << "  reject: " << (outcome.reject_acv ? "yes" : "no") << "\n";
  out << "BCV: " << fmt(outcome.bcv) << "  reject: " << (outcome.reject_bcv ? "yes" : "no") << "\n";
  out << "bootstrap replicates: " << outcome.n_bootstrap << ", failures: " << outcome.failures
      << "\n";

  json doc;
  doc["test"] = label;
  doc["hypothesis"] = hypothesis;
  doc["alpha"] = c.alpha;
  doc["statistic"] = outcome.statistic;
  doc["acv"] = outcome.acv;
  doc["bcv"] = outcome.bcv;
  doc["reject_acv"] = outcome.reject_acv;
  doc["reject_bcv"] = outcome.reject_bcv;
  doc["bootstrap"] = outcome.n_bootstrap;
  doc["failures"] = outcome.failures;
  const fs::path path = c.output ? fs::path(*c.output) : out_path(c, "test.json");
  write_json(path, doc);
  out << "wrote " << path.string() << "\n";
  return 0;
}

int cmd_simulate(const RunConfig& c, std::ostream& out, std::ostream& progress) {
  if (c.input) throw UsageError("simulate generates its own data; drop 'input'");
  ExperimentSpec spec;
  spec.dgp = dgp_spec(c);
  spec.replications = c.replications;
  spec.alphas = c.alphas;
  spec.multipliers = c.multipliers;
  spec.mode = c.mode;
  spec.master_seed = c.seed;
  spec.estimator = estimator_config(c, 2);
  spec.threads = c.threads;
  if (c.null_value || c.test == "wald") {
    const double beta0 =
        c.null_value.value_or(c.mode == ExperimentMode::size ? c.beta_true : 0.0);
    if (c.test == "wald") {
      spec.hypothesis = Restriction::linear(Eigen::MatrixXd::Ones(1, 1),
                                            Eigen::VectorXd::Constant(1, beta0));
    } else {
      spec.hypothesis = Restriction::component(0, beta0);
    }
  }
  spec.validate();

  const int step = std::max(1, spec.replications / 20);
  const auto report = [&](int done, int total) {
    if (c.quiet) return;
    if (done % step == 0 || done == total) {
      progress << "replication " << done << "/" << total << "\n" << std::flush;
    }
  };
  const RejectionTable table = run_experiment(spec, report);

  const std::string csv_name = csv_file_name(spec.mode, spec.dgp.design, spec.dgp.n);
  const fs::path csv_path = out_path(c, csv_name);
  fs::path txt_path = csv_path;
  txt_path.replace_extension(".txt");
  const auto layout = spec.mode == ExperimentMode::size ? TableLayout::size : TableLayout::power;
  const std::string text = emit_text(table, layout);
  io::write_file_atomic(csv_path, emit_csv(table));
  io::write_file_atomic(txt_path, text);

  out << text;
  out << "replications: " << table.replications << ", failures: " << table.failures << "\n";
  out << "wrote " << csv_path.string() << " and " << txt_path.string() << "\n";
  return 0;
}

int cmd_dgp(const RunConfig& c, std::ostream& out) {
  const DgpSpec spec = dgp_spec(c);
  const Dataset data = generate_dataset(spec);
  const fs::path path =
      c.output ? fs::path(*c.output)
               : out_path(c, "dgp_" + std::string(design_name(spec.design)) + "_n" +
                                 std::to_string(spec.n) + "_seed" + std::to_string(spec.seed) +
                                 ".csv");
  io::save_dataset(data, path);
  out << "wrote " << data.size() << " rows to " << path.string() << "\n";
  return 0;
}

namespace {

// Registers a flag whose value lands in the override object under `key`.
template <typename T>
CLI::Option* flag(CLI::App* app, json& overrides, const std::string& names, const std::string& key,
                  const std::string& help) {
  return app->add_option_function<T>(
      names, [&overrides, key](const T& value) { overrides[key] = value; }, help);
}

void common_flags(CLI::App* app, json& overrides, std::string& config_path) {
  app->add_option("--config", config_path, "JSON config file (flat keys)");
  flag<std::uint64_t>(app, overrides, "--seed", "seed", "random seed");
  flag<int>(app, overrides, "--threads", "threads", "worker threads");
  flag<std::string>(app, overrides, "--out-dir", "out_dir", "output directory");
  flag<std::string>(app, overrides, "--design", "design", "UN, NR, T3, LG or HE");
  flag<int>(app, overrides, "-n,--n", "n", "sample size for simulated data");
  flag<double>(app, overrides, "--beta-true", "beta_true", "true coefficient for simulated data");
  app->add_flag_function(
      "-q,--quiet", [&overrides](std::int64_t) { overrides["quiet"] = true; },
      "suppress progress output");
}

void estimator_flags(CLI::App* app, json& overrides) {
  flag<std::string>(app, overrides, "-i,--input", "input", "dataset CSV (y,x1,x2..,v)");
  flag<int>(app, overrides, "--grid-size", "grid_size", "first-stage grid nodes");
  flag<double>(app, overrides, "--bandwidth", "h", "index bandwidth override");
  flag<double>(app, overrides, "--bandwidth-v", "h_v", "V bandwidth override");
  flag<int>(app, overrides, "--starts", "starts", "first-stage multistart count");
  flag<std::string>(app, overrides, "--theta-mode", "theta_mode",
                    "theta at observations: interpolate, refine, resolve");
  flag<std::string>(app, overrides, "-o,--output", "output", "result file path");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integrated kernel weighted smoothed maximum score estimation and bootstrap tests"};
  app.require_subcommand(1);
  json overrides = json::object();
  std::string config_path;

  auto* est = app.add_subcommand("estimate", "estimate beta and its variance");
  common_flags(est, overrides, config_path);
  estimator_flags(est, overrides);
  flag<double>(est, overrides, "--multiplier", "multiplier", "bandwidth multiplier in (0, 1]");

  auto* tst = app.add_subcommand("test", "bootstrap t or Wald test");
  common_flags(tst, overrides, config_path);
  estimator_flags(tst, overrides);
  flag<double>(tst, overrides, "--multiplier", "multiplier", "bandwidth multiplier in (0, 1]");
  flag<std::string>(tst, overrides, "--test", "test", "t or wald");
  flag<std::string>(tst, overrides, "--coefficient", "coefficient", "coefficient name, e.g. x2");
  flag<double>(tst, overrides, "--null", "null_value", "hypothesized value");
  flag<int>(tst, overrides, "-B,--bootstrap", "bootstrap", "bootstrap replicates");
  flag<double>(tst, overrides, "--alpha", "alpha", "nominal level");

  auto* sim = app.add_subcommand("simulate", "warp-speed Monte Carlo rejection rates");
  common_flags(sim, overrides, config_path);
  flag<int>(sim, overrides, "--grid-size", "grid_size", "first-stage grid nodes");
  flag<int>(sim, overrides, "--starts", "starts", "first-stage multistart count");
  flag<std::string>(sim, overrides, "--mode", "mode", "size or power");
  flag<int>(sim, overrides, "-R,--replications", "replications", "Monte Carlo replications");
  flag<std::vector<double>>(sim, overrides, "--alphas", "alphas", "nominal levels");
  flag<std::vector<double>>(sim, overrides, "--multiplier,--multipliers", "multipliers",
                            "bandwidth multipliers");
  flag<std::string>(sim, overrides, "--theta-mode", "theta_mode",
                    "theta at observations: interpolate, refine, resolve");

  auto* dgp = app.add_subcommand("dgp", "write a simulated dataset");
  common_flags(dgp, overrides, config_path);
  flag<double>(dgp, overrides, "--rho", "rho", "regressor correlation");
  flag<std::string>(dgp, overrides, "-o,--output", "output", "dataset path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorClass::usage);
  }

  try {
    json merged = config_path.empty() ? json::object() : read_json_file(config_path);
    if (!merged.is_object()) throw UsageError("config must be a JSON object");
    merged.update(overrides);
    const RunConfig config = decode(merged);
    if (est->parsed()) return cmd_estimate(config, out);
    if (tst->parsed()) return cmd_test(config, out);
    if (sim->parsed()) return cmd_simulate(config, out, err);
    return cmd_dgp(config, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ErrorClass::generic);
  }
}

}  // namespace ikwsms::cli
