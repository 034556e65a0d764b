#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ikwsms/dgp.hpp"
#include "ikwsms/estimator.hpp"
#include "ikwsms/experiment.hpp"
#include "ikwsms/inference.hpp"

namespace ikwsms::cli {

// Flat run configuration shared by every subcommand. Fields left unset fall
// back to the library defaults.
struct RunConfig {
  std::optional<std::string> input;  // dataset CSV; otherwise data are simulated
  Design design = Design::NR;
  std::size_t n = 1000;
  double beta_true = 1.0;
  double rho = 0.2;

  std::optional<double> weight_lower;
  std::optional<double> weight_upper;
  std::optional<double> weight_height;
  int grid_size = 21;
  std::optional<double> h;
  std::optional<double> h_v;
  double multiplier = 1.0;
  int starts = 32;
  int screen_points = 256;
  std::optional<double> theta_half_width;
  std::vector<double> theta_lower;
  std::vector<double> theta_upper;
  ThetaAtObservation theta_mode = ThetaAtObservation::refine;
  BandwidthMode bandwidth_mode = BandwidthMode::global;

  std::string test = "t";  // "t" or "wald"
  std::optional<std::string> coefficient;
  std::optional<double> null_value;
  std::vector<std::vector<double>> restriction_r;
  std::vector<double> restriction_c;
  int bootstrap = kDefaultBootstrapReplicates;
  double alpha = 0.05;

  ExperimentMode mode = ExperimentMode::size;
  int replications = 500;
  std::vector<double> alphas{0.10, 0.05, 0.01};
  std::vector<double> multipliers{1.0};

  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = ".";
  std::optional<std::string> output;
  bool quiet = false;
};

// Parses a flat JSON object; unknown keys and ill-typed values throw UsageError.
RunConfig parse_config(const std::string& json_text);

EstimatorConfig estimator_config(const RunConfig& config, int dim);
DgpSpec dgp_spec(const RunConfig& config);

int cmd_estimate(const RunConfig& config, std::ostream& out);
int cmd_test(const RunConfig& config, std::ostream& out);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& progress);
int cmd_dgp(const RunConfig& config, std::ostream& out);

// Full command line entry point; returns the process exit status.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ikwsms::cli
