#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ikwsms/dgp.hpp"
#include "ikwsms/estimator.hpp"
#include "ikwsms/inference.hpp"

namespace ikwsms {

enum class ExperimentMode { size, power };

std::string_view mode_name(ExperimentMode mode);
ExperimentMode parse_mode(std::string_view name);

struct ExperimentSpec {
  DgpSpec dgp;
  int replications = 500;
  std::vector<double> alphas{0.10, 0.05, 0.01};
  std::vector<double> multipliers{1.0};
  // Defaults to beta = beta_true (size) or beta = 0 (power) on the first
  // coefficient. Component restrictions use the t test, others the Wald test.
  std::optional<Restriction> hypothesis;
  ExperimentMode mode = ExperimentMode::size;
  std::uint64_t master_seed = 0;
  EstimatorConfig estimator;
  int threads = 1;
  double max_failure_fraction = 0.05;

  Restriction resolved_hypothesis() const;
  void validate() const;
};

struct RejectionRow {
  ExperimentMode mode = ExperimentMode::size;
  Design design = Design::NR;
  std::size_t n = 0;
  double alpha = 0.0;
  double multiplier = 1.0;
  int replications = 0;
  int effective = 0;  // replications that produced both statistics
  int failures = 0;
  int acv_rejections = 0;
  int bcv_rejections = 0;
  double acv = 0.0;
  double bcv = 0.0;

  double acv_rate() const { return effective > 0 ? double(acv_rejections) / effective : 0.0; }
  double bcv_rate() const { return effective > 0 ? double(bcv_rejections) / effective : 0.0; }
};

struct RejectionTable {
  std::vector<RejectionRow> rows;
  int replications = 0;
  int failures = 0;
};

// Statistics of one Monte Carlo replication at one bandwidth multiplier.
struct ReplicationDraw {
  bool ok = false;
  double statistic = 0.0;            // |t_n| or W_n
  double bootstrap_statistic = 0.0;  // |t*| or W*
};

using ProgressCallback = std::function<void(int done, int total)>;

/// Warp-speed Monte Carlo: one bootstrap statistic per replication, pooled
/// across replications into a single bootstrap critical value per
/// (alpha, multiplier) cell.
RejectionTable run_experiment(const ExperimentSpec& spec, const ProgressCallback& progress = {});

/// Runs a single replication for every multiplier; exposed for tests.
std::vector<ReplicationDraw> run_replication(const ExperimentSpec& spec, int replication);

/// Rejection rates from per-replication draws (one vector per multiplier).
RejectionTable tabulate(const ExperimentSpec& spec,
                        const std::vector<std::vector<ReplicationDraw>>& draws);

enum class TableLayout { size, power };

std::string emit_csv(const RejectionTable& table);
RejectionTable parse_csv(const std::string& text);
std::string emit_text(const RejectionTable& table, TableLayout layout);

std::string csv_file_name(ExperimentMode mode, Design design, std::size_t n);

}  // namespace ikwsms
