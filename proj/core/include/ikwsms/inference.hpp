#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ikwsms/dataset.hpp"
#include "ikwsms/estimator.hpp"
#include "ikwsms/rng.hpp"

namespace ikwsms {

// Null hypothesis F(beta) = 0 on the coefficient vector beta in R^{d-1}.
class Restriction {
 public:
  enum class Kind { component, linear, general };
  using Function = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Jacobian = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

  // beta[index] = value (zero-based coefficient index).
  static Restriction component(int index, double value);
  // R beta - c = 0.
  static Restriction linear(Eigen::MatrixXd r, Eigen::VectorXd c);
  static Restriction general(Function f, Jacobian jacobian, int rows, std::string name = {});

  Kind kind() const { return kind_; }
  int index() const { return index_; }
  double value() const { return value_; }
  int rows() const;
  const std::string& name() const { return name_; }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& beta) const;
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& beta) const;
  void validate(int coefficients) const;

 private:
  Kind kind_ = Kind::component;
  int index_ = 0;
  double value_ = 0.0;
  Eigen::MatrixXd r_;
  Eigen::VectorXd c_;
  Function f_;
  Jacobian jac_;
  int rows_ = 1;
  std::string name_;
};

enum class TestKind { t, wald };

struct TestOutcome {
  TestKind kind = TestKind::t;
  double statistic = 0.0;
  double acv = 0.0;
  double bcv = 0.0;
  bool reject_acv = false;
  bool reject_bcv = false;
  double alpha = 0.05;
  int n_bootstrap = 0;
  int failures = 0;
  // |t*| for the t test, W* for the Wald test.
  std::vector<double> bootstrap_stats;
};

/// sqrt(n h) (beta_j - beta0) / sqrt(Omega_jj), h the effective bandwidth.
/// Throws VarianceDegeneracyError when Omega_jj <= 0.
double t_statistic(const EstimationResult& result, int index, double beta0);

/// (n h) F' {F'' Omega F''^T}^{-1} F with F'' the Jacobian at beta_hat.
double wald_statistic(const EstimationResult& result, const Restriction& restriction);

// Building blocks shared with the warp-speed simulation.
double bootstrap_t(const EstimationResult& original, const EstimationResult& replicate,
                   int index);
double bootstrap_wald(const EstimationResult& original, const EstimationResult& replicate,
                      const Restriction& restriction);

/// Two-sided normal quantile z_{1-alpha/2} for t, chi-square(q) 1-alpha quantile
/// for Wald.
double asymptotic_critical_value(TestKind kind, double alpha, int q = 1);

/// n rows drawn uniformly with replacement.
Dataset bootstrap_resample(const Dataset& data, RandomStream& stream);
Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed);

/// The ceil((1 - alpha) B)-th order statistic of the bootstrap statistics.
double bootstrap_critical_value(std::vector<double> stats, double alpha);

struct BootstrapConfig {
  EstimatorConfig estimator;
  // Selected on the original sample when absent; replicates always reuse the
  // original-sample bandwidths.
  std::optional<Bandwidths> bandwidths;
  double multiplier = 1.0;
  double max_failure_fraction = 0.10;
};

inline constexpr int kDefaultBootstrapReplicates = 399;

TestOutcome bootstrap_t_test(const Dataset& data, const BootstrapConfig& config, int index,
                             double beta0, int replicates, double alpha, std::uint64_t seed);

TestOutcome bootstrap_wald_test(const Dataset& data, const BootstrapConfig& config,
                                const Restriction& restriction, int replicates, double alpha,
                                std::uint64_t seed);

}  // namespace ikwsms
