#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ikwsms/bandwidth.hpp"
#include "ikwsms/dataset.hpp"
#include "ikwsms/first_stage.hpp"
#include "ikwsms/objective.hpp"

namespace ikwsms {

// Compactly supported weight tau with unit integral. Either piecewise constant
// (height on [lower, upper]) or piecewise linear through tabulated points.
class WeightFunction {
 public:
  static WeightFunction constant(double lower, double upper, double height);
  // 1.25 on [0.1, 0.9].
  static WeightFunction standard();
  static WeightFunction tabulated(std::vector<std::pair<double, double>> points);

  double operator()(double v) const;
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  bool is_tabulated() const { return !table_.empty(); }
  double height() const { return height_; }
  double integral() const;
  void validate() const;

 private:
  double lower_ = 0.1;
  double upper_ = 0.9;
  double height_ = 1.25;
  std::vector<std::pair<double, double>> table_;
};

enum class ThetaAtObservation {
  interpolate,  // linear interpolation between neighbouring grid fits
  refine,       // interpolation followed by a local ascent at V_j
  resolve,      // full multistart first-stage solve at every V_j
};

enum class BandwidthMode { global, per_node };

struct EstimatorConfig {
  WeightFunction weight = WeightFunction::standard();
  int grid_size = 21;
  // Empty means the default cube [-10, 10]^d.
  std::optional<ThetaDomain> domain;
  SolverOptions solver;
  ThetaAtObservation theta_mode = ThetaAtObservation::refine;
  BandwidthMode bandwidth_mode = BandwidthMode::global;
  std::uint64_t seed = 0;
  int threads = 1;

  ThetaDomain domain_for(int dim) const;
  std::vector<double> grid() const;
};

inline constexpr double kDefaultThetaHalfWidth = 10.0;
inline constexpr double kSingularConditionNumber = 1e10;
inline constexpr double kMaxDroppedVarianceFraction = 0.20;

struct VarianceEstimate {
  Eigen::MatrixXd omega;
  int contributing = 0;  // observations with tau(V_j) > 0 and G' != 0
  int dropped = 0;       // of those, skipped for an ill-conditioned Hessian
};

struct VarianceOptions {
  ThetaAtObservation theta_mode = ThetaAtObservation::refine;
  // Used by the refine and resolve modes.
  std::optional<ThetaDomain> domain;
  SolverOptions solver;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct EstimationResult {
  Eigen::VectorXd beta_hat;
  std::vector<FirstStageSolution> grid;
  Bandwidths bandwidths;
  Eigen::MatrixXd omega_hat;
  std::size_t n = 0;
  int nonconverged_nodes = 0;
  int variance_contributing = 0;
  int variance_dropped = 0;
};

/// theta(V_j) by linear interpolation between the grid fits bracketing v;
/// clamps outside the grid range.
Eigen::VectorXd interpolate_theta(const std::vector<FirstStageSolution>& grid, double v);

/// Plug-in variance
///   (1/(nh)) sum_j Q(V_j) W_j W_j' Q(V_j)' [G'((X_j1 + W_j'theta(V_j))/h)]^2,
/// Q(V_j) = tau(V_j) e_d [-H(V_j)]^{-1}. Contributions whose Hessian has
/// condition number above 1e10 are dropped; more than 20% dropped throws
/// VarianceDegeneracyError.
VarianceEstimate variance_estimate(const Dataset& data,
                                   const std::vector<FirstStageSolution>& grid,
                                   const WeightFunction& weight, const Bandwidths& bw,
                                   const VarianceOptions& options = {});

/// Two-stage estimate: first-stage fits on a uniform grid over the weight
/// support, trapezoid integration against tau, then the plug-in variance.
EstimationResult estimate(const Dataset& data, const EstimatorConfig& config,
                          const Bandwidths& bw);

/// Bandwidth selection on the config's grid followed by estimate().
EstimationResult estimate(const Dataset& data, const EstimatorConfig& config,
                          double multiplier = 1.0);

BandwidthSelection select_bandwidths(const Dataset& data, const EstimatorConfig& config);

}  // namespace ikwsms
