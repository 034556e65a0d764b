#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "ikwsms/dataset.hpp"
#include "ikwsms/objective.hpp"

namespace ikwsms {

// Compact box for theta. When the solver standardizes regressors the box is
// expressed in standardized coordinates.
struct ThetaDomain {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static ThetaDomain cube(int dim, double half_width);
  int dim() const { return static_cast<int>(lower.size()); }
  bool contains(const Eigen::VectorXd& theta) const;
  void validate(int dim) const;
};

struct SolverOptions {
  int starts = 32;
  // Low-discrepancy candidates screened by objective value; the best
  // (starts - 1) seed the local ascents next to theta = 0.
  int screen_points = 256;
  int max_iterations = 200;
  double gradient_tol = 1e-9;
  // Centre and scale x1 and x_tilde before optimizing (output is mapped back).
  bool standardize = true;
};

struct FirstStageSolution {
  double v = 0.0;
  Eigen::VectorXd theta_hat;  // (intercept, coefficients on x_tilde)
  double objective_value = 0.0;
  bool converged = false;
  double effective_kernel_mass = 0.0;

  // e_d theta: the coefficient block.
  Eigen::VectorXd beta() const { return theta_hat.tail(theta_hat.size() - 1); }
};

/// Best local maximizer of the first-stage objective over the domain, found by
/// multistart projected quasi-Newton ascent. Deterministic in all arguments.
/// Throws DegenerateWindowError when every kernel weight at v vanishes.
FirstStageSolution solve_first_stage(const Dataset& data, double v, const Bandwidths& bw,
                                     const ThetaDomain& domain, const SolverOptions& options,
                                     std::uint64_t seed);

/// Single local ascent from `start` (original coordinates, clamped to the
/// domain): the local maximizer in the basin of a warm start.
FirstStageSolution refine_first_stage(const Dataset& data, double v, const Bandwidths& bw,
                                      const ThetaDomain& domain, const SolverOptions& options,
                                      const Eigen::VectorXd& start);

}  // namespace ikwsms
