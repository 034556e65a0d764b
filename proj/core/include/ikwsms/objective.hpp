#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ikwsms/dataset.hpp"

namespace ikwsms {

struct Bandwidths {
  double h = 1.0;    // index scale inside G, before the multiplier
  double h_v = 1.0;  // scale of K in V
  double multiplier = 1.0;
  int order = 4;
  // Optional per-grid-node first-stage h (pre-multiplier). Empty in the global
  // mode; when set, only the first stage uses it.
  std::vector<double> h_nodes;

  double effective_h() const { return multiplier * h; }
  void validate() const;
};

// First-stage smoothed score problem at a fixed evaluation point v, with the
// kernel weights (2Y_i - 1) K((V_i - v) / h_v) precomputed.
class LocalObjective {
 public:
  LocalObjective(const Dataset& data, double v, double h, double h_v);

  double value(const Eigen::VectorXd& theta) const;
  double value_and_gradient(const Eigen::VectorXd& theta, Eigen::VectorXd& grad) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& theta) const;

  // Sum_i K((V_i - v) / h_v), without the sign.
  double kernel_mass() const { return kernel_mass_; }
  double abs_kernel_mass() const { return abs_kernel_mass_; }
  int dim() const { return dim_; }

 private:
  const Dataset& data_;
  double h_;
  double scale_;  // 1 / (n h_v)
  int dim_;
  Eigen::VectorXd signed_weight_;
  double kernel_mass_ = 0.0;
  double abs_kernel_mass_ = 0.0;
};

/// (1/(n h_v)) sum_i (2Y_i - 1) G((X_i1 + W_i'theta) / h) K((V_i - v) / h_v),
/// with h = bw.effective_h().
double objective(const Dataset& data, const Eigen::VectorXd& theta, double v,
                 const Bandwidths& bw);

Eigen::VectorXd gradient(const Dataset& data, const Eigen::VectorXd& theta, double v,
                         const Bandwidths& bw);

Eigen::MatrixXd hessian(const Dataset& data, const Eigen::VectorXd& theta, double v,
                        const Bandwidths& bw);

}  // namespace ikwsms
