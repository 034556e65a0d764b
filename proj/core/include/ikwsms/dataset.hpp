#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace ikwsms {

// Observed sample {(Y_i, X_i1, X~_i, V_i)}. The coefficient on x1 is normalized
// to one; x_tilde holds the remaining d-1 regressors.
struct Dataset {
  Eigen::VectorXi y;
  Eigen::VectorXd x1;
  Eigen::MatrixXd x_tilde;
  Eigen::VectorXd v;

  std::size_t size() const { return static_cast<std::size_t>(y.size()); }
  // Length of theta: intercept plus one coefficient per x_tilde column.
  int dim() const { return 1 + static_cast<int>(x_tilde.cols()); }

  // W_i = (1, X~_i).
  Eigen::VectorXd w_row(Eigen::Index i) const;

  Dataset subset(const std::vector<std::size_t>& rows) const;

  /// Throws InvalidDataError unless the sample satisfies the model's basic
  /// requirements: equal column lengths, n >= d + 2, finite entries, binary y,
  /// and at least d + 1 distinct values of x1.
  void validate() const;
};

bool operator==(const Dataset& a, const Dataset& b);

}  // namespace ikwsms
