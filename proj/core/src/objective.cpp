#include "ikwsms/objective.hpp"

#include <cmath>
#include <string>

#include "ikwsms/errors.hpp"
#include "kernel_detail.hpp"

namespace ikwsms {

namespace kd = kernels::detail;

void Bandwidths::validate() const {
  if (!(std::isfinite(h) && h > 0.0) || !(std::isfinite(h_v) && h_v > 0.0)) {
    throw UsageError("bandwidths must be finite and positive");
  }
  if (!(multiplier > 0.0 && multiplier <= 1.0)) {
    throw UsageError("bandwidth multiplier must lie in (0, 1], got " + std::to_string(multiplier));
  }
  for (double hk : h_nodes) {
    if (!(std::isfinite(hk) && hk > 0.0)) {
      throw UsageError("per-node bandwidths must be finite and positive");
    }
  }
}

LocalObjective::LocalObjective(const Dataset& data, double v, double h, double h_v)
    : data_(data),
      h_(h),
      scale_(1.0 / (static_cast<double>(data.size()) * h_v)),
      dim_(data.dim()),
      signed_weight_(data.y.size()) {
  for (Eigen::Index i = 0; i < data.y.size(); ++i) {
    const double k = kd::k((data.v(i) - v) / h_v);
    kernel_mass_ += k;
    abs_kernel_mass_ += std::abs(k);
    signed_weight_(i) = data.y(i) == 1 ? k : -k;
  }
}

double LocalObjective::value(const Eigen::VectorXd& theta) const {
  const auto n = data_.y.size();
  const double inv_h = 1.0 / h_;
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double index = data_.x1(i) + theta(0);
    for (int k = 1; k < dim_; ++k) index += data_.x_tilde(i, k - 1) * theta(k);
    total += signed_weight_(i) * kd::g(index * inv_h);
  }
  return scale_ * total;
}

double LocalObjective::value_and_gradient(const Eigen::VectorXd& theta,
                                          Eigen::VectorXd& grad) const {
  const auto n = data_.y.size();
  const double inv_h = 1.0 / h_;
  grad.setZero(dim_);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double index = data_.x1(i) + theta(0);
    for (int k = 1; k < dim_; ++k) index += data_.x_tilde(i, k - 1) * theta(k);
    const double t = index * inv_h;
    total += signed_weight_(i) * kd::g(t);
    const double slope = signed_weight_(i) * kd::g_prime(t);
    if (slope != 0.0) {
      grad(0) += slope;
      for (int k = 1; k < dim_; ++k) grad(k) += slope * data_.x_tilde(i, k - 1);
    }
  }
  grad *= scale_ * inv_h;
  return scale_ * total;
}

Eigen::MatrixXd LocalObjective::hessian(const Eigen::VectorXd& theta) const {
  const auto n = data_.y.size();
  const double inv_h = 1.0 / h_;
  Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(dim_, dim_);
  Eigen::VectorXd w(dim_);
  for (Eigen::Index i = 0; i < n; ++i) {
    double index = data_.x1(i) + theta(0);
    for (int k = 1; k < dim_; ++k) index += data_.x_tilde(i, k - 1) * theta(k);
    const double curvature = signed_weight_(i) * kd::g_second(index * inv_h);
    if (curvature == 0.0) continue;
    w(0) = 1.0;
    for (int k = 1; k < dim_; ++k) w(k) = data_.x_tilde(i, k - 1);
    // Lower triangle only; mirrored below so the result is exactly symmetric.
    for (int a = 0; a < dim_; ++a) {
      for (int b = 0; b <= a; ++b) hess(a, b) += curvature * w(a) * w(b);
    }
  }
  for (int a = 0; a < dim_; ++a) {
    for (int b = 0; b < a; ++b) hess(b, a) = hess(a, b);
  }
  return hess * (scale_ * inv_h * inv_h);
}

double objective(const Dataset& data, const Eigen::VectorXd& theta, double v,
                 const Bandwidths& bw) {
  return LocalObjective(data, v, bw.effective_h(), bw.h_v).value(theta);
}

Eigen::VectorXd gradient(const Dataset& data, const Eigen::VectorXd& theta, double v,
                         const Bandwidths& bw) {
  Eigen::VectorXd grad;
  LocalObjective(data, v, bw.effective_h(), bw.h_v).value_and_gradient(theta, grad);
  return grad;
}

Eigen::MatrixXd hessian(const Dataset& data, const Eigen::VectorXd& theta, double v,
                        const Bandwidths& bw) {
  return LocalObjective(data, v, bw.effective_h(), bw.h_v).hessian(theta);
}

}  // namespace ikwsms
