#include "ikwsms/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ikwsms/errors.hpp"
#include "ikwsms/parallel.hpp"
#include "ikwsms/quadrature.hpp"
#include "kernel_detail.hpp"

namespace ikwsms {

WeightFunction WeightFunction::constant(double lower, double upper, double height) {
  WeightFunction w;
  w.lower_ = lower;
  w.upper_ = upper;
  w.height_ = height;
  w.validate();
  return w;
}

WeightFunction WeightFunction::standard() { return constant(0.1, 0.9, 1.25); }

WeightFunction WeightFunction::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.size() < 2) throw UsageError("tabulated weight needs at least two points");
  std::sort(points.begin(), points.end());
  WeightFunction w;
  w.table_ = std::move(points);
  w.lower_ = w.table_.front().first;
  w.upper_ = w.table_.back().first;
  w.height_ = 0.0;
  w.validate();
  return w;
}

double WeightFunction::operator()(double v) const {
  if (v < lower_ || v > upper_) return 0.0;
  if (table_.empty()) return height_;
  auto it = std::upper_bound(table_.begin(), table_.end(), v,
                             [](double x, const auto& p) { return x < p.first; });
  if (it == table_.end()) return table_.back().second;
  if (it == table_.begin()) return table_.front().second;
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return x1 == x0 ? y1 : y0 + (y1 - y0) * (v - x0) / (x1 - x0);
}

double WeightFunction::integral() const {
  if (table_.empty()) return height_ * (upper_ - lower_);
  // Exact for the piecewise-linear interpolant.
  double total = 0.0;
  for (std::size_t k = 1; k < table_.size(); ++k) {
    total += 0.5 * (table_[k].second + table_[k - 1].second) *
             (table_[k].first - table_[k - 1].first);
  }
  return total;
}

void WeightFunction::validate() const {
  if (!(std::isfinite(lower_) && std::isfinite(upper_) && lower_ < upper_)) {
    throw UsageError("weight support needs finite lower < upper");
  }
  if (table_.empty()) {
    if (!(height_ >= 0.0)) throw UsageError("weight height must be nonnegative");
  } else {
    for (const auto& [x, tau] : table_) {
      if (!std::isfinite(x) || !(tau >= 0.0)) {
        throw UsageError("tabulated weight values must be finite and nonnegative");
      }
    }
  }
  const double mass = integral();
  if (std::abs(mass - 1.0) > 1e-8) {
    throw UsageError("weight function must integrate to 1, got " + std::to_string(mass));
  }
}

ThetaDomain EstimatorConfig::domain_for(int dim) const {
  if (domain) {
    domain->validate(dim);
    return *domain;
  }
  return ThetaDomain::cube(dim, kDefaultThetaHalfWidth);
}

std::vector<double> EstimatorConfig::grid() const {
  if (grid_size < 2) throw UsageError("grid_size must be at least 2");
  return quadrature::trapezoid(weight.lower(), weight.upper(), std::size_t(grid_size)).nodes;
}

Eigen::VectorXd interpolate_theta(const std::vector<FirstStageSolution>& grid, double v) {
  if (grid.empty()) throw UsageError("interpolation needs a nonempty grid");
  if (v <= grid.front().v) return grid.front().theta_hat;
  if (v >= grid.back().v) return grid.back().theta_hat;
  auto it = std::upper_bound(grid.begin(), grid.end(), v,
                             [](double x, const FirstStageSolution& s) { return x < s.v; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double frac = (v - lo.v) / (hi.v - lo.v);
  return (1.0 - frac) * lo.theta_hat + frac * hi.theta_hat;
}

VarianceEstimate variance_estimate(const Dataset& data,
                                   const std::vector<FirstStageSolution>& grid,
                                   const WeightFunction& weight, const Bandwidths& bw,
                                   const VarianceOptions& options) {
  if (grid.empty()) throw UsageError("variance estimate needs first-stage fits");
  const int d = data.dim();
  const auto n = data.y.size();
  const double h = bw.effective_h();
  const ThetaDomain domain =
      options.domain ? *options.domain : ThetaDomain::cube(d, kDefaultThetaHalfWidth);

  enum class Status { skipped, contributed, dropped };
  std::vector<Status> status(static_cast<std::size_t>(n), Status::skipped);
  std::vector<Eigen::VectorXd> score(static_cast<std::size_t>(n));

  parallel_for(static_cast<std::size_t>(n), options.threads, [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const double tau = weight(data.v(j));
    if (tau == 0.0) return;

    Eigen::VectorXd theta;
    switch (options.theta_mode) {
      case ThetaAtObservation::interpolate:
        theta = interpolate_theta(grid, data.v(j));
        break;
      case ThetaAtObservation::refine:
        theta = refine_first_stage(data, data.v(j), bw, domain, options.solver,
                                   interpolate_theta(grid, data.v(j)))
                    .theta_hat;
        break;
      case ThetaAtObservation::resolve:
        theta = solve_first_stage(data, data.v(j), bw, domain, options.solver, options.seed)
                    .theta_hat;
        break;
    }
    const Eigen::VectorXd w = data.w_row(j);
    const double slope = kernels::detail::g_prime((data.x1(j) + w.dot(theta)) / h);
    if (slope == 0.0) return;

    const Eigen::MatrixXd neg_hess = -LocalObjective(data, data.v(j), h, bw.h_v).hessian(theta);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(neg_hess,
                                                Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smallest = sv(sv.size() - 1);
    if (!(smallest > 0.0) || sv(0) / smallest > kSingularConditionNumber) {
      status[jj] = Status::dropped;
      return;
    }
    const Eigen::MatrixXd inverse =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    // Q(V_j) W_j G'(.) with Q = tau e_d [-H]^{-1}
    score[jj] = tau * slope * (inverse.bottomRows(d - 1) * w);
    status[jj] = Status::contributed;
  });

  VarianceEstimate out;
  out.omega = Eigen::MatrixXd::Zero(d - 1, d - 1);
  for (std::size_t j = 0; j < status.size(); ++j) {
    if (status[j] == Status::skipped) continue;
    ++out.contributing;
    if (status[j] == Status::dropped) {
      ++out.dropped;
      continue;
    }
    out.omega.noalias() += score[j] * score[j].transpose();
  }
  if (out.dropped > kMaxDroppedVarianceFraction * out.contributing) {
    throw VarianceDegeneracyError("variance estimate dropped " + std::to_string(out.dropped) +
                                  " of " + std::to_string(out.contributing) +
                                  " contributions for ill-conditioned Hessians");
  }
  out.omega /= static_cast<double>(n) * h;
  out.omega = 0.5 * (out.omega + out.omega.transpose()).eval();
  return out;
}

EstimationResult estimate(const Dataset& data, const EstimatorConfig& config,
                          const Bandwidths& bw) {
  data.validate();
  bw.validate();
  config.weight.validate();
  const int d = data.dim();
  const ThetaDomain domain = config.domain_for(d);

  if (config.grid_size < 2) throw UsageError("grid_size must be at least 2");
  const auto rule = quadrature::trapezoid(config.weight.lower(), config.weight.upper(),
                                          std::size_t(config.grid_size));
  const std::size_t nodes = rule.nodes.size();
  if (config.bandwidth_mode == BandwidthMode::per_node && bw.h_nodes.size() != nodes) {
    throw UsageError("per-node bandwidth mode needs one h per grid node");
  }

  std::vector<double> weights(nodes);
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < nodes; ++k) {
    weights[k] = config.weight(rule.nodes[k]) * rule.weights[k];
    weight_sum += weights[k];
  }
  if (!(weight_sum > 0.0)) throw UsageError("weight function vanishes on the grid");

  EstimationResult result;
  result.n = data.size();
  result.bandwidths = bw;
  result.grid.resize(nodes);
  parallel_for(nodes, config.threads, [&](std::size_t k) {
    Bandwidths node_bw = bw;
    if (config.bandwidth_mode == BandwidthMode::per_node) node_bw.h = bw.h_nodes[k];
    result.grid[k] = solve_first_stage(data, rule.nodes[k], node_bw, domain, config.solver,
                                       config.seed);
  });

  result.beta_hat = Eigen::VectorXd::Zero(d - 1);
  for (std::size_t k = 0; k < nodes; ++k) {
    result.beta_hat += (weights[k] / weight_sum) * result.grid[k].beta();
    if (!result.grid[k].converged) ++result.nonconverged_nodes;
  }

  VarianceOptions vopt;
  vopt.theta_mode = config.theta_mode;
  vopt.domain = domain;
  vopt.solver = config.solver;
  vopt.seed = config.seed;
  vopt.threads = config.threads;
  const VarianceEstimate var = variance_estimate(data, result.grid, config.weight, bw, vopt);
  result.omega_hat = var.omega;
  result.variance_contributing = var.contributing;
  result.variance_dropped = var.dropped;
  return result;
}

BandwidthSelection select_bandwidths(const Dataset& data, const EstimatorConfig& config) {
  data.validate();
  return select_bandwidths(data, config.grid(), config.domain_for(data.dim()), config.solver,
                           config.seed, config.threads);
}

EstimationResult estimate(const Dataset& data, const EstimatorConfig& config, double multiplier) {
  Bandwidths bw = select_bandwidths(data, config).bandwidths;
  bw.multiplier = multiplier;
  return estimate(data, config, bw);
}

}  // namespace ikwsms
