#include "ikwsms/first_stage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ikwsms/errors.hpp"
#include "ikwsms/rng.hpp"

namespace ikwsms {

ThetaDomain ThetaDomain::cube(int dim, double half_width) {
  ThetaDomain domain;
  domain.lower = Eigen::VectorXd::Constant(dim, -half_width);
  domain.upper = Eigen::VectorXd::Constant(dim, half_width);
  return domain;
}

bool ThetaDomain::contains(const Eigen::VectorXd& theta) const {
  if (theta.size() != lower.size()) return false;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    if (theta(k) < lower(k) || theta(k) > upper(k)) return false;
  }
  return true;
}

void ThetaDomain::validate(int dim) const {
  if (lower.size() != dim || upper.size() != dim) {
    throw UsageError("theta domain has dimension " + std::to_string(lower.size()) +
                     ", expected " + std::to_string(dim));
  }
  for (int k = 0; k < dim; ++k) {
    if (!(lower(k) < upper(k))) throw UsageError("theta domain needs lower < upper");
    if (lower(k) > 0.0 || upper(k) < 0.0) {
      throw UsageError("theta domain must contain the origin");
    }
  }
}

namespace {

constexpr double kMinKernelMass = 1e-10;
constexpr int kHaltonPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return r;
}

// Affine reparametrization theta <-> phi under which the index in standardized
// regressors equals the original index divided by the scale of x1.
struct Standardization {
  double m1 = 0.0;
  double s1 = 1.0;
  Eigen::VectorXd m;
  Eigen::VectorXd s;

  Eigen::VectorXd to_theta(const Eigen::VectorXd& phi) const {
    Eigen::VectorXd theta(phi.size());
    double shift = -m1 + s1 * phi(0);
    for (Eigen::Index k = 1; k < phi.size(); ++k) {
      theta(k) = phi(k) * s1 / s(k - 1);
      shift -= theta(k) * m(k - 1);
    }
    theta(0) = shift;
    return theta;
  }

  Eigen::VectorXd to_phi(const Eigen::VectorXd& theta) const {
    Eigen::VectorXd phi(theta.size());
    double shift = m1 + theta(0);
    for (Eigen::Index k = 1; k < theta.size(); ++k) {
      phi(k) = theta(k) * s(k - 1) / s1;
      shift += theta(k) * m(k - 1);
    }
    phi(0) = shift / s1;
    return phi;
  }
};

Standardization fit_standardization(const Dataset& data, bool enabled) {
  Standardization st;
  const auto cols = data.x_tilde.cols();
  st.m = Eigen::VectorXd::Zero(cols);
  st.s = Eigen::VectorXd::Ones(cols);
  if (!enabled) return st;

  const double n = static_cast<double>(data.size());
  auto moments = [n](const auto& col, double& mean, double& sd) {
    mean = col.sum() / n;
    sd = std::sqrt((col.array() - mean).square().sum() / n);
  };
  moments(data.x1, st.m1, st.s1);
  if (!(st.s1 > 0.0)) throw DegenerateDataError("x1 has zero variance");
  for (Eigen::Index k = 0; k < cols; ++k) {
    double mean = 0.0;
    double sd = 0.0;
    moments(data.x_tilde.col(k), mean, sd);
    st.m(k) = mean;
    st.s(k) = sd > 0.0 ? sd : 1.0;
  }
  return st;
}

Dataset apply_standardization(const Dataset& data, const Standardization& st) {
  Dataset out;
  out.y = data.y;
  out.v = data.v;
  out.x1 = (data.x1.array() - st.m1) / st.s1;
  out.x_tilde = data.x_tilde;
  for (Eigen::Index k = 0; k < out.x_tilde.cols(); ++k) {
    out.x_tilde.col(k) = (data.x_tilde.col(k).array() - st.m(k)) / st.s(k);
  }
  return out;
}

struct AscentResult {
  Eigen::VectorXd x;
  double f = 0.0;
  bool converged = false;
};

bool lexicographically_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

// Projected BFGS ascent on a box.
AscentResult ascend(const LocalObjective& problem, Eigen::VectorXd x, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, double h, const SolverOptions& options) {
  const int d = problem.dim();
  auto project = [&](Eigen::VectorXd p) { return p.cwiseMax(lo).cwiseMin(hi); };
  x = project(std::move(x));

  Eigen::VectorXd g;
  double f = problem.value_and_gradient(x, g);
  Eigen::MatrixXd inv_hess = Eigen::MatrixXd::Identity(d, d);
  bool scaled = false;
  AscentResult result{x, f, false};

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    Eigen::VectorXd free = Eigen::VectorXd::Ones(d);
    for (int k = 0; k < d; ++k) {
      if ((x(k) <= lo(k) && g(k) < 0.0) || (x(k) >= hi(k) && g(k) > 0.0)) free(k) = 0.0;
    }
    const Eigen::VectorXd pg = g.cwiseProduct(free);
    const double pg_norm = pg.lpNorm<Eigen::Infinity>();
    if (pg_norm * h <= options.gradient_tol * (1.0 + std::abs(f))) {
      result = {x, f, true};
      return result;
    }

    Eigen::VectorXd dir;
    if (scaled) {
      const Eigen::MatrixXd mask = free.asDiagonal();
      dir = mask * inv_hess * mask * pg;
    }
    if (!scaled || dir.dot(pg) <= 0.0) {
      // First step (or reset): move one bandwidth along the steepest ascent.
      dir = pg * (h / pg_norm);
      inv_hess.setIdentity();
      scaled = false;
    }

    double step = 1.0;
    bool moved = false;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new;
    double f_new = f;
    for (int ls = 0; ls < 50; ++ls, step *= 0.5) {
      x_new = project(x + step * dir);
      const Eigen::VectorXd s = x_new - x;
      if (s.lpNorm<Eigen::Infinity>() == 0.0) break;
      f_new = problem.value_and_gradient(x_new, g_new);
      if (f_new >= f + 1e-4 * g.dot(s) && f_new > f) {
        moved = true;
        break;
      }
    }
    if (!moved) {
      result = {x, f, pg_norm * h <= 1e-6 * (1.0 + std::abs(f))};
      return result;
    }

    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g - g_new;  // gradient change of -f
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        inv_hess = Eigen::MatrixXd::Identity(d, d) * (sy / y.squaredNorm());
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::MatrixXd left = Eigen::MatrixXd::Identity(d, d) - rho * s * y.transpose();
      inv_hess = left * inv_hess * left.transpose() + rho * s * s.transpose();
    }

    const double gain = f_new - f;
    x = x_new;
    g = g_new;
    f = f_new;
    result = {x, f, false};
    if (gain <= 1e-15 * (1.0 + std::abs(f)) && s.lpNorm<Eigen::Infinity>() <= 1e-12 * h) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace

FirstStageSolution refine_first_stage(const Dataset& data, double v, const Bandwidths& bw,
                                      const ThetaDomain& domain, const SolverOptions& options,
                                      const Eigen::VectorXd& start) {
  const int d = data.dim();
  domain.validate(d);
  if (start.size() != d) throw UsageError("refinement start has the wrong dimension");

  const Standardization st = fit_standardization(data, options.standardize);
  const Dataset work = options.standardize ? apply_standardization(data, st) : data;
  const double h_work = bw.effective_h() / st.s1;
  const LocalObjective problem(work, v, h_work, bw.h_v);
  if (problem.abs_kernel_mass() <= kMinKernelMass) {
    throw DegenerateWindowError("no observations carry kernel weight at v = " +
                                std::to_string(v) + " (h_v = " + std::to_string(bw.h_v) + ")");
  }

  const AscentResult r =
      ascend(problem, st.to_phi(start), domain.lower, domain.upper, h_work, options);
  FirstStageSolution out;
  out.v = v;
  out.theta_hat = st.to_theta(r.x);
  out.converged = r.converged;
  out.effective_kernel_mass = problem.kernel_mass();
  out.objective_value = objective(data, out.theta_hat, v, bw);
  return out;
}

FirstStageSolution solve_first_stage(const Dataset& data, double v, const Bandwidths& bw,
                                     const ThetaDomain& domain, const SolverOptions& options,
                                     std::uint64_t seed) {
  if (options.starts < 1) throw UsageError("solver needs at least one start");
  const int d = data.dim();
  domain.validate(d);
  bw.validate();

  const Standardization st = fit_standardization(data, options.standardize);
  const Dataset work = options.standardize ? apply_standardization(data, st) : data;
  const double h_work = bw.effective_h() / st.s1;
  const LocalObjective problem(work, v, h_work, bw.h_v);

  if (problem.abs_kernel_mass() <= kMinKernelMass) {
    throw DegenerateWindowError("no observations carry kernel weight at v = " +
                                std::to_string(v) + " (h_v = " + std::to_string(bw.h_v) + ")");
  }

  // Screen low-discrepancy candidates, rotated by the seed.
  RandomStream stream(seed, 0, StreamTag::solver);
  Eigen::VectorXd shift(d);
  for (int k = 0; k < d; ++k) shift(k) = stream.uniform();
  const int dims_with_primes = static_cast<int>(std::size(kHaltonPrimes));

  struct Candidate {
    Eigen::VectorXd x;
    double f;
  };
  std::vector<Candidate> candidates;
  candidates.reserve(static_cast<std::size_t>(std::max(options.screen_points, 0)));
  auto halton_point = [&](int i) {
    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) {
      const int base = kHaltonPrimes[k % dims_with_primes];
      double u = radical_inverse(static_cast<std::uint64_t>(i + 1), base) + shift(k);
      u -= std::floor(u);
      x(k) = domain.lower(k) + u * (domain.upper(k) - domain.lower(k));
    }
    return x;
  };
  for (int i = 0; i < options.screen_points; ++i) {
    Eigen::VectorXd x = halton_point(i);
    const double f = problem.value(x);
    candidates.push_back({std::move(x), f});
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    if (a.f != b.f) return a.f > b.f;
    return lexicographically_less(a.x, b.x);
  });

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(d));
  for (std::size_t i = 0; i < candidates.size() && starts.size() < std::size_t(options.starts); ++i) {
    starts.push_back(candidates[i].x);
  }
  // Without screening, fall back to raw low-discrepancy points.
  for (int i = 0; starts.size() < std::size_t(options.starts); ++i) {
    starts.push_back(halton_point(options.screen_points + i));
  }

  bool have_best = false;
  AscentResult best;
  Eigen::VectorXd best_theta;
  for (const auto& x0 : starts) {
    AscentResult r = ascend(problem, x0, domain.lower, domain.upper, h_work, options);
    const Eigen::VectorXd theta = st.to_theta(r.x);
    const bool better = !have_best || r.f > best.f ||
                        (r.f == best.f && lexicographically_less(theta, best_theta));
    if (better) {
      best = r;
      best_theta = theta;
      have_best = true;
    }
  }

  FirstStageSolution out;
  out.v = v;
  out.theta_hat = best_theta;
  out.converged = best.converged;
  out.effective_kernel_mass = problem.kernel_mass();
  out.objective_value = objective(data, best_theta, v, bw);
  return out;
}

}  // namespace ikwsms
