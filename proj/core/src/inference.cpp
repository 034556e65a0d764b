#include "ikwsms/inference.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <string>

#include "ikwsms/errors.hpp"
#include "ikwsms/parallel.hpp"

namespace ikwsms {

Restriction Restriction::component(int index, double value) {
  Restriction r;
  r.kind_ = Kind::component;
  r.index_ = index;
  r.value_ = value;
  r.rows_ = 1;
  r.name_ = "beta[" + std::to_string(index) + "] = " + std::to_string(value);
  return r;
}

Restriction Restriction::linear(Eigen::MatrixXd rmat, Eigen::VectorXd c) {
  if (rmat.rows() != c.size()) throw UsageError("linear restriction: R and c disagree in rows");
  Restriction r;
  r.kind_ = Kind::linear;
  r.rows_ = static_cast<int>(rmat.rows());
  r.r_ = std::move(rmat);
  r.c_ = std::move(c);
  r.name_ = "linear restriction (" + std::to_string(r.rows_) + " rows)";
  return r;
}

Restriction Restriction::general(Function f, Jacobian jacobian, int rows, std::string name) {
  if (!f || !jacobian || rows < 1) throw UsageError("general restriction needs F, F' and rows");
  Restriction r;
  r.kind_ = Kind::general;
  r.f_ = std::move(f);
  r.jac_ = std::move(jacobian);
  r.rows_ = rows;
  r.name_ = name.empty() ? "general restriction" : std::move(name);
  return r;
}

int Restriction::rows() const { return rows_; }

Eigen::VectorXd Restriction::evaluate(const Eigen::VectorXd& beta) const {
  switch (kind_) {
    case Kind::component:
      return Eigen::VectorXd::Constant(1, beta(index_) - value_);
    case Kind::linear:
      return r_ * beta - c_;
    case Kind::general:
      return f_(beta);
  }
  return {};
}

Eigen::MatrixXd Restriction::jacobian(const Eigen::VectorXd& beta) const {
  switch (kind_) {
    case Kind::component: {
      Eigen::MatrixXd j = Eigen::MatrixXd::Zero(1, beta.size());
      j(0, index_) = 1.0;
      return j;
    }
    case Kind::linear:
      return r_;
    case Kind::general:
      return jac_(beta);
  }
  return {};
}

void Restriction::validate(int coefficients) const {
  if (kind_ == Kind::component && (index_ < 0 || index_ >= coefficients)) {
    throw UsageError("restriction refers to coefficient " + std::to_string(index_) +
                     " but the model has " + std::to_string(coefficients));
  }
  if (kind_ == Kind::linear && r_.cols() != coefficients) {
    throw UsageError("linear restriction has " + std::to_string(r_.cols()) +
                     " columns, expected " + std::to_string(coefficients));
  }
}

namespace {

double scale_factor(const EstimationResult& result) {
  return static_cast<double>(result.n) * result.bandwidths.effective_h();
}

double studentized(const EstimationResult& result, int index, double centre) {
  if (index < 0 || index >= result.beta_hat.size()) {
    throw UsageError("coefficient index out of range");
  }
  const double var = result.omega_hat(index, index);
  if (!(var > 0.0)) {
    throw VarianceDegeneracyError("variance estimate for coefficient " + std::to_string(index) +
                                  " is not positive");
  }
  return std::sqrt(scale_factor(result)) * (result.beta_hat(index) - centre) / std::sqrt(var);
}

double quadratic_form(const EstimationResult& at, const Eigen::VectorXd& f,
                      const Restriction& restriction) {
  const Eigen::MatrixXd jac = restriction.jacobian(at.beta_hat);
  const Eigen::MatrixXd middle = jac * at.omega_hat * jac.transpose();
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(middle);
  if (!lu.isInvertible()) {
    throw RankDeficientError("restriction '" + restriction.name() +
                             "' is rank-deficient: F' Omega F'^T is singular");
  }
  return scale_factor(at) * f.dot(lu.solve(f));
}

}  // namespace

double t_statistic(const EstimationResult& result, int index, double beta0) {
  return studentized(result, index, beta0);
}

double wald_statistic(const EstimationResult& result, const Restriction& restriction) {
  restriction.validate(static_cast<int>(result.beta_hat.size()));
  return quadratic_form(result, restriction.evaluate(result.beta_hat), restriction);
}

double bootstrap_t(const EstimationResult& original, const EstimationResult& replicate,
                   int index) {
  return studentized(replicate, index, original.beta_hat(index));
}

double bootstrap_wald(const EstimationResult& original, const EstimationResult& replicate,
                      const Restriction& restriction) {
  const Eigen::VectorXd diff =
      restriction.evaluate(replicate.beta_hat) - restriction.evaluate(original.beta_hat);
  return quadratic_form(replicate, diff, restriction);
}

double asymptotic_critical_value(TestKind kind, double alpha, int q) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  if (kind == TestKind::t) {
    return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
  }
  if (q < 1) throw UsageError("Wald critical value needs q >= 1");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>(q), 1.0 - alpha);
}

Dataset bootstrap_resample(const Dataset& data, RandomStream& stream) {
  const std::size_t n = data.size();
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = static_cast<std::size_t>(stream.below(n));
  return data.subset(rows);
}

Dataset bootstrap_resample(const Dataset& data, std::uint64_t seed) {
  RandomStream stream(seed, 0, StreamTag::bootstrap);
  return bootstrap_resample(data, stream);
}

double bootstrap_critical_value(std::vector<double> stats, double alpha) {
  if (stats.empty()) throw UsageError("bootstrap critical value needs statistics");
  if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("alpha must lie in (0, 1)");
  for (double s : stats) {
    if (!std::isfinite(s)) throw UsageError("bootstrap statistics must be finite");
  }
  const double b = static_cast<double>(stats.size());
  // Tolerance keeps products like 0.95 * 200 from rounding up a rank.
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * b - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, stats.size());
  std::nth_element(stats.begin(), stats.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   stats.end());
  return stats[rank - 1];
}

namespace {

// Replicate estimates on resamples drawn from (seed, b); failures stay empty.
std::vector<std::optional<EstimationResult>> bootstrap_estimates(const Dataset& data,
                                                                 const BootstrapConfig& config,
                                                                 const Bandwidths& bw,
                                                                 int replicates,
                                                                 std::uint64_t seed) {
  std::vector<std::optional<EstimationResult>> out(static_cast<std::size_t>(replicates));
  EstimatorConfig inner = config.estimator;
  const int threads = inner.threads;
  inner.threads = 1;
  parallel_for(out.size(), threads, [&](std::size_t b) {
    RandomStream stream(seed, b, StreamTag::bootstrap);
    const Dataset resample = bootstrap_resample(data, stream);
    try {
      out[b] = estimate(resample, inner, bw);
    } catch (const Error&) {
      out[b].reset();
    }
  });
  return out;
}

template <typename Statistic>
TestOutcome run_bootstrap(const Dataset& data, const BootstrapConfig& config, TestKind kind,
                          int q, int replicates, double alpha, std::uint64_t seed,
                          Statistic&& statistic) {
  if (replicates < 1) throw UsageError("bootstrap needs at least one replicate");
  Bandwidths bw;
  if (config.bandwidths) {
    bw = *config.bandwidths;
  } else {
    bw = select_bandwidths(data, config.estimator).bandwidths;
  }
  bw.multiplier = config.multiplier;
  const EstimationResult original = estimate(data, config.estimator, bw);

  TestOutcome outcome;
  outcome.kind = kind;
  outcome.alpha = alpha;
  outcome.statistic = statistic(original, nullptr);
  outcome.acv = asymptotic_critical_value(kind, alpha, q);

  const auto replicas = bootstrap_estimates(data, config, bw, replicates, seed);
  for (const auto& rep : replicas) {
    if (!rep) {
      ++outcome.failures;
      continue;
    }
    try {
      outcome.bootstrap_stats.push_back(statistic(original, &*rep));
    } catch (const Error&) {
      ++outcome.failures;
    }
  }
  if (outcome.failures > config.max_failure_fraction * replicates ||
      outcome.bootstrap_stats.empty()) {
    throw ReplicationFailureError(std::to_string(outcome.failures) + " of " +
                                  std::to_string(replicates) + " bootstrap replicates failed");
  }
  outcome.n_bootstrap = static_cast<int>(outcome.bootstrap_stats.size());
  outcome.bcv = bootstrap_critical_value(outcome.bootstrap_stats, alpha);
  return outcome;
}

}  // namespace

TestOutcome bootstrap_t_test(const Dataset& data, const BootstrapConfig& config, int index,
                             double beta0, int replicates, double alpha, std::uint64_t seed) {
  TestOutcome outcome = run_bootstrap(
      data, config, TestKind::t, 1, replicates, alpha, seed,
      [&](const EstimationResult& original, const EstimationResult* rep) {
        return rep ? std::abs(bootstrap_t(original, *rep, index))
                   : t_statistic(original, index, beta0);
      });
  outcome.reject_acv = std::abs(outcome.statistic) > outcome.acv;
  outcome.reject_bcv = std::abs(outcome.statistic) > outcome.bcv;
  return outcome;
}

TestOutcome bootstrap_wald_test(const Dataset& data, const BootstrapConfig& config,
                                const Restriction& restriction, int replicates, double alpha,
                                std::uint64_t seed) {
  restriction.validate(data.dim() - 1);
  TestOutcome outcome = run_bootstrap(
      data, config, TestKind::wald, restriction.rows(), replicates, alpha, seed,
      [&](const EstimationResult& original, const EstimationResult* rep) {
        return rep ? bootstrap_wald(original, *rep, restriction)
                   : wald_statistic(original, restriction);
      });
  outcome.reject_acv = outcome.statistic > outcome.acv;
  outcome.reject_bcv = outcome.statistic > outcome.bcv;
  return outcome;
}

}  // namespace ikwsms
