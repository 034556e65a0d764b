#include "ikwsms/dgp.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "ikwsms/errors.hpp"

namespace ikwsms {

// Pre-simulated with tools/he_constant: 10^7 draws of the rho = 0.2 triplet,
// seed 20240607, stream (seed, 0, data). E[A^2] = 15.37807 (se 7.7e-3).
const double kHeteroscedasticScale = 0.25500519137221989;

namespace {

constexpr std::array<std::string_view, 5> kDesignNames{"UN", "NR", "T3", "LG", "HE"};

// Logistic scale with unit variance: s^2 pi^2 / 3 = 1.
const double kUnitLogisticScale = std::sqrt(3.0) / std::numbers::pi;

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace

std::string_view design_name(Design design) {
  return kDesignNames[static_cast<std::size_t>(design)];
}

Design parse_design(std::string_view name) {
  for (std::size_t i = 0; i < kDesignNames.size(); ++i) {
    if (kDesignNames[i] == name) return static_cast<Design>(i);
  }
  throw UsageError("unknown design '" + std::string(name) + "'; valid designs: UN, NR, T3, LG, HE");
}

void DgpSpec::validate() const {
  if (n < 50) throw UsageError("simulated samples need n >= 50");
  // Equicorrelation is positive definite iff -1/2 < rho < 1 in three dimensions.
  if (!(std::abs(rho) < 1.0) || !(rho > -0.5)) {
    throw UsageError("rho = " + std::to_string(rho) + " gives a non-positive-definite correlation");
  }
  if (!std::isfinite(beta_true)) throw UsageError("beta_true must be finite");
}

Eigen::MatrixXd draw_triplet(std::size_t n, double rho, RandomStream& stream) {
  Eigen::Matrix3d corr = Eigen::Matrix3d::Constant(rho);
  corr.diagonal().setOnes();
  const Eigen::LLT<Eigen::Matrix3d> llt(corr);
  if (llt.info() != Eigen::Success || !(std::abs(rho) < 1.0)) {
    throw UsageError("correlation matrix is not positive definite (rho = " +
                     std::to_string(rho) + ")");
  }
  const Eigen::Matrix3d lower = llt.matrixL();

  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), 3);
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    Eigen::Vector3d z;
    for (int k = 0; k < 3; ++k) z(k) = stream.normal();
    out.row(i) = (lower * z).transpose();
  }
  return out;
}

Eigen::VectorXd draw_error(Design design, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                           const Eigen::VectorXd& v, RandomStream& stream) {
  const Eigen::Index n = x1.size();
  Eigen::VectorXd eps(n);
  const double sqrt3 = std::sqrt(3.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    switch (design) {
      case Design::UN:
        eps(i) = stream.uniform(-sqrt3, sqrt3);
        break;
      case Design::NR:
        eps(i) = stream.normal();
        break;
      case Design::T3:
        eps(i) = stream.student_t(3) / sqrt3;
        break;
      case Design::LG:
        eps(i) = stream.logistic(kUnitLogisticScale);
        break;
      case Design::HE: {
        const double spread = 1.0 + x1(i) * x1(i) + x2(i) * x2(i) + v(i) * v(i);
        eps(i) = kHeteroscedasticScale * spread * stream.logistic(kUnitLogisticScale);
        break;
      }
    }
  }
  return eps;
}

Dataset generate_dataset(const DgpSpec& spec, RandomStream& stream) {
  spec.validate();
  const Eigen::MatrixXd triplet = draw_triplet(spec.n, spec.rho, stream);
  const auto n = triplet.rows();

  Dataset data;
  data.x1 = triplet.col(0);
  data.x_tilde = triplet.col(1);
  data.v.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) data.v(i) = normal_cdf(triplet(i, 2));

  const Eigen::VectorXd x2 = triplet.col(1);
  const Eigen::VectorXd eps = draw_error(spec.design, data.x1, x2, data.v, stream);
  data.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double latent =
        data.x1(i) + spec.beta_true * x2(i) + std::cos(2.0 * std::numbers::pi * data.v(i)) + eps(i);
    data.y(i) = latent >= 0.0 ? 1 : 0;
  }
  return data;
}

Dataset generate_dataset(const DgpSpec& spec) {
  RandomStream stream(spec.seed, 0, StreamTag::data);
  return generate_dataset(spec, stream);
}

}  // namespace ikwsms
