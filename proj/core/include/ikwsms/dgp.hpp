#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <string_view>

#include "ikwsms/dataset.hpp"
#include "ikwsms/rng.hpp"

namespace ikwsms {

// Error designs; every one is scaled to unit variance.
enum class Design { UN, NR, T3, LG, HE };

std::string_view design_name(Design design);
// Throws UsageError listing the valid names.
Design parse_design(std::string_view name);

// 1 / sqrt(E[(1 + X1^2 + X2^2 + V^2)^2]) under rho = 0.2, from a fixed-seed
// pre-simulation (see tools/he_constant.cpp).
extern const double kHeteroscedasticScale;

struct DgpSpec {
  Design design = Design::NR;
  std::size_t n = 1000;
  double beta_true = 1.0;
  double rho = 0.2;
  std::uint64_t seed = 0;

  void validate() const;
};

/// n draws of (X1, X2, xi), standard normal marginals with all pairwise
/// correlations rho, via the Cholesky factor of the equicorrelation matrix.
Eigen::MatrixXd draw_triplet(std::size_t n, double rho, RandomStream& stream);

Eigen::VectorXd draw_error(Design design, const Eigen::VectorXd& x1, const Eigen::VectorXd& x2,
                           const Eigen::VectorXd& v, RandomStream& stream);

/// Y = 1(X1 + beta X2 + cos(2 pi V) + eps >= 0) with V = Phi(xi).
Dataset generate_dataset(const DgpSpec& spec, RandomStream& stream);
Dataset generate_dataset(const DgpSpec& spec);

}  // namespace ikwsms
