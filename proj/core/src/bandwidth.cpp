#include "ikwsms/bandwidth.hpp"

#include <algorithm>
#include <cmath>

#include "ikwsms/errors.hpp"
#include "ikwsms/parallel.hpp"

namespace ikwsms {

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) throw DegenerateDataError("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double interquartile_range(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return sample_quantile(values, 0.75) - sample_quantile(values, 0.25);
}

double pilot_index_bandwidth(std::size_t n, int order) {
  return std::pow(static_cast<double>(n), -1.0 / (2.0 * order + 1.0));
}

double pilot_v_bandwidth(std::size_t n) {
  return std::pow(static_cast<double>(n), -kVBandwidthExponent);
}

BandwidthSelection select_bandwidths(const Dataset& data, const std::vector<double>& v_grid,
                                     const ThetaDomain& domain, const SolverOptions& options,
                                     std::uint64_t seed, int threads) {
  if (v_grid.empty()) throw UsageError("bandwidth selection needs a nonempty grid");
  const std::size_t n = data.size();
  constexpr int kOrder = 4;

  BandwidthSelection sel;
  sel.pilot_h = pilot_index_bandwidth(n, kOrder);
  sel.pilot_h_v = pilot_v_bandwidth(n);

  sel.iqr_v = interquartile_range(std::vector<double>(data.v.data(), data.v.data() + n));
  if (!(sel.iqr_v > 0.0)) throw DegenerateDataError("interquartile range of V is zero");

  Bandwidths pilot;
  pilot.h = sel.pilot_h;
  pilot.h_v = sel.pilot_h_v;
  pilot.order = kOrder;

  sel.pilot_fits.resize(v_grid.size());
  parallel_for(v_grid.size(), threads, [&](std::size_t k) {
    sel.pilot_fits[k] = solve_first_stage(data, v_grid[k], pilot, domain, options, seed);
  });

  std::vector<double> pooled;
  pooled.reserve(n * v_grid.size());
  sel.iqr_index_nodes.reserve(v_grid.size());
  for (const auto& fit : sel.pilot_fits) {
    Eigen::VectorXd index = data.x1.array() + fit.theta_hat(0);
    if (data.x_tilde.cols() > 0) index += data.x_tilde * fit.theta_hat.tail(data.dim() - 1);
    std::vector<double> node(index.data(), index.data() + n);
    pooled.insert(pooled.end(), node.begin(), node.end());
    sel.iqr_index_nodes.push_back(interquartile_range(std::move(node)));
  }
  sel.iqr_index = interquartile_range(std::move(pooled));
  if (!(sel.iqr_index > 0.0)) throw DegenerateDataError("interquartile range of the index is zero");

  const double rate_index = pilot_index_bandwidth(n, kOrder);
  const double rate_v = pilot_v_bandwidth(n);
  sel.bandwidths.h = kIndexBandwidthFactor * sel.iqr_index * rate_index;
  sel.bandwidths.h_v = kVBandwidthFactor * sel.iqr_v * rate_v;
  sel.bandwidths.order = kOrder;
  for (double r : sel.iqr_index_nodes) {
    sel.bandwidths.h_nodes.push_back(kIndexBandwidthFactor * std::max(r, 1e-12) * rate_index);
  }
  return sel;
}

}  // namespace ikwsms
