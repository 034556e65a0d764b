#pragma once

#include <cstdint>
#include <vector>

#include "ikwsms/dataset.hpp"
#include "ikwsms/first_stage.hpp"
#include "ikwsms/objective.hpp"

namespace ikwsms {

struct BandwidthSelection {
  Bandwidths bandwidths;
  double pilot_h = 0.0;
  double pilot_h_v = 0.0;
  double iqr_index = 0.0;  // pooled over all grid nodes
  double iqr_v = 0.0;
  std::vector<double> iqr_index_nodes;
  std::vector<FirstStageSolution> pilot_fits;
};

// Type-7 (linear interpolation) sample quantile.
double sample_quantile(std::vector<double> values, double p);
double interquartile_range(std::vector<double> values);

inline constexpr double kIndexBandwidthFactor = 1.22;
inline constexpr double kVBandwidthFactor = 0.8;
inline constexpr double kVBandwidthExponent = 3.0 / 25.0;

double pilot_index_bandwidth(std::size_t n, int order = 4);
double pilot_v_bandwidth(std::size_t n);

/// Rule-of-thumb bandwidths from pilot first-stage fits at every grid node:
/// h = 1.22 R_L n^{-1/(2r+1)}, h_v = 0.8 R_V n^{-3/25}, with R_L the IQR of the
/// pooled fitted index values and R_V the IQR of V. Per-node h values are
/// also filled in (Bandwidths::h_nodes is only consulted in per-node mode).
BandwidthSelection select_bandwidths(const Dataset& data, const std::vector<double>& v_grid,
                                     const ThetaDomain& domain, const SolverOptions& options,
                                     std::uint64_t seed, int threads = 1);

}  // namespace ikwsms
