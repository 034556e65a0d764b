#pragma once

#include <vector>

namespace ikwsms::kernels {

// Order of the kernel G' (G is its integral).
inline constexpr int kSmoothingOrder = 4;
// Order of the first-stage kernel K.
inline constexpr int kFirstStageOrder = 8;

/// Smoothed indicator: 0.5 + (105/64)(t - 5t^3/3 + 7t^5/5 - 3t^7/7) on [-1, 1],
/// 0 below and 1 above. Throws DomainError for non-finite input.
double smooth_g(double t);

/// G'(t), a fourth-order kernel supported on [-1, 1].
double smooth_g_prime(double t);

/// G''(t).
double smooth_g_second(double t);

/// First-stage kernel K(t) = (105 - 105t^2 + 21t^4 - t^6) phi(t) / 48, order 8.
double kernel_k(double t);

enum class MomentKernel { smoothing_derivative, first_stage };

struct MomentCheck {
  int order = 0;
  double value = 0.0;
  // Target value: 1 for order 0, 0 below the kernel order. Orders at or above the
  // kernel order only need to be nonzero.
  double expected = 0.0;
  bool must_vanish = false;
  bool pass = false;
};

struct MomentReport {
  MomentKernel which = MomentKernel::smoothing_derivative;
  double tol = 0.0;
  std::vector<MomentCheck> moments;

  bool all_pass() const;
};

/// Integrates t^j * kernel(t) for j = 0..max_order with composite Simpson
/// (4001 nodes on [-1, 1] for G', [-12, 12] for K).
MomentReport verify_moments(MomentKernel which, int max_order, double tol);

}  // namespace ikwsms::kernels
