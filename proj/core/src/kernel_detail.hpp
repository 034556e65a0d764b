#pragma once

#include <cmath>

// Unchecked kernel evaluations for inner loops; callers guarantee finite input.
namespace ikwsms::kernels::detail {

inline constexpr double kGScale = 105.0 / 64.0;
inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343818684758586311649;

inline double g(double t) {
  if (t < -1.0) return 0.0;
  if (t > 1.0) return 1.0;
  const double t2 = t * t;
  return 0.5 + kGScale * t * (1.0 + t2 * (-5.0 / 3.0 + t2 * (7.0 / 5.0 - t2 * (3.0 / 7.0))));
}

inline double g_prime(double t) {
  if (t < -1.0 || t > 1.0) return 0.0;
  const double t2 = t * t;
  return kGScale * (1.0 + t2 * (-5.0 + t2 * (7.0 - 3.0 * t2)));
}

inline double g_second(double t) {
  if (t < -1.0 || t > 1.0) return 0.0;
  const double t2 = t * t;
  return kGScale * t * (-10.0 + t2 * (28.0 - 18.0 * t2));
}

inline double k(double t) {
  const double t2 = t * t;
  const double poly = 105.0 + t2 * (-105.0 + t2 * (21.0 - t2));
  return poly / 48.0 * kInvSqrt2Pi * std::exp(-0.5 * t2);
}

}  // namespace ikwsms::kernels::detail
