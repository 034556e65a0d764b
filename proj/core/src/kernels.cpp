#include "ikwsms/kernels.hpp"

#include <cmath>
#include <string>

#include "ikwsms/errors.hpp"
#include "ikwsms/quadrature.hpp"
#include "kernel_detail.hpp"

namespace ikwsms::kernels {
namespace {

void require_finite(double t, const char* fn) {
  if (!std::isfinite(t)) {
    throw DomainError(std::string(fn) + ": non-finite argument");
  }
}

}  // namespace

double smooth_g(double t) {
  require_finite(t, "smooth_g");
  return detail::g(t);
}

double smooth_g_prime(double t) {
  require_finite(t, "smooth_g_prime");
  return detail::g_prime(t);
}

double smooth_g_second(double t) {
  require_finite(t, "smooth_g_second");
  return detail::g_second(t);
}

double kernel_k(double t) {
  require_finite(t, "kernel_k");
  return detail::k(t);
}

bool MomentReport::all_pass() const {
  for (const auto& m : moments) {
    if (!m.pass) return false;
  }
  return true;
}

MomentReport verify_moments(MomentKernel which, int max_order, double tol) {
  constexpr std::size_t kNodes = 4001;
  MomentReport report;
  report.which = which;
  report.tol = tol;

  const bool smoothing = which == MomentKernel::smoothing_derivative;
  const double lo = smoothing ? -1.0 : -12.0;
  const double hi = -lo;
  const int order = smoothing ? kSmoothingOrder : kFirstStageOrder;
  const auto kernel = smoothing ? smooth_g_prime : kernel_k;

  for (int j = 0; j <= max_order; ++j) {
    MomentCheck check;
    check.order = j;
    check.value = quadrature::simpson(
        [&](double t) { return std::pow(t, j) * kernel(t); }, lo, hi, kNodes);
    check.must_vanish = j < order;
    check.expected = j == 0 ? 1.0 : 0.0;
    check.pass = check.must_vanish ? std::abs(check.value - check.expected) <= tol
                                   : std::abs(check.value) > tol;
    report.moments.push_back(check);
  }
  return report;
}

}  // namespace ikwsms::kernels
