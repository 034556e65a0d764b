// Pre-simulates the normalizing constant of the heteroscedastic design:
// scale = 1 / sqrt(E[(1 + X1^2 + X2^2 + V^2)^2]), obtained from fixed-seed draws
// of the correlated triplet (the logistic factor has unit variance and is
// independent, so it drops out).
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "ikwsms/dgp.hpp"

int main(int argc, char** argv) {
  const std::size_t draws = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 10'000'000;
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20240607;
  const double rho = 0.2;

  ikwsms::RandomStream stream(seed, 0, ikwsms::StreamTag::data);
  const std::size_t chunk = 1'000'000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t done = 0; done < draws; done += chunk) {
    const std::size_t m = std::min(chunk, draws - done);
    const Eigen::MatrixXd t = ikwsms::draw_triplet(m, rho, stream);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      const double v = 0.5 * std::erfc(-t(i, 2) / std::sqrt(2.0));
      const double a = 1.0 + t(i, 0) * t(i, 0) + t(i, 1) * t(i, 1) + v * v;
      sum += a * a;
      sum_sq += a * a * a * a;
    }
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  const double se = std::sqrt((sum_sq / n - mean * mean) / n);
  std::printf("draws=%zu seed=%llu\nE[A^2]=%.10f (se %.2e)\nscale=%.17g\n", draws,
              static_cast<unsigned long long>(seed), mean, se, 1.0 / std::sqrt(mean));
  return 0;
}
