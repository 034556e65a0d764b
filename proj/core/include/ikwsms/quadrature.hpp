#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ikwsms::quadrature {

/// Composite Simpson rule on [a, b] with `nodes` equally spaced points (odd, >= 3).
double simpson(const std::function<double(double)>& f, double a, double b,
               std::size_t nodes);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Uniform composite trapezoid nodes and weights on [a, b].
Rule trapezoid(double a, double b, std::size_t nodes);

}  // namespace ikwsms::quadrature
