#include "ikwsms/quadrature.hpp"

#include <stdexcept>

namespace ikwsms::quadrature {

double simpson(const std::function<double(double)>& f, double a, double b, std::size_t nodes) {
  if (nodes < 3 || nodes % 2 == 0) {
    throw std::invalid_argument("simpson: node count must be odd and >= 3");
  }
  const std::size_t intervals = nodes - 1;
  const double step = (b - a) / static_cast<double>(intervals);
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i < intervals; ++i) {
    const double x = a + static_cast<double>(i) * step;
    (i % 2 == 1 ? odd : even) += f(x);
  }
  return step / 3.0 * (f(a) + f(b) + 4.0 * odd + 2.0 * even);
}

Rule trapezoid(double a, double b, std::size_t nodes) {
  if (nodes < 2) {
    throw std::invalid_argument("trapezoid: need at least two nodes");
  }
  Rule rule;
  rule.nodes.resize(nodes);
  rule.weights.assign(nodes, 0.0);
  const double step = (b - a) / static_cast<double>(nodes - 1);
  for (std::size_t i = 0; i < nodes; ++i) {
    rule.nodes[i] = i + 1 == nodes ? b : a + static_cast<double>(i) * step;
    rule.weights[i] = (i == 0 || i + 1 == nodes) ? 0.5 * step : step;
  }
  return rule;
}

}  // namespace ikwsms::quadrature
