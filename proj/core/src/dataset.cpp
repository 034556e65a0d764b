#include "ikwsms/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ikwsms/errors.hpp"

namespace ikwsms {

Eigen::VectorXd Dataset::w_row(Eigen::Index i) const {
  Eigen::VectorXd w(dim());
  w(0) = 1.0;
  w.tail(dim() - 1) = x_tilde.row(i).transpose();
  return w;
}

Dataset Dataset::subset(const std::vector<std::size_t>& rows) const {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Dataset out;
  out.y.resize(m);
  out.x1.resize(m);
  out.v.resize(m);
  out.x_tilde.resize(m, x_tilde.cols());
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto i = static_cast<Eigen::Index>(rows[static_cast<std::size_t>(k)]);
    out.y(k) = y(i);
    out.x1(k) = x1(i);
    out.v(k) = v(i);
    out.x_tilde.row(k) = x_tilde.row(i);
  }
  return out;
}

void Dataset::validate() const {
  const auto n = y.size();
  if (x1.size() != n || v.size() != n || x_tilde.rows() != n) {
    throw InvalidDataError("dataset columns have unequal lengths");
  }
  if (n < dim() + 2) {
    throw InvalidDataError("dataset needs at least d + 2 = " + std::to_string(dim() + 2) +
                           " rows, got " + std::to_string(n));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y(i) != 0 && y(i) != 1) {
      throw InvalidDataError("y must be 0 or 1 (row " + std::to_string(i + 1) + ")");
    }
  }
  if (!x1.allFinite() || !v.allFinite() || !x_tilde.allFinite()) {
    throw InvalidDataError("dataset contains non-finite entries");
  }
  std::vector<double> sorted(x1.data(), x1.data() + n);
  std::sort(sorted.begin(), sorted.end());
  const auto distinct = std::unique(sorted.begin(), sorted.end()) - sorted.begin();
  if (distinct < dim() + 1) {
    throw InvalidDataError("x1 must take at least d + 1 distinct values");
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.y.size() == b.y.size() && a.x_tilde.cols() == b.x_tilde.cols() && a.y == b.y &&
         a.x1 == b.x1 && a.v == b.v && a.x_tilde == b.x_tilde;
}

}  // namespace ikwsms
