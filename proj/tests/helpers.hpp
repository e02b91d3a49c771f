#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "acedoe/design.hpp"

namespace testutil {

inline acedoe::Design make_design(std::initializer_list<std::initializer_list<double>> rows,
                                  std::vector<acedoe::Interval> bounds) {
  acedoe::PointMatrix pts(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(bounds.size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) pts(i, j++) = v;
    ++i;
  }
  return acedoe::Design(std::move(pts), std::move(bounds));
}

inline std::vector<acedoe::Interval> box(std::size_t q, double lo, double hi) {
  return std::vector<acedoe::Interval>(q, acedoe::Interval{lo, hi});
}

struct Moments {
  double mean;
  double var;
  double se_mean;
  double se_var;
};

/// Sample mean and variance with plug-in standard errors.
inline Moments moments(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double m = 0.0;
  for (double x : v) m += x;
  m /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = (x - m) * (x - m);
    m2 += d;
    m4 += d * d;
  }
  m2 /= n;
  m4 /= n;
  const double var = m2 * n / (n - 1.0);
  return {m, var, std::sqrt(var / n), std::sqrt((m4 - m2 * m2) / n)};
}

}  // namespace testutil
