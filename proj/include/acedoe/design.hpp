#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace acedoe {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Interval {
  double lo;
  double hi;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  /// Maps a coded level in [-1, 1] onto the interval.
  double from_coded(double c) const { return lo + 0.5 * (c + 1.0) * (hi - lo); }
  /// Maps a unit-interval value onto the interval.
  double from_unit(double u) const { return lo + u * (hi - lo); }
};

/// An n-run design for q variables together with its box-shaped design space.
/// Every coordinate is kept inside its interval.
class Design {
 public:
  Design(PointMatrix points, std::vector<Interval> bounds);

  std::size_t runs() const { return static_cast<std::size_t>(points_.rows()); }
  std::size_t vars() const { return static_cast<std::size_t>(points_.cols()); }

  const PointMatrix& points() const { return points_; }
  const std::vector<Interval>& bounds() const { return bounds_; }

  double operator()(std::size_t i, std::size_t j) const { return points_(i, j); }
  std::span<const double> row(std::size_t i) const { return {points_.data() + i * vars(), vars()}; }

  /// Copy of this design with coordinate (i, j) replaced. Throws DomainError when x is out of bounds.
  Design with_coordinate(std::size_t i, std::size_t j, double x) const;
  void set_coordinate(std::size_t i, std::size_t j, double x);

 private:
  PointMatrix points_;
  std::vector<Interval> bounds_;
};

bool operator==(const Design& a, const Design& b);

/// Uniform random design over the box.
template <class Urbg>
Design random_design(const std::vector<Interval>& bounds, std::size_t runs, Urbg& rng) {
  PointMatrix pts(static_cast<Eigen::Index>(runs), static_cast<Eigen::Index>(bounds.size()));
  for (std::size_t i = 0; i < runs; ++i) {
    for (std::size_t j = 0; j < bounds.size(); ++j) {
      std::uniform_real_distribution<double> u(bounds[j].lo, bounds[j].hi);
      pts(i, j) = u(rng);
    }
  }
  return Design(std::move(pts), bounds);
}

}  // namespace acedoe
