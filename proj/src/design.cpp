#include "acedoe/design.hpp"

#include <string>

#include "acedoe/error.hpp"

namespace acedoe {

Design::Design(PointMatrix points, std::vector<Interval> bounds)
    : points_(std::move(points)), bounds_(std::move(bounds)) {
  if (points_.rows() < 1 || points_.cols() < 1)
    throw DomainError("design needs at least one run and one variable");
  if (static_cast<std::size_t>(points_.cols()) != bounds_.size())
    throw DomainError("design has " + std::to_string(points_.cols()) + " columns but " +
                      std::to_string(bounds_.size()) + " bounds");
  for (std::size_t j = 0; j < bounds_.size(); ++j) {
    if (!(bounds_[j].lo < bounds_[j].hi))
      throw DomainError("bounds for variable " + std::to_string(j + 1) + " are empty");
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
      if (!bounds_[j].contains(points_(i, static_cast<Eigen::Index>(j))))
        throw DomainError("coordinate (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                          ") = " + std::to_string(points_(i, static_cast<Eigen::Index>(j))) +
                          " lies outside its bounds");
    }
  }
}

void Design::set_coordinate(std::size_t i, std::size_t j, double x) {
  if (i >= runs() || j >= vars()) throw DomainError("coordinate index out of range");
  if (!bounds_[j].contains(x)) throw DomainError("coordinate value outside bounds");
  points_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = x;
}

Design Design::with_coordinate(std::size_t i, std::size_t j, double x) const {
  Design out = *this;
  out.set_coordinate(i, j, x);
  return out;
}

bool operator==(const Design& a, const Design& b) {
  if (a.runs() != b.runs() || a.vars() != b.vars()) return false;
  for (std::size_t j = 0; j < a.vars(); ++j)
    if (a.bounds()[j].lo != b.bounds()[j].lo || a.bounds()[j].hi != b.bounds()[j].hi) return false;
  return a.points() == b.points();
}

}  // namespace acedoe
