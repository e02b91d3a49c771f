#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "acedoe/random.hpp"

namespace acedoe {

struct Uniform {
  double lo;
  double hi;
};

/// Normal marginal parameterized by mean and variance.
struct Normal {
  double mean;
  double variance;
};

/// A known parameter.
struct PointMass {
  double value;
};

using Marginal = std::variant<Uniform, Normal, PointMass>;

double marginal_mean(const Marginal& m);
bool is_point_mass(const Marginal& m);

/// One parameter value psi = (beta, phi).
struct ParamDraw {
  Eigen::VectorXd beta;
  double phi = 1.0;
};

/// Independent marginals over the regression coefficients and, optionally, the dispersion.
class PriorSpec {
 public:
  PriorSpec(std::vector<Marginal> coefficients, std::optional<Marginal> dispersion = std::nullopt);

  std::size_t num_coefficients() const { return coefficients_.size(); }
  const std::vector<Marginal>& coefficients() const { return coefficients_; }
  const std::optional<Marginal>& dispersion() const { return dispersion_; }

  Eigen::VectorXd coefficient_means() const;
  bool degenerate() const;

 private:
  std::vector<Marginal> coefficients_;
  std::optional<Marginal> dispersion_;
};

/// A batch of prior draws stored column-wise for vectorized evaluation.
struct DrawSet {
  Eigen::MatrixXd beta;  // count x p
  Eigen::VectorXd phi;   // count

  std::size_t size() const { return static_cast<std::size_t>(beta.rows()); }
  ParamDraw draw(std::size_t k) const {
    return {beta.row(static_cast<Eigen::Index>(k)).transpose(), phi(static_cast<Eigen::Index>(k))};
  }
};

DrawSet sample_prior(const PriorSpec& prior, std::size_t count, Rng& rng);

}  // namespace acedoe
