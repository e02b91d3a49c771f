#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "acedoe/design.hpp"
#include "acedoe/glm.hpp"
#include "acedoe/loss.hpp"
#include "acedoe/prior.hpp"
#include "acedoe/random.hpp"

namespace acedoe {

struct NamedDesign {
  std::string name;
  Design design;
};

/// Repeated loss estimates for one design plus five-number summary.
struct EvalSummary {
  std::string design;
  LossKind kind = LossKind::SIL;
  std::size_t mc_size = 0;
  std::vector<double> estimates;
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;

  static EvalSummary from_estimates(std::string design, LossKind kind, std::size_t mc_size,
                                    std::vector<double> estimates);
  /// Recomputes the summary from the stored estimates and compares.
  bool consistent() const;
};

/// Sample quantile with linear interpolation between order statistics (R type 7).
double quantile(std::vector<double> values, double prob);

/// Two-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct MspbdSpec {
  Eigen::VectorXd prior_means;
  Eigen::VectorXd corner;    // c_j = sign(E beta_j)
  Eigen::VectorXd interior;  // c_j - 2 / E beta_j
  Eigen::VectorXd gamma;     // |interior|
};

MspbdSpec mspbd_spec(const Eigen::VectorXd& prior_means);

/// Minimally supported pseudo-Bayesian D-optimal design for a first-order log-linear
/// model on [-1, 1]^q: rows c - 2 e_i / E(beta_i), i = 1..q, then c.
Design mspbd_design(const Eigen::VectorXd& prior_means);

/// Axial distance making a CCD with F factorial and n total points orthogonal.
double ccd_orthogonal_axial(std::size_t factorial_points, std::size_t total_points);

/// Three-variable central composite design on [-axial, axial]^3: 8 factorial
/// points, 6 axial points, then n_center centre points.
Design ccd_design(std::size_t q, double axial, std::size_t n_center);

/// Regular 2^(3-1) fraction with x3 = sign * x1 * x2, coded levels mapped onto `bounds`.
Design fractional_factorial_23_1(int sign, const std::vector<Interval>& bounds);

/// Squared minimum interpoint distance on unit-scaled coordinates and the number of
/// pairs attaining it.
std::pair<double, std::size_t> maximin_score(const Design& design);

/// Maximin Latin hypercube via pairwise column-entry swap descent; best of `restarts`.
/// Bounds default to the unit cube.
Design maximin_lh(std::size_t n, std::size_t q, std::size_t restarts, Rng& rng,
                  std::vector<Interval> bounds = {});

/// Equally replicated two-point V-optimal helicopter design.
Design v_optimal_helicopter();

/// R replicate estimates per design at Monte Carlo size B. Each design's streams are
/// keyed by its name, so results do not depend on list order.
std::vector<EvalSummary> evaluate_designs(const std::vector<NamedDesign>& designs, const GlmModel& model,
                                          const PriorSpec& prior, const LossSpec& loss, std::size_t replicates,
                                          std::size_t mc_size, std::uint64_t seed, std::size_t workers = 1);

}  // namespace acedoe
