#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "acedoe/design.hpp"

namespace acedoe {

/// Noisy loss evaluations at Q points of a coordinate interval.
struct CandidateSet {
  std::vector<double> points;  // sorted, distinct
  std::vector<double> values;
  Interval range;

  std::size_t size() const { return points.size(); }
  void validate() const;
};

/// Q equally spaced points spanning the interval, endpoints included.
std::vector<double> space_filling_1d(const Interval& range, std::size_t count);

struct GpHyper {
  double corr_decay;  // on inputs rescaled to [0, 1]
  double nugget;
};

/// Hyperparameter search box (log10 scale) for the maximum-likelihood fit.
struct GpOptions {
  double log10_decay_lo = -2.0;
  double log10_decay_hi = 4.0;
  double log10_nugget_lo = -8.0;
  double log10_nugget_hi = 1.0;
  std::size_t grid = 21;
  std::size_t refine_rounds = 2;
};

/// Standardized-response log marginal likelihood of the GP at the given
/// hyperparameters; -inf when the correlation matrix cannot be factorized.
double gp_log_likelihood(const CandidateSet& candidates, GpHyper hyper);

/// Fitted one-dimensional emulator with squared-exponential correlation and nugget.
class GpFit {
 public:
  const CandidateSet& training() const { return training_; }
  double mu_hat() const { return mu_hat_; }
  double sigma_hat() const { return sigma_hat_; }
  const Eigen::VectorXd& z() const { return z_; }
  double corr_decay() const { return hyper_.corr_decay; }
  double nugget() const { return hyper_.nugget; }
  GpHyper hyper() const { return hyper_; }
  double log_likelihood() const { return log_likelihood_; }
  /// Constant training values: the emulator predicts that constant everywhere.
  bool degenerate() const { return degenerate_; }

  double predict(double x) const;

 private:
  friend GpFit fit_gp_fixed(const CandidateSet&, GpHyper);
  friend GpFit fit_gp(const CandidateSet&, const GpOptions&);

  CandidateSet training_;
  Eigen::VectorXd unit_points_;
  double mu_hat_ = 0.0;
  double sigma_hat_ = 0.0;
  Eigen::VectorXd z_;
  GpHyper hyper_{1.0, 1e-6};
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd weights_;  // A^{-1} z
  double log_likelihood_ = 0.0;
  bool degenerate_ = false;
};

/// Maximum-likelihood fit over (corr_decay, nugget): log-scale grid then
/// coordinatewise golden-section refinement.
GpFit fit_gp(const CandidateSet& candidates, const GpOptions& options = {});

/// Fit with hyperparameters held fixed. Throws NumericalError if A is not positive definite.
GpFit fit_gp_fixed(const CandidateSet& candidates, GpHyper hyper);

inline double predict_mean(const GpFit& fit, double x) { return fit.predict(x); }

/// Argmin of the emulator over [lo, hi]: 1001-point grid, smallest x on ties, then one
/// golden-section pass around the winner.
double minimize_emulator(const GpFit& fit, double lo, double hi);

}  // namespace acedoe
