#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

#include "acedoe/design.hpp"
#include "acedoe/prior.hpp"
#include "acedoe/random.hpp"

namespace acedoe {

enum class Family { BernoulliLogit, PoissonLog, GammaLog };

/// Layout of f(x).
///  - FirstOrder:   (1, x1, ..., xq)
///  - SecondOrder:  (1, x1, ..., xq, x1^2, x1 x2, ..., x1 xq, x2^2, x2 x3, ..., xq^2)
///  - Helicopter:   (1, log(rho x1^3 / m(x))) with offset log(h / sqrt(g x1)); q must be 3
enum class Predictor { FirstOrder, SecondOrder, Helicopter };

std::string_view to_string(Family f);
std::string_view to_string(Predictor p);

/// Physical constants of the paper-helicopter model (SI units).
struct HelicopterGeometry {
  double drop_height = 2.0;
  double gravity = 9.80665;
  double air_density = 1.20412;
  double paper_density = 0.120;
  double body_length = 0.025;
  double tail_width = 0.05;

  void validate() const;
};

/// Helicopter mass for x = (rotor length, rotor width, tail length).
double helicopter_mass(std::span<const double> x, const HelicopterGeometry& geom = {});
/// -log(Pi_1) with Pi_1 = m / (rho x1^3).
double helicopter_neglog_pi1(std::span<const double> x, const HelicopterGeometry& geom = {});

class GlmModel {
 public:
  GlmModel(Family family, Predictor predictor, std::size_t num_vars, HelicopterGeometry geom = {});

  Family family() const { return family_; }
  Predictor predictor() const { return predictor_; }
  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_params() const { return num_params_; }
  bool has_dispersion() const { return family_ == Family::GammaLog; }
  const HelicopterGeometry& geometry() const { return geom_; }

  Eigen::VectorXd features(std::span<const double> x) const;
  double offset(std::span<const double> x) const;

  /// n x p matrix with rows f(x_i).
  Eigen::MatrixXd model_matrix(const Design& design) const;
  Eigen::VectorXd offsets(const Design& design) const;

  /// Throws DomainError when the prior does not match this model's parameter layout.
  void check_prior(const PriorSpec& prior) const;

 private:
  Family family_;
  Predictor predictor_;
  std::size_t num_vars_;
  std::size_t num_params_;
  HelicopterGeometry geom_;
};

double inverse_link(Family family, double eta);

double linear_predictor(const GlmModel& model, const ParamDraw& draw, std::span<const double> x);
double mean_response(const GlmModel& model, const ParamDraw& draw, std::span<const double> x);

/// Sum over runs of the log density. Gamma uses shape 1/phi and scale phi*mu.
double log_likelihood(const GlmModel& model, const ParamDraw& draw, const Design& design,
                      std::span<const double> y);

Eigen::VectorXd sample_response(const GlmModel& model, const ParamDraw& draw, const Design& design, Rng& rng);

struct FisherInfo {
  Eigen::MatrixXd matrix;   // X^T W X
  Eigen::VectorXd weights;  // diagonal of W
};

FisherInfo fisher_information(const GlmModel& model, const ParamDraw& draw, const Design& design);

/// GLM weight w = (dmu/deta)^2 / Var(y) given the linear predictor.
double glm_weight(Family family, double eta, double phi);

// Batched evaluation used by the Monte Carlo estimators.

/// count x n matrix of linear predictors, one row per draw.
Eigen::MatrixXd linear_predictors(const GlmModel& model, const DrawSet& draws, const Design& design);

/// eta(k, i) = offset(i) + X.row(i) . beta.row(k), summed in a fixed order so equal
/// draws give bitwise equal rows.
Eigen::MatrixXd predictor_table(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& offset);

/// count x n matrix of responses; row k is drawn from psi_k.
Eigen::MatrixXd sample_responses(const GlmModel& model, const DrawSet& draws, const Eigen::MatrixXd& eta,
                                 Rng& rng);

/// The exponential-family log-likelihood factorizes as
///   log p(y_k | psi_b) = <response_statistics(y)_k, draw_statistics(eta, phi)_b>,
/// both with n + 2 columns. This turns the B x B likelihood table into inner products.
Eigen::MatrixXd response_statistics(Family family, const Eigen::MatrixXd& y);
Eigen::MatrixXd draw_statistics(Family family, const Eigen::MatrixXd& eta, const Eigen::VectorXd& phi);

}  // namespace acedoe
