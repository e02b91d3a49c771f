#pragma once

#include <cstddef>
#include <string_view>

#include <Eigen/Dense>

#include "acedoe/design.hpp"
#include "acedoe/glm.hpp"
#include "acedoe/prior.hpp"
#include "acedoe/random.hpp"

namespace acedoe {

enum class LossKind { SIL, SEL, PseudoD };

std::string_view to_string(LossKind kind);

struct LossSpec {
  LossKind kind = LossKind::SIL;
  std::size_t mc_size = 1000;
  /// Prediction points for SEL, one row per point.
  PointMatrix prediction_grid;
  /// Quadrature nodes per non-degenerate prior dimension (PseudoD).
  std::size_t quadrature_nodes = 5;

  void validate(std::size_t num_vars) const;
  bool deterministic() const { return kind == LossKind::PseudoD; }
};

/// Per-draw realized losses and their mean.
struct LossSample {
  Eigen::VectorXd values;
  double estimate = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  double standard_error() const;
};

LossSample make_loss_sample(Eigen::VectorXd values);

/// Nested Monte Carlo estimate of the expected self-information loss (negative
/// expected KL divergence from prior to posterior). The evidence for each simulated
/// response reuses the same B prior draws.
LossSample estimate_sil(const GlmModel& model, const PriorSpec& prior, const Design& design, std::size_t mc_size,
                        Rng& rng, std::size_t workers = 1);

/// Expected squared-error loss for predicting mu(x), averaged over the grid. The
/// posterior mean is a self-normalized importance-sampling estimate with the prior
/// as proposal.
LossSample estimate_sel(const GlmModel& model, const PriorSpec& prior, const Design& design, std::size_t mc_size,
                        const PointMatrix& grid, Rng& rng, std::size_t workers = 1);

/// Realized SIL/SEL losses for the given prior draws: responses are simulated
/// under `design` from each draw, then scored against the whole draw set.
LossSample realized_losses(const GlmModel& model, const LossSpec& spec, const Design& design, const DrawSet& draws,
                           Rng& rng, std::size_t workers = 1);

// Kernels on precomputed statistics (see response_statistics / draw_statistics).

/// loss_k = log mean_b p(y_k | psi_b) - log p(y_k | psi_k)
Eigen::VectorXd sil_kernel(const Eigen::MatrixXd& response_stats, const Eigen::MatrixXd& draw_stats,
                           std::size_t workers = 1);
/// loss_k = mean_g (mu_k(g) - sum_b w_kb mu_b(g))^2 with w_kb proportional to p(y_k | psi_b);
/// grid_means is count x G.
Eigen::VectorXd sel_kernel(const Eigen::MatrixXd& response_stats, const Eigen::MatrixXd& draw_stats,
                           const Eigen::MatrixXd& grid_means, std::size_t workers = 1);

/// count x G matrix of mean responses on the prediction grid.
Eigen::MatrixXd grid_means(const GlmModel& model, const DrawSet& draws, const PointMatrix& grid);

/// Quadrature rule over the prior: tensor product of per-marginal rules.
struct QuadratureRule {
  DrawSet nodes;
  Eigen::VectorXd weights;  // sums to 1
};

QuadratureRule prior_quadrature(const PriorSpec& prior, std::size_t nodes_per_dim);

/// Gauss-Hermite rule for the standard normal density (probabilists' convention).
void gauss_hermite(std::size_t m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

struct DCriterion {
  double value = 0.0;  // +inf when any node has a singular information matrix
  std::size_t singular_nodes = 0;

  bool singular() const { return singular_nodes > 0; }
};

/// Prior expectation of -log|M(psi; design)| under deterministic quadrature.
DCriterion pseudo_bayes_d(const GlmModel& model, const PriorSpec& prior, const Design& design, const LossSpec& spec,
                          std::size_t workers = 1);

/// -log|M| or +inf when M is numerically singular.
double neg_log_det(const Eigen::MatrixXd& M);

}  // namespace acedoe
