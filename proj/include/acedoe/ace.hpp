#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acedoe/design.hpp"
#include "acedoe/glm.hpp"
#include "acedoe/gp.hpp"
#include "acedoe/loss.hpp"
#include "acedoe/prior.hpp"
#include "acedoe/random.hpp"

namespace acedoe {

/// Everything needed to score an n-run design.
struct DesignProblem {
  GlmModel model;
  PriorSpec prior;
  LossSpec loss;
  std::vector<Interval> bounds;
  std::size_t runs;

  void validate() const;
};

/// One loss evaluation; `mc_size` is ignored for the deterministic PseudoD loss,
/// whose sample holds the single quadrature value.
LossSample evaluate_loss(const DesignProblem& problem, const Design& design, std::size_t mc_size, Rng& rng,
                         std::size_t workers = 1);

enum class VisitOrder { RowMajor, ColumnMajor };

struct AceConfig {
  std::size_t mc_size = 1000;       // B: per-candidate Monte Carlo size
  std::size_t candidates = 20;      // Q
  std::size_t accept_size = 20000;  // B-tilde: accept/reject sample size
  std::size_t sweeps = 20;          // passes over all n*q coordinates
  std::size_t restarts = 10;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  VisitOrder order = VisitOrder::RowMajor;
  GpOptions gp;

  void validate() const;
};

struct TraceRecord {
  std::size_t restart = 0;
  std::size_t sweep = 0;  // 1-based
  std::size_t row = 0;    // 0-based run index
  std::size_t var = 0;    // 0-based variable index
  double proposed = 0.0;
  double p_star = 0.5;
  bool accepted = false;
  bool degenerate = false;  // emulator was flat or unusable; no exchange attempted
  double loss_estimate = 0.0;
  double skew_proposed = 0.0;
  double skew_current = 0.0;
};

struct SweepSummary {
  std::size_t restart = 0;
  std::size_t sweep = 0;  // 0 = initial design
  double estimate = 0.0;
  double std_error = 0.0;
};

struct AcceptTest {
  Eigen::VectorXd losses_proposed;
  Eigen::VectorXd losses_current;
  double p_star = 0.5;
};

/// Posterior probability that the proposed design has the smaller expected loss,
/// under a common-variance normal model with the reference prior p(b1, b2, a) ~ 1/a.
/// This is the one-sided two-sample t probability with n1 + n2 - 2 degrees of freedom.
double accept_probability(std::span<const double> losses_proposed, std::span<const double> losses_current);

double sample_skewness(std::span<const double> v);

/// Paired simulation of the current and proposed designs from shared prior draws.
AcceptTest run_accept_test(const DesignProblem& problem, const Design& current, const Design& proposed,
                           std::size_t accept_size, Rng& rng, std::size_t workers = 1);

struct PassResult {
  Design design;
  std::vector<TraceRecord> trace;
};

/// Identifies one pass inside a run so every random stream can be derived from it.
struct PassContext {
  std::uint64_t stream_root = 0;
  std::size_t restart = 0;
  std::size_t sweep = 1;
};

/// One sweep of approximate coordinate exchange over every coordinate, row-major.
PassResult coordinate_pass(const DesignProblem& problem, Design design, const AceConfig& cfg, const PassContext& ctx);

struct AceResult {
  Design design;
  double estimate = 0.0;  // high-precision loss of the returned design
  double std_error = 0.0;
  std::size_t best_restart = 0;
  std::vector<double> restart_estimates;
  std::vector<Design> restart_designs;
  std::vector<TraceRecord> trace;     // all restarts
  std::vector<SweepSummary> sweeps;   // all restarts
  std::vector<std::pair<std::size_t, std::size_t>> near_coincident;  // row pairs of the returned design
};

AceResult ace_optimize(const DesignProblem& problem, const AceConfig& cfg);

/// Row pairs whose coordinates all agree to within `tol` of the variable ranges.
std::vector<std::pair<std::size_t, std::size_t>> near_coincident_rows(const Design& design, double tol = 0.01);

}  // namespace acedoe
