#include "acedoe/loss.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "acedoe/error.hpp"
#include "acedoe/parallel.hpp"

namespace acedoe {
namespace {

// Rows of the B x B likelihood table are processed in fixed-size blocks so that
// the arithmetic for every entry is independent of how blocks map onto threads.
constexpr std::size_t kRowBlock = 64;
constexpr std::size_t kNodeChunk = 1024;

std::size_t block_count(std::size_t rows) { return (rows + kRowBlock - 1) / kRowBlock; }

/// Transposed, contiguous copy of the draw statistics (d x B, row-major).
std::vector<double> transpose_stats(const Eigen::MatrixXd& c) {
  const std::size_t B = static_cast<std::size_t>(c.rows()), d = static_cast<std::size_t>(c.cols());
  std::vector<double> out(B * d);
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t b = 0; b < B; ++b) out[j * B + b] = c(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(j));
  return out;
}

/// acc[b] = <t_k, c_b>, accumulated in a fixed column order. This file is built
/// without FP contraction so vectorized and scalar lanes round identically:
/// identical draws give bitwise identical likelihoods.
void likelihood_row(const Eigen::MatrixXd& t, Eigen::Index k, const std::vector<double>& ct, std::size_t B,
                    double* acc) {
  const Eigen::Index d = t.cols();
  std::fill(acc, acc + B, 0.0);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double tj = t(k, j);
    if (tj == 0.0) continue;
    const double* row = ct.data() + static_cast<std::size_t>(j) * B;
    for (std::size_t b = 0; b < B; ++b) acc[b] += tj * row[b];
  }
}

double row_max(const double* acc, std::size_t B) { return *std::max_element(acc, acc + B); }

void check_stats(const Eigen::MatrixXd& t, const Eigen::MatrixXd& c, const char* who) {
  if (t.rows() != c.rows() || t.cols() != c.cols())
    throw DomainError(std::string(who) + ": statistics shapes differ");
  if (t.rows() < 2) throw DomainError(std::string(who) + ": need at least 2 draws");
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::SIL:
      return "SIL";
    case LossKind::SEL:
      return "SEL";
    case LossKind::PseudoD:
      return "PseudoD";
  }
  return "?";
}

void LossSpec::validate(std::size_t num_vars) const {
  if (kind != LossKind::PseudoD && mc_size < 2) throw DomainError("Monte Carlo size must be at least 2");
  if (kind == LossKind::SEL) {
    if (prediction_grid.rows() == 0) throw DomainError("SEL needs a nonempty prediction grid");
    if (static_cast<std::size_t>(prediction_grid.cols()) != num_vars)
      throw DomainError("prediction grid dimension does not match the model");
  }
  if (kind == LossKind::PseudoD && quadrature_nodes < 1) throw DomainError("quadrature needs at least one node");
}

double LossSample::standard_error() const {
  const auto B = values.size();
  if (B < 2) return 0.0;
  const double var = (values.array() - estimate).square().sum() / static_cast<double>(B - 1);
  return std::sqrt(var / static_cast<double>(B));
}

LossSample make_loss_sample(Eigen::VectorXd values) {
  LossSample s;
  s.estimate = values.size() > 0 ? values.mean() : 0.0;
  s.values = std::move(values);
  return s;
}

Eigen::VectorXd sil_kernel(const Eigen::MatrixXd& t, const Eigen::MatrixXd& c, std::size_t workers) {
  check_stats(t, c, "estimate_sil");
  const std::size_t B = static_cast<std::size_t>(t.rows());
  const std::vector<double> ct = transpose_stats(c);
  const double log_b = std::log(static_cast<double>(B));
  Eigen::VectorXd out(static_cast<Eigen::Index>(B));
  std::atomic<bool> failed{false};

  parallel_for_blocks(block_count(B), workers, [&](std::size_t blk) {
    Eigen::ArrayXd acc(static_cast<Eigen::Index>(B));
    const std::size_t k_end = std::min(B, (blk + 1) * kRowBlock);
    for (std::size_t k = blk * kRowBlock; k < k_end; ++k) {
      likelihood_row(t, static_cast<Eigen::Index>(k), ct, B, acc.data());
      const double m = row_max(acc.data(), B);
      const double own = acc(static_cast<Eigen::Index>(k));
      if (!std::isfinite(m) || !std::isfinite(own)) {
        failed = true;
        return;
      }
      const double s = (acc - m).exp().sum();
      out(static_cast<Eigen::Index>(k)) = (m - own) + (std::log(s) - log_b);
    }
  });
  if (failed) throw NumericalError("estimate_sil", "log-likelihood table has no finite entries for a simulated response");
  return out;
}

Eigen::VectorXd sel_kernel(const Eigen::MatrixXd& t, const Eigen::MatrixXd& c, const Eigen::MatrixXd& mu,
                           std::size_t workers) {
  check_stats(t, c, "estimate_sel");
  if (mu.rows() != t.rows() || mu.cols() < 1) throw DomainError("estimate_sel: grid means have the wrong shape");
  const std::size_t B = static_cast<std::size_t>(t.rows());
  const Eigen::Index G = mu.cols();
  const std::vector<double> ct = transpose_stats(c);

  // Centering on the first draw keeps E[mu | y] - mu_k free of cancellation and
  // exactly zero when all draws coincide.
  Eigen::MatrixXd centered = mu;
  centered.rowwise() -= mu.row(0);

  Eigen::VectorXd out(static_cast<Eigen::Index>(B));
  std::atomic<bool> failed{false};

  parallel_for_blocks(block_count(B), workers, [&](std::size_t blk) {
    const std::size_t k0 = blk * kRowBlock;
    const std::size_t k_end = std::min(B, k0 + kRowBlock);
    const auto rows = static_cast<Eigen::Index>(k_end - k0);
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> w(rows, static_cast<Eigen::Index>(B));
    for (std::size_t k = k0; k < k_end; ++k) {
      double* acc = w.row(static_cast<Eigen::Index>(k - k0)).data();
      likelihood_row(t, static_cast<Eigen::Index>(k), ct, B, acc);
      const double m = row_max(acc, B);
      if (!std::isfinite(m)) {
        failed = true;
        return;
      }
      auto row = w.row(static_cast<Eigen::Index>(k - k0)).array();
      row = (row - m).exp();
      const double total = row.sum();
      if (!(total > 0.0) || !std::isfinite(total)) {
        failed = true;
        return;
      }
      row /= total;
    }
    const Eigen::MatrixXd post = w * centered;
    for (std::size_t k = k0; k < k_end; ++k) {
      const auto r = static_cast<Eigen::Index>(k - k0);
      out(static_cast<Eigen::Index>(k)) =
          (centered.row(static_cast<Eigen::Index>(k)) - post.row(r)).squaredNorm() / static_cast<double>(G);
    }
  });
  if (failed) throw NumericalError("estimate_sel", "importance weights are degenerate");
  return out;
}

Eigen::MatrixXd grid_means(const GlmModel& model, const DrawSet& draws, const PointMatrix& grid) {
  if (static_cast<std::size_t>(grid.cols()) != model.num_vars())
    throw DomainError("prediction grid dimension does not match the model");
  const Eigen::Index G = grid.rows();
  Eigen::MatrixXd F(G, static_cast<Eigen::Index>(model.num_params()));
  Eigen::VectorXd off(G);
  for (Eigen::Index g = 0; g < G; ++g) {
    std::span<const double> x(grid.row(g).data(), static_cast<std::size_t>(grid.cols()));
    F.row(g) = model.features(x).transpose();
    off(g) = model.offset(x);
  }
  return predictor_table(draws.beta, F, off).unaryExpr([&](double e) { return inverse_link(model.family(), e); });
}

LossSample realized_losses(const GlmModel& model, const LossSpec& spec, const Design& design, const DrawSet& draws,
                           Rng& rng, std::size_t workers) {
  if (spec.kind == LossKind::PseudoD) throw DomainError("realized_losses: PseudoD is not a Monte Carlo loss");
  const Eigen::MatrixXd eta = linear_predictors(model, draws, design);
  const Eigen::MatrixXd y = sample_responses(model, draws, eta, rng);
  const Eigen::MatrixXd t = response_statistics(model.family(), y);
  const Eigen::MatrixXd c = draw_statistics(model.family(), eta, draws.phi);
  if (spec.kind == LossKind::SIL) return make_loss_sample(sil_kernel(t, c, workers));
  return make_loss_sample(sel_kernel(t, c, grid_means(model, draws, spec.prediction_grid), workers));
}

LossSample estimate_sil(const GlmModel& model, const PriorSpec& prior, const Design& design, std::size_t mc_size,
                        Rng& rng, std::size_t workers) {
  model.check_prior(prior);
  LossSpec spec{LossKind::SIL, mc_size, {}, 5};
  spec.validate(model.num_vars());
  const DrawSet draws = sample_prior(prior, mc_size, rng);
  return realized_losses(model, spec, design, draws, rng, workers);
}

LossSample estimate_sel(const GlmModel& model, const PriorSpec& prior, const Design& design, std::size_t mc_size,
                        const PointMatrix& grid, Rng& rng, std::size_t workers) {
  model.check_prior(prior);
  LossSpec spec{LossKind::SEL, mc_size, grid, 5};
  spec.validate(model.num_vars());
  const DrawSet draws = sample_prior(prior, mc_size, rng);
  return realized_losses(model, spec, design, draws, rng, workers);
}

void gauss_hermite(std::size_t m, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  if (m < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = std::sqrt(static_cast<double>(i + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  nodes = eig.eigenvalues();
  weights = eig.eigenvectors().row(0).transpose().array().square();
  weights /= weights.sum();
}

namespace {

struct Rule1d {
  std::vector<double> x;
  std::vector<double> w;
};

Rule1d marginal_rule(const Marginal& m, std::size_t nodes) {
  Rule1d r;
  if (const auto* u = std::get_if<Uniform>(&m)) {
    const double h = (u->hi - u->lo) / static_cast<double>(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
      r.x.push_back(u->lo + (static_cast<double>(k) + 0.5) * h);
      r.w.push_back(1.0 / static_cast<double>(nodes));
    }
  } else if (const auto* nm = std::get_if<Normal>(&m)) {
    Eigen::VectorXd x, w;
    gauss_hermite(nodes, x, w);
    const double sd = std::sqrt(nm->variance);
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      r.x.push_back(nm->mean + sd * x(k));
      r.w.push_back(w(k));
    }
  } else {
    r.x.push_back(std::get<PointMass>(m).value);
    r.w.push_back(1.0);
  }
  return r;
}

}  // namespace

QuadratureRule prior_quadrature(const PriorSpec& prior, std::size_t nodes_per_dim) {
  if (nodes_per_dim < 1) throw DomainError("quadrature needs at least one node");
  std::vector<Rule1d> rules;
  for (const auto& m : prior.coefficients()) rules.push_back(marginal_rule(m, nodes_per_dim));
  if (prior.dispersion()) rules.push_back(marginal_rule(*prior.dispersion(), nodes_per_dim));

  double total = 1.0;
  for (const auto& r : rules) total *= static_cast<double>(r.x.size());
  if (total > 5e7) throw DomainError("quadrature grid too large; reduce nodes per dimension");

  const auto count = static_cast<Eigen::Index>(total);
  const auto p = static_cast<Eigen::Index>(prior.num_coefficients());
  QuadratureRule q{{Eigen::MatrixXd(count, p), Eigen::VectorXd::Ones(count)}, Eigen::VectorXd(count)};
  std::vector<std::size_t> idx(rules.size(), 0);
  for (Eigen::Index n = 0; n < count; ++n) {
    double w = 1.0;
    for (std::size_t d = 0; d < rules.size(); ++d) {
      const double v = rules[d].x[idx[d]];
      w *= rules[d].w[idx[d]];
      if (static_cast<Eigen::Index>(d) < p)
        q.nodes.beta(n, static_cast<Eigen::Index>(d)) = v;
      else
        q.nodes.phi(n) = v;
    }
    q.weights(n) = w;
    for (std::size_t d = rules.size(); d-- > 0;) {
      if (++idx[d] < rules[d].x.size()) break;
      idx[d] = 0;
    }
  }
  return q;
}

double neg_log_det(const Eigen::MatrixXd& M) {
  Eigen::LLT<Eigen::MatrixXd> llt(M);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Eigen::VectorXd d = llt.matrixLLT().diagonal();
  const double scale = M.diagonal().maxCoeff();
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (!(d(i) * d(i) > 1e-12 * scale)) return std::numeric_limits<double>::infinity();
    logdet += 2.0 * std::log(d(i));
  }
  return -logdet;
}

DCriterion pseudo_bayes_d(const GlmModel& model, const PriorSpec& prior, const Design& design, const LossSpec& spec,
                          std::size_t workers) {
  model.check_prior(prior);
  if (spec.quadrature_nodes < 1) throw DomainError("quadrature needs at least one node");
  const QuadratureRule rule = prior_quadrature(prior, spec.quadrature_nodes);
  const Eigen::MatrixXd X = model.model_matrix(design);
  const Eigen::VectorXd off = model.offsets(design);
  const std::size_t count = rule.nodes.size();
  const std::size_t chunks = (count + kNodeChunk - 1) / kNodeChunk;
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::size_t> singular(chunks, 0);

  parallel_for_blocks(chunks, workers, [&](std::size_t ch) {
    Eigen::VectorXd w(X.rows());
    for (std::size_t n = ch * kNodeChunk; n < std::min(count, (ch + 1) * kNodeChunk); ++n) {
      const auto ni = static_cast<Eigen::Index>(n);
      const Eigen::VectorXd eta = off + X * rule.nodes.beta.row(ni).transpose();
      for (Eigen::Index i = 0; i < eta.size(); ++i) w(i) = glm_weight(model.family(), eta(i), rule.nodes.phi(ni));
      const Eigen::MatrixXd M = X.transpose() * w.asDiagonal() * X;
      const double v = neg_log_det(M);
      if (std::isinf(v)) {
        ++singular[ch];
      } else {
        partial[ch] += rule.weights(ni) * v;
      }
    }
  });

  DCriterion out;
  for (std::size_t ch = 0; ch < chunks; ++ch) {
    out.value += partial[ch];
    out.singular_nodes += singular[ch];
  }
  if (out.singular_nodes > 0) out.value = std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace acedoe
