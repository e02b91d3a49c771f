#include "acedoe/ace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/math/distributions/students_t.hpp>

#include "acedoe/error.hpp"
#include "acedoe/parallel.hpp"

namespace acedoe {
namespace {

enum StreamTag : std::uint64_t { kInit = 1, kCandidate, kAccept, kCoin, kPost, kFinal };

std::span<const double> as_span(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

double deterministic_accept(double proposed, double current) {
  if (proposed == current || (std::isinf(proposed) && std::isinf(current))) return 0.5;
  return proposed < current ? 1.0 : 0.0;
}

}  // namespace

void DesignProblem::validate() const {
  if (runs < 1) throw DomainError("design needs at least one run");
  if (bounds.size() != model.num_vars()) throw DomainError("bounds do not match the model's variable count");
  for (const auto& b : bounds)
    if (!(b.lo < b.hi)) throw DomainError("design-space interval is empty");
  model.check_prior(prior);
  loss.validate(model.num_vars());
}

LossSample evaluate_loss(const DesignProblem& problem, const Design& design, std::size_t mc_size, Rng& rng,
                         std::size_t workers) {
  switch (problem.loss.kind) {
    case LossKind::PseudoD: {
      const DCriterion d = pseudo_bayes_d(problem.model, problem.prior, design, problem.loss, workers);
      return make_loss_sample(Eigen::VectorXd::Constant(1, d.value));
    }
    case LossKind::SIL:
    case LossKind::SEL: {
      const DrawSet draws = sample_prior(problem.prior, mc_size, rng);
      return realized_losses(problem.model, problem.loss, design, draws, rng, workers);
    }
  }
  throw DomainError("unknown loss kind");
}

void AceConfig::validate() const {
  if (mc_size < 2) throw DomainError("B must be at least 2");
  if (candidates < 3) throw DomainError("Q must be at least 3");
  if (accept_size < 30) throw DomainError("accept/reject sample size must be at least 30");
  if (restarts < 1) throw DomainError("need at least one restart");
  if (workers < 1) throw DomainError("need at least one worker");
}

double accept_probability(std::span<const double> proposed, std::span<const double> current) {
  if (proposed.size() < 2 || current.size() < 2) throw DomainError("accept_probability needs at least 2 losses per design");
  auto mean = [](std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); };
  auto ss = [](std::span<const double> v, double m) {
    double s = 0.0;
    for (double x : v) {
      if (!std::isfinite(x)) throw DomainError("accept_probability needs finite losses");
      s += (x - m) * (x - m);
    }
    return s;
  };
  const double n1 = static_cast<double>(proposed.size()), n2 = static_cast<double>(current.size());
  const double m1 = mean(proposed), m2 = mean(current);
  const double df = n1 + n2 - 2.0;
  const double pooled = (ss(proposed, m1) + ss(current, m2)) / df;
  if (!(pooled > 0.0)) return deterministic_accept(m1, m2);
  const double t = (m2 - m1) / (std::sqrt(pooled) * std::sqrt(1.0 / n1 + 1.0 / n2));
  const boost::math::students_t dist(df);
  return std::clamp(boost::math::cdf(dist, t), 0.0, 1.0);
}

double sample_skewness(std::span<const double> v) {
  if (v.size() < 3) return 0.0;
  const double n = static_cast<double>(v.size());
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : v) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  return m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

AcceptTest run_accept_test(const DesignProblem& problem, const Design& current, const Design& proposed,
                           std::size_t accept_size, Rng& rng, std::size_t workers) {
  AcceptTest out;
  if (problem.loss.deterministic()) {
    const double v1 = evaluate_loss(problem, proposed, 0, rng, workers).estimate;
    const double v2 = evaluate_loss(problem, current, 0, rng, workers).estimate;
    out.losses_proposed = Eigen::VectorXd::Constant(1, v1);
    out.losses_current = Eigen::VectorXd::Constant(1, v2);
    out.p_star = deterministic_accept(v1, v2);
    return out;
  }
  const DrawSet draws = sample_prior(problem.prior, accept_size, rng);
  out.losses_proposed = realized_losses(problem.model, problem.loss, proposed, draws, rng, workers).values;
  out.losses_current = realized_losses(problem.model, problem.loss, current, draws, rng, workers).values;
  out.p_star = accept_probability(as_span(out.losses_proposed), as_span(out.losses_current));
  return out;
}

PassResult coordinate_pass(const DesignProblem& problem, Design design, const AceConfig& cfg, const PassContext& ctx) {
  PassResult out{std::move(design), {}};
  Design& xi = out.design;
  const std::size_t n = xi.runs(), q = xi.vars();
  const bool rows = cfg.order == VisitOrder::RowMajor;
  for (std::size_t step = 0; step < n * q; ++step) {
    const std::size_t i = rows ? step / q : step % n;
    const std::size_t j = rows ? step % q : step / n;
    const Interval range = xi.bounds()[j];
    TraceRecord rec;
    rec.restart = ctx.restart;
    rec.sweep = ctx.sweep;
    rec.row = i;
    rec.var = j;
    rec.proposed = xi(i, j);

    CandidateSet cands{{}, {}, range};
    for (std::size_t k = 0; const double x : space_filling_1d(range, cfg.candidates)) {
      Rng rng = make_stream(ctx.stream_root, {kCandidate, ctx.sweep, i, j, k++});
      const double v = evaluate_loss(problem, xi.with_coordinate(i, j, x), cfg.mc_size, rng, cfg.workers).estimate;
      if (std::isfinite(v)) {
        cands.points.push_back(x);
        cands.values.push_back(v);
      }
    }

    std::optional<GpFit> fit;
    if (cands.size() >= 3) fit = fit_gp(cands, cfg.gp);
    if (!fit || fit->degenerate()) {
      rec.degenerate = true;
      rec.p_star = 0.0;
      out.trace.push_back(rec);
      continue;
    }

    rec.proposed = minimize_emulator(*fit, range.lo, range.hi);
    const Design proposal = xi.with_coordinate(i, j, rec.proposed);
    Rng accept_rng = make_stream(ctx.stream_root, {kAccept, ctx.sweep, i, j});
    const AcceptTest test = run_accept_test(problem, xi, proposal, cfg.accept_size, accept_rng, cfg.workers);
    rec.p_star = test.p_star;
    rec.skew_proposed = sample_skewness(as_span(test.losses_proposed));
    rec.skew_current = sample_skewness(as_span(test.losses_current));

    Rng coin = make_stream(ctx.stream_root, {kCoin, ctx.sweep, i, j});
    rec.accepted = std::uniform_real_distribution<double>(0.0, 1.0)(coin) < test.p_star;
    if (rec.accepted) xi.set_coordinate(i, j, rec.proposed);
    out.trace.push_back(rec);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> near_coincident_rows(const Design& design, double tol) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < design.runs(); ++a) {
    for (std::size_t b = a + 1; b < design.runs(); ++b) {
      bool close = true;
      for (std::size_t j = 0; j < design.vars() && close; ++j)
        close = std::abs(design(a, j) - design(b, j)) <= tol * design.bounds()[j].width();
      if (close) out.emplace_back(a, b);
    }
  }
  return out;
}

namespace {

struct RestartOutcome {
  std::optional<Design> design;
  LossSample final;
  std::vector<TraceRecord> trace;
  std::vector<SweepSummary> sweeps;
};

RestartOutcome run_restart(const DesignProblem& problem, const AceConfig& cfg, std::size_t r) {
  const std::uint64_t root = cfg.seed + r;
  RestartOutcome out;
  Rng init = make_stream(root, {kInit});
  Design design = random_design(problem.bounds, problem.runs, init);

  auto record_sweep = [&](std::size_t sweep, const Design& d) {
    Rng rng = make_stream(root, {kPost, sweep});
    const LossSample s = evaluate_loss(problem, d, cfg.accept_size, rng, cfg.workers);
    out.sweeps.push_back({r, sweep, s.estimate, s.standard_error()});
    return s.estimate;
  };
  record_sweep(0, design);

  for (std::size_t s = 1; s <= cfg.sweeps; ++s) {
    PassResult pass = coordinate_pass(problem, std::move(design), cfg, {root, r, s});
    design = std::move(pass.design);
    const double est = record_sweep(s, design);
    for (auto& rec : pass.trace) rec.loss_estimate = est;
    out.trace.insert(out.trace.end(), pass.trace.begin(), pass.trace.end());
  }

  Rng final_rng = make_stream(root, {kFinal});
  out.final = evaluate_loss(problem, design, cfg.accept_size, final_rng, cfg.workers);
  out.design = std::move(design);
  return out;
}

}  // namespace

AceResult ace_optimize(const DesignProblem& problem, const AceConfig& cfg) {
  problem.validate();
  cfg.validate();

  std::vector<RestartOutcome> outcomes(cfg.restarts);
  if (cfg.workers > 1 && cfg.restarts > 1) {
    AceConfig inner = cfg;
    inner.workers = 1;
    parallel_for_blocks(cfg.restarts, cfg.workers, [&](std::size_t r) { outcomes[r] = run_restart(problem, inner, r); });
  } else {
    for (std::size_t r = 0; r < cfg.restarts; ++r) outcomes[r] = run_restart(problem, cfg, r);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].final.estimate < outcomes[best].final.estimate) best = r;

  AceResult res{*outcomes[best].design, outcomes[best].final.estimate, outcomes[best].final.standard_error(), best,
                {}, {}, {}, {}, {}};
  for (auto& o : outcomes) {
    res.restart_estimates.push_back(o.final.estimate);
    res.restart_designs.push_back(*o.design);
    res.trace.insert(res.trace.end(), o.trace.begin(), o.trace.end());
    res.sweeps.insert(res.sweeps.end(), o.sweeps.begin(), o.sweeps.end());
  }
  res.near_coincident = near_coincident_rows(res.design);
  return res;
}

}  // namespace acedoe
