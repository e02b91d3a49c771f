#include "acedoe/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "acedoe/ace.hpp"
#include "acedoe/case_studies.hpp"
#include "acedoe/error.hpp"
#include "acedoe/parallel.hpp"

namespace acedoe {

double quantile(std::vector<double> v, double prob) {
  if (v.empty()) throw DomainError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

EvalSummary EvalSummary::from_estimates(std::string design, LossKind kind, std::size_t mc_size,
                                        std::vector<double> estimates) {
  EvalSummary s;
  s.design = std::move(design);
  s.kind = kind;
  s.mc_size = mc_size;
  s.min = *std::min_element(estimates.begin(), estimates.end());
  s.max = *std::max_element(estimates.begin(), estimates.end());
  s.q1 = quantile(estimates, 0.25);
  s.median = quantile(estimates, 0.5);
  s.q3 = quantile(estimates, 0.75);
  s.estimates = std::move(estimates);
  return s;
}

bool EvalSummary::consistent() const {
  if (estimates.empty()) return false;
  const EvalSummary r = from_estimates(design, kind, mc_size, estimates);
  return r.min == min && r.q1 == q1 && r.median == median && r.q3 == q3 && r.max == max;
}

MspbdSpec mspbd_spec(const Eigen::VectorXd& means) {
  if (means.size() < 1) throw DomainError("MSPBD needs at least one variable");
  MspbdSpec s{means, Eigen::VectorXd(means.size()), Eigen::VectorXd(means.size()), Eigen::VectorXd(means.size())};
  for (Eigen::Index j = 0; j < means.size(); ++j) {
    if (!(std::abs(means(j)) > 1.0))
      throw DomainError("MSPBD construction requires |E(beta_j)| > 1 for every variable");
    s.corner(j) = means(j) > 0.0 ? 1.0 : -1.0;
    s.interior(j) = s.corner(j) - 2.0 / means(j);
    s.gamma(j) = std::abs(s.interior(j));
  }
  return s;
}

Design mspbd_design(const Eigen::VectorXd& means) {
  const MspbdSpec s = mspbd_spec(means);
  const auto q = means.size();
  PointMatrix pts(q + 1, q);
  for (Eigen::Index i = 0; i <= q; ++i) pts.row(i) = s.corner.transpose();
  for (Eigen::Index i = 0; i < q; ++i) pts(i, i) = s.interior(i);
  return Design(std::move(pts), std::vector<Interval>(static_cast<std::size_t>(q), Interval{-1.0, 1.0}));
}

double ccd_orthogonal_axial(std::size_t factorial_points, std::size_t total_points) {
  if (factorial_points < 1 || total_points <= factorial_points) throw DomainError("invalid CCD point counts");
  const double F = static_cast<double>(factorial_points), n = static_cast<double>(total_points);
  const double r = std::sqrt(n) - std::sqrt(F);
  return std::pow(r * r * F / 4.0, 0.25);
}

Design ccd_design(std::size_t q, double axial, std::size_t n_center) {
  if (q != 3) throw DomainError("only three-variable central composite designs are supported");
  if (!(axial > 0.0)) throw DomainError("axial distance must be positive");
  const Eigen::Index n = 8 + 6 + static_cast<Eigen::Index>(n_center);
  PointMatrix pts = PointMatrix::Zero(n, 3);
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index j = 0; j < 3; ++j) pts(r, j) = ((r >> j) & 1) ? 1.0 : -1.0;
  for (Eigen::Index j = 0; j < 3; ++j) {
    pts(8 + 2 * j, j) = -axial;
    pts(9 + 2 * j, j) = axial;
  }
  const double half = std::max(axial, 1.0);
  return Design(std::move(pts), std::vector<Interval>(3, Interval{-half, half}));
}

Design fractional_factorial_23_1(int sign, const std::vector<Interval>& bounds) {
  if (sign != 1 && sign != -1) throw DomainError("fraction sign must be +1 or -1");
  if (bounds.size() != 3) throw DomainError("2^(3-1) fraction needs three bounds");
  PointMatrix pts(4, 3);
  for (Eigen::Index r = 0; r < 4; ++r) {
    const double x1 = (r & 1) ? 1.0 : -1.0;
    const double x2 = (r & 2) ? 1.0 : -1.0;
    const double coded[3] = {x1, x2, sign * x1 * x2};
    for (std::size_t j = 0; j < 3; ++j) pts(r, static_cast<Eigen::Index>(j)) = bounds[j].from_coded(coded[j]);
  }
  return Design(std::move(pts), bounds);
}

std::pair<double, std::size_t> maximin_score(const Design& d) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t count = 0;
  for (std::size_t a = 0; a < d.runs(); ++a) {
    for (std::size_t b = a + 1; b < d.runs(); ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < d.vars(); ++j) {
        const double diff = (d(a, j) - d(b, j)) / d.bounds()[j].width();
        s += diff * diff;
      }
      if (s < best - 1e-12) {
        best = s;
        count = 1;
      } else if (std::abs(s - best) <= 1e-12) {
        ++count;
      }
    }
  }
  return {best, count};
}

namespace {

bool better(std::pair<double, std::size_t> a, std::pair<double, std::size_t> b) {
  if (a.first > b.first + 1e-12) return true;
  if (a.first < b.first - 1e-12) return false;
  return a.second < b.second;
}

}  // namespace

Design maximin_lh(std::size_t n, std::size_t q, std::size_t restarts, Rng& rng, std::vector<Interval> bounds) {
  if (n < 2) throw DomainError("maximin Latin hypercube needs n >= 2");
  if (q < 1 || restarts < 1) throw DomainError("maximin Latin hypercube needs q >= 1 and restarts >= 1");
  if (bounds.empty()) bounds.assign(q, Interval{0.0, 1.0});
  if (bounds.size() != q) throw DomainError("bounds do not match q");
  const std::vector<Interval> unit(q, Interval{0.0, 1.0});

  std::optional<Design> best;
  std::pair<double, std::size_t> best_score{-1.0, 0};
  for (std::size_t r = 0; r < restarts; ++r) {
    PointMatrix pts(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q));
    for (std::size_t j = 0; j < q; ++j) {
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      for (std::size_t i = 0; i < n; ++i)
        pts(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (static_cast<double>(perm[i]) + 0.5) / static_cast<double>(n);
    }
    Design d(std::move(pts), unit);
    auto score = maximin_score(d);
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t j = 0; j < q; ++j) {
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = a + 1; b < n; ++b) {
            const double xa = d(a, j), xb = d(b, j);
            d.set_coordinate(a, j, xb);
            d.set_coordinate(b, j, xa);
            const auto s = maximin_score(d);
            if (better(s, score)) {
              score = s;
              improved = true;
            } else {
              d.set_coordinate(a, j, xa);
              d.set_coordinate(b, j, xb);
            }
          }
        }
      }
    }
    if (!best || better(score, best_score)) {
      best = d;
      best_score = score;
    }
  }

  PointMatrix mapped = best->points();
  for (Eigen::Index i = 0; i < mapped.rows(); ++i)
    for (Eigen::Index j = 0; j < mapped.cols(); ++j)
      mapped(i, j) = bounds[static_cast<std::size_t>(j)].from_unit(mapped(i, j));
  return Design(std::move(mapped), std::move(bounds));
}

Design v_optimal_helicopter() {
  PointMatrix pts(4, 3);
  pts << 0.070, 0.090, 0.120,
         0.070, 0.090, 0.120,
         0.120, 0.030, 0.070,
         0.120, 0.030, 0.070;
  return Design(std::move(pts), cases::helicopter_bounds());
}

std::vector<EvalSummary> evaluate_designs(const std::vector<NamedDesign>& designs, const GlmModel& model,
                                          const PriorSpec& prior, const LossSpec& loss, std::size_t replicates,
                                          std::size_t mc_size, std::uint64_t seed, std::size_t workers) {
  if (replicates < 1) throw DomainError("need at least one replicate");
  model.check_prior(prior);
  LossSpec spec = loss;
  spec.mc_size = mc_size;
  spec.validate(model.num_vars());

  const std::size_t jobs = designs.size() * replicates;
  std::vector<double> values(jobs);
  // Few large jobs: spread threads over replicates when there are enough of them,
  // otherwise hand the workers to the estimator.
  const bool outer = workers > 1 && jobs >= workers;
  parallel_for_blocks(jobs, outer ? workers : 1, [&](std::size_t job) {
    const std::size_t d = job / replicates, r = job % replicates;
    const NamedDesign& nd = designs[d];
    DesignProblem problem{model, prior, spec, nd.design.bounds(), nd.design.runs()};
    Rng rng = make_stream(seed, {name_key(nd.name), r});
    values[job] = evaluate_loss(problem, nd.design, mc_size, rng, outer ? 1 : workers).estimate;
  });

  std::vector<EvalSummary> out;
  for (std::size_t d = 0; d < designs.size(); ++d) {
    std::vector<double> est(values.begin() + static_cast<std::ptrdiff_t>(d * replicates),
                            values.begin() + static_cast<std::ptrdiff_t>((d + 1) * replicates));
    out.push_back(EvalSummary::from_estimates(designs[d].name, loss.kind, mc_size, std::move(est)));
  }
  return out;
}

}  // namespace acedoe
