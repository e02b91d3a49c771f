#include "acedoe/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "acedoe/error.hpp"

namespace acedoe {
namespace {

constexpr double kInvPhi = 0.6180339887498949;

Eigen::VectorXd to_unit(const CandidateSet& c) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k) u(static_cast<Eigen::Index>(k)) = (c.points[k] - c.range.lo) / c.range.width();
  return u;
}

Eigen::MatrixXd correlation(const Eigen::VectorXd& u, GpHyper h) {
  const Eigen::Index Q = u.size();
  Eigen::MatrixXd A(Q, Q);
  for (Eigen::Index a = 0; a < Q; ++a) {
    for (Eigen::Index b = 0; b < Q; ++b) {
      const double d = u(a) - u(b);
      A(a, b) = std::exp(-h.corr_decay * d * d);
    }
    A(a, a) += h.nugget;
  }
  return A;
}

struct Standardized {
  double mu;
  double sigma;
  Eigen::VectorXd z;
};

Standardized standardize(const CandidateSet& c) {
  const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(c.values.data(), static_cast<Eigen::Index>(c.values.size()));
  Standardized s;
  s.mu = v.mean();
  s.sigma = std::sqrt((v.array() - s.mu).square().sum() / static_cast<double>(v.size() - 1));
  s.z = s.sigma > 0.0 ? Eigen::VectorXd((v.array() - s.mu) / s.sigma) : Eigen::VectorXd::Zero(v.size());
  return s;
}

double log_lik(const Eigen::VectorXd& u, const Eigen::VectorXd& z, GpHyper h) {
  Eigen::LLT<Eigen::MatrixXd> llt(correlation(u, h));
  if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
  const Eigen::VectorXd alpha = llt.solve(z);
  const double quad = z.dot(alpha);
  double logdet = 0.0;
  const auto& L = llt.matrixLLT();
  for (Eigen::Index i = 0; i < L.rows(); ++i) {
    if (!(L(i, i) > 0.0)) return -std::numeric_limits<double>::infinity();
    logdet += 2.0 * std::log(L(i, i));
  }
  const double val = -0.5 * logdet - 0.5 * quad - 0.5 * static_cast<double>(z.size()) * std::log(2.0 * std::numbers::pi);
  return std::isfinite(val) ? val : -std::numeric_limits<double>::infinity();
}

/// Golden-section maximization of f on [a, b].
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, int iters = 40) {
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < iters; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace

void CandidateSet::validate() const {
  if (points.size() != values.size()) throw DomainError("candidate points and values differ in length");
  if (points.size() < 3) throw DomainError("GP emulator needs at least 3 candidate points");
  if (!(range.lo < range.hi)) throw DomainError("candidate interval is empty");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!std::isfinite(values[k])) throw DomainError("candidate values must be finite");
    if (k > 0 && !(points[k] > points[k - 1])) throw DomainError("candidate points must be sorted and distinct");
  }
}

std::vector<double> space_filling_1d(const Interval& range, std::size_t count) {
  if (count < 2) throw DomainError("space-filling set needs at least 2 points");
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k)
    out[k] = range.from_unit(static_cast<double>(k) / static_cast<double>(count - 1));
  out.back() = range.hi;
  return out;
}

double gp_log_likelihood(const CandidateSet& candidates, GpHyper hyper) {
  candidates.validate();
  const Standardized s = standardize(candidates);
  return log_lik(to_unit(candidates), s.z, hyper);
}

double GpFit::predict(double x) const {
  if (degenerate_) return mu_hat_;
  const double u = (x - training_.range.lo) / training_.range.width();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < unit_points_.size(); ++k) {
    const double d = u - unit_points_(k);
    acc += std::exp(-hyper_.corr_decay * d * d) * weights_(k);
  }
  return mu_hat_ + sigma_hat_ * acc;
}

GpFit fit_gp_fixed(const CandidateSet& candidates, GpHyper hyper) {
  candidates.validate();
  if (!(hyper.corr_decay > 0.0) || !(hyper.nugget > 0.0)) throw DomainError("GP hyperparameters must be positive");
  GpFit fit;
  fit.training_ = candidates;
  fit.unit_points_ = to_unit(candidates);
  const Standardized s = standardize(candidates);
  fit.mu_hat_ = s.mu;
  fit.sigma_hat_ = s.sigma;
  fit.z_ = s.z;
  fit.hyper_ = hyper;
  if (!(s.sigma > 0.0)) {
    fit.degenerate_ = true;
    return fit;
  }
  fit.factor_.compute(correlation(fit.unit_points_, hyper));
  if (fit.factor_.info() != Eigen::Success) throw NumericalError("fit_gp", "correlation matrix is not positive definite");
  fit.weights_ = fit.factor_.solve(fit.z_);
  fit.log_likelihood_ = log_lik(fit.unit_points_, fit.z_, hyper);
  return fit;
}

GpFit fit_gp(const CandidateSet& candidates, const GpOptions& opt) {
  candidates.validate();
  if (opt.grid < 2) throw DomainError("hyperparameter grid needs at least 2 points per axis");
  const Standardized s = standardize(candidates);
  if (!(s.sigma > 0.0)) {
    GpFit fit = fit_gp_fixed(candidates, {1.0, std::pow(10.0, opt.log10_nugget_hi)});
    return fit;
  }
  const Eigen::VectorXd u = to_unit(candidates);
  auto ll = [&](double ld, double ln) { return log_lik(u, s.z, {std::pow(10.0, ld), std::pow(10.0, ln)}); };

  const double step_d = (opt.log10_decay_hi - opt.log10_decay_lo) / static_cast<double>(opt.grid - 1);
  const double step_n = (opt.log10_nugget_hi - opt.log10_nugget_lo) / static_cast<double>(opt.grid - 1);
  double best_d = opt.log10_decay_lo, best_n = opt.log10_nugget_hi;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < opt.grid; ++a) {
    for (std::size_t b = 0; b < opt.grid; ++b) {
      const double ld = opt.log10_decay_lo + step_d * static_cast<double>(a);
      const double ln = opt.log10_nugget_lo + step_n * static_cast<double>(b);
      const double v = ll(ld, ln);
      if (v > best) {
        best = v;
        best_d = ld;
        best_n = ln;
      }
    }
  }
  if (!std::isfinite(best)) throw NumericalError("fit_gp", "no hyperparameter pair gives a finite likelihood");

  for (std::size_t round = 0; round < opt.refine_rounds; ++round) {
    {
      const double a = std::max(opt.log10_decay_lo, best_d - step_d);
      const double b = std::min(opt.log10_decay_hi, best_d + step_d);
      const auto [x, v] = golden_max([&](double ld) { return ll(ld, best_n); }, a, b);
      if (v > best) {
        best = v;
        best_d = x;
      }
    }
    {
      const double a = std::max(opt.log10_nugget_lo, best_n - step_n);
      const double b = std::min(opt.log10_nugget_hi, best_n + step_n);
      const auto [x, v] = golden_max([&](double ln) { return ll(best_d, ln); }, a, b);
      if (v > best) {
        best = v;
        best_n = x;
      }
    }
  }
  return fit_gp_fixed(candidates, {std::pow(10.0, best_d), std::pow(10.0, best_n)});
}

double minimize_emulator(const GpFit& fit, double lo, double hi) {
  if (!(lo < hi)) throw DomainError("minimize_emulator needs lo < hi");
  constexpr std::size_t kGrid = 1001;
  const double h = (hi - lo) / static_cast<double>(kGrid - 1);
  std::size_t best_k = 0;
  double best = fit.predict(lo);
  for (std::size_t k = 1; k < kGrid; ++k) {
    const double x = k + 1 == kGrid ? hi : lo + h * static_cast<double>(k);
    const double v = fit.predict(x);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  double x_best = best_k + 1 == kGrid ? hi : lo + h * static_cast<double>(best_k);
  if (fit.degenerate()) return x_best;

  const double a = std::max(lo, x_best - h);
  const double b = std::min(hi, x_best + h);
  const auto [x, neg] = golden_max([&](double x) { return -fit.predict(x); }, a, b);
  if (-neg < best) x_best = std::clamp(x, lo, hi);
  return x_best;
}

}  // namespace acedoe
