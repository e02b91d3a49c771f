#include "acedoe/glm.hpp"

#include <cmath>
#include <random>
#include <string>

#include "acedoe/error.hpp"

namespace acedoe {
namespace {

double softplus(double eta) { return eta > 0.0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

std::size_t param_count(Predictor predictor, std::size_t q) {
  switch (predictor) {
    case Predictor::FirstOrder:
      return 1 + q;
    case Predictor::SecondOrder:
      return 1 + q + q * (q + 1) / 2;
    case Predictor::Helicopter:
      return 2;
  }
  return 0;
}

void check_x(const GlmModel& model, std::span<const double> x) {
  if (x.size() != model.num_vars())
    throw DomainError("point has " + std::to_string(x.size()) + " coordinates, model expects " +
                      std::to_string(model.num_vars()));
}

void check_draw(const GlmModel& model, const ParamDraw& draw) {
  if (static_cast<std::size_t>(draw.beta.size()) != model.num_params())
    throw DomainError("coefficient vector has length " + std::to_string(draw.beta.size()) + ", model has " +
                      std::to_string(model.num_params()) + " parameters");
  if (!(draw.phi > 0.0)) throw DomainError("dispersion must be positive");
}

}  // namespace

std::string_view to_string(Family f) {
  switch (f) {
    case Family::BernoulliLogit:
      return "bernoulli-logit";
    case Family::PoissonLog:
      return "poisson-log";
    case Family::GammaLog:
      return "gamma-log";
  }
  return "?";
}

std::string_view to_string(Predictor p) {
  switch (p) {
    case Predictor::FirstOrder:
      return "first-order";
    case Predictor::SecondOrder:
      return "second-order";
    case Predictor::Helicopter:
      return "helicopter";
  }
  return "?";
}

void HelicopterGeometry::validate() const {
  for (double v : {drop_height, gravity, air_density, paper_density, body_length, tail_width})
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("helicopter constants must be positive");
}

double helicopter_mass(std::span<const double> x, const HelicopterGeometry& geom) {
  if (x.size() != 3) throw DomainError("helicopter point needs 3 coordinates");
  return geom.paper_density * (2.0 * x[1] * (x[0] + geom.body_length) + x[2] * geom.tail_width);
}

double helicopter_neglog_pi1(std::span<const double> x, const HelicopterGeometry& geom) {
  if (x.size() != 3) throw DomainError("helicopter point needs 3 coordinates");
  if (!(x[0] > 0.0)) throw DomainError("rotor length must be positive");
  const double m = helicopter_mass(x, geom);
  if (!(m > 0.0)) throw DomainError("helicopter mass must be positive");
  return std::log(geom.air_density * x[0] * x[0] * x[0] / m);
}

GlmModel::GlmModel(Family family, Predictor predictor, std::size_t num_vars, HelicopterGeometry geom)
    : family_(family),
      predictor_(predictor),
      num_vars_(num_vars),
      num_params_(param_count(predictor, num_vars)),
      geom_(geom) {
  if (num_vars_ < 1) throw DomainError("model needs at least one variable");
  if (predictor_ == Predictor::Helicopter) {
    if (num_vars_ != 3) throw DomainError("helicopter predictor needs exactly 3 variables");
    geom_.validate();
  }
}

Eigen::VectorXd GlmModel::features(std::span<const double> x) const {
  check_x(*this, x);
  Eigen::VectorXd f(static_cast<Eigen::Index>(num_params_));
  f(0) = 1.0;
  switch (predictor_) {
    case Predictor::FirstOrder:
      for (std::size_t j = 0; j < num_vars_; ++j) f(static_cast<Eigen::Index>(1 + j)) = x[j];
      break;
    case Predictor::SecondOrder: {
      Eigen::Index c = 1;
      for (std::size_t j = 0; j < num_vars_; ++j) f(c++) = x[j];
      for (std::size_t j = 0; j < num_vars_; ++j)
        for (std::size_t k = j; k < num_vars_; ++k) f(c++) = x[j] * x[k];
      break;
    }
    case Predictor::Helicopter:
      f(1) = helicopter_neglog_pi1(x, geom_);
      break;
  }
  return f;
}

double GlmModel::offset(std::span<const double> x) const {
  check_x(*this, x);
  if (predictor_ != Predictor::Helicopter) return 0.0;
  if (!(x[0] > 0.0)) throw DomainError("rotor length must be positive");
  return std::log(geom_.drop_height / std::sqrt(geom_.gravity * x[0]));
}

Eigen::MatrixXd GlmModel::model_matrix(const Design& design) const {
  if (design.vars() != num_vars_) throw DomainError("design dimension does not match model");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(design.runs()), static_cast<Eigen::Index>(num_params_));
  for (std::size_t i = 0; i < design.runs(); ++i) X.row(static_cast<Eigen::Index>(i)) = features(design.row(i)).transpose();
  return X;
}

Eigen::VectorXd GlmModel::offsets(const Design& design) const {
  if (design.vars() != num_vars_) throw DomainError("design dimension does not match model");
  Eigen::VectorXd o(static_cast<Eigen::Index>(design.runs()));
  for (std::size_t i = 0; i < design.runs(); ++i) o(static_cast<Eigen::Index>(i)) = offset(design.row(i));
  return o;
}

void GlmModel::check_prior(const PriorSpec& prior) const {
  if (prior.num_coefficients() != num_params_)
    throw DomainError("prior has " + std::to_string(prior.num_coefficients()) + " coefficient marginals, model has " +
                      std::to_string(num_params_) + " parameters");
  if (has_dispersion() && !prior.dispersion())
    throw DomainError("gamma family needs a dispersion prior");
  if (!has_dispersion() && prior.dispersion())
    throw DomainError(std::string(to_string(family_)) + " family has fixed dispersion; remove the dispersion prior");
}

double inverse_link(Family family, double eta) {
  if (family == Family::BernoulliLogit) {
    if (eta >= 0.0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
  }
  return std::exp(eta);
}

double linear_predictor(const GlmModel& model, const ParamDraw& draw, std::span<const double> x) {
  check_draw(model, draw);
  return model.offset(x) + model.features(x).dot(draw.beta);
}

double mean_response(const GlmModel& model, const ParamDraw& draw, std::span<const double> x) {
  return inverse_link(model.family(), linear_predictor(model, draw, x));
}

double log_likelihood(const GlmModel& model, const ParamDraw& draw, const Design& design, std::span<const double> y) {
  check_draw(model, draw);
  if (y.size() != design.runs()) throw DomainError("response vector length does not match design");
  double total = 0.0;
  for (std::size_t i = 0; i < design.runs(); ++i) {
    const double eta = linear_predictor(model, draw, design.row(i));
    const double yi = y[i];
    switch (model.family()) {
      case Family::BernoulliLogit:
        if (yi != 0.0 && yi != 1.0) throw DomainError("bernoulli response must be 0 or 1");
        total += yi * eta - softplus(eta);
        break;
      case Family::PoissonLog:
        if (!(yi >= 0.0) || yi != std::floor(yi)) throw DomainError("poisson response must be a nonnegative integer");
        total += yi * eta - std::exp(eta) - std::lgamma(yi + 1.0);
        break;
      case Family::GammaLog: {
        if (!(yi > 0.0)) throw DomainError("gamma response must be positive");
        const double shape = 1.0 / draw.phi;
        const double scale = draw.phi * std::exp(eta);
        total += (shape - 1.0) * std::log(yi) - yi / scale - std::lgamma(shape) - shape * std::log(scale);
        break;
      }
    }
  }
  return total;
}

double glm_weight(Family family, double eta, double phi) {
  switch (family) {
    case Family::BernoulliLogit: {
      const double mu = inverse_link(family, eta);
      return mu * (1.0 - mu);
    }
    case Family::PoissonLog:
      return std::exp(eta);
    case Family::GammaLog:
      return 1.0 / phi;
  }
  return 0.0;
}

FisherInfo fisher_information(const GlmModel& model, const ParamDraw& draw, const Design& design) {
  check_draw(model, draw);
  const Eigen::MatrixXd X = model.model_matrix(design);
  const Eigen::VectorXd eta = model.offsets(design) + X * draw.beta;
  Eigen::VectorXd w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) w(i) = glm_weight(model.family(), eta(i), draw.phi);
  Eigen::MatrixXd M = X.transpose() * w.asDiagonal() * X;
  M = 0.5 * (M + M.transpose()).eval();
  return {std::move(M), std::move(w)};
}

namespace {

double draw_response(Family family, double eta, double phi, Rng& rng) {
  const double mu = inverse_link(family, eta);
  switch (family) {
    case Family::BernoulliLogit:
      return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < mu ? 1.0 : 0.0;
    case Family::PoissonLog:
      if (!(mu > 0.0)) return 0.0;
      return static_cast<double>(std::poisson_distribution<long long>(mu)(rng));
    case Family::GammaLog:
      return std::gamma_distribution<double>(1.0 / phi, phi * mu)(rng);
  }
  return 0.0;
}

}  // namespace

Eigen::VectorXd sample_response(const GlmModel& model, const ParamDraw& draw, const Design& design, Rng& rng) {
  check_draw(model, draw);
  Eigen::VectorXd y(static_cast<Eigen::Index>(design.runs()));
  for (std::size_t i = 0; i < design.runs(); ++i)
    y(static_cast<Eigen::Index>(i)) =
        draw_response(model.family(), linear_predictor(model, draw, design.row(i)), draw.phi, rng);
  return y;
}

Eigen::MatrixXd linear_predictors(const GlmModel& model, const DrawSet& draws, const Design& design) {
  if (static_cast<std::size_t>(draws.beta.cols()) != model.num_params())
    throw DomainError("draws do not match the model's parameter count");
  return predictor_table(draws.beta, model.model_matrix(design), model.offsets(design));
}

Eigen::MatrixXd predictor_table(const Eigen::MatrixXd& beta, const Eigen::MatrixXd& X, const Eigen::VectorXd& offset) {
  const Eigen::Index B = beta.rows(), n = X.rows(), p = X.cols();
  Eigen::MatrixXd eta(B, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < B; ++k) {
      double s = offset(i);
      for (Eigen::Index j = 0; j < p; ++j) s += beta(k, j) * X(i, j);
      eta(k, i) = s;
    }
  }
  return eta;
}

Eigen::MatrixXd sample_responses(const GlmModel& model, const DrawSet& draws, const Eigen::MatrixXd& eta, Rng& rng) {
  Eigen::MatrixXd y(eta.rows(), eta.cols());
  for (Eigen::Index k = 0; k < eta.rows(); ++k)
    for (Eigen::Index i = 0; i < eta.cols(); ++i) y(k, i) = draw_response(model.family(), eta(k, i), draws.phi(k), rng);
  return y;
}

Eigen::MatrixXd response_statistics(Family family, const Eigen::MatrixXd& y) {
  const Eigen::Index B = y.rows(), n = y.cols();
  Eigen::MatrixXd t(B, n + 2);
  t.leftCols(n) = y;
  t.col(n + 1).setOnes();
  switch (family) {
    case Family::BernoulliLogit:
      t.col(n).setZero();
      break;
    case Family::PoissonLog:
      for (Eigen::Index k = 0; k < B; ++k) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += std::lgamma(y(k, i) + 1.0);
        t(k, n) = s;
      }
      break;
    case Family::GammaLog:
      t.col(n) = y.array().log().rowwise().sum();
      break;
  }
  return t;
}

Eigen::MatrixXd draw_statistics(Family family, const Eigen::MatrixXd& eta, const Eigen::VectorXd& phi) {
  const Eigen::Index B = eta.rows(), n = eta.cols();
  Eigen::MatrixXd c(B, n + 2);
  switch (family) {
    case Family::BernoulliLogit:
      c.leftCols(n) = eta;
      c.col(n).setZero();
      for (Eigen::Index b = 0; b < B; ++b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += softplus(eta(b, i));
        c(b, n + 1) = -s;
      }
      break;
    case Family::PoissonLog:
      c.leftCols(n) = eta;
      c.col(n).setConstant(-1.0);
      c.col(n + 1) = -eta.array().exp().rowwise().sum();
      break;
    case Family::GammaLog:
      for (Eigen::Index b = 0; b < B; ++b) {
        const double shape = 1.0 / phi(b);
        const double nn = static_cast<double>(n);
        double eta_sum = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
          c(b, i) = -std::exp(-eta(b, i)) * shape;
          eta_sum += eta(b, i);
        }
        c(b, n) = shape - 1.0;
        c(b, n + 1) = -nn * std::lgamma(shape) - nn * shape * std::log(phi(b)) - shape * eta_sum;
      }
      break;
  }
  return c;
}

}  // namespace acedoe
