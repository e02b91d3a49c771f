#include "acedoe/case_studies.hpp"

#include "acedoe/error.hpp"

namespace acedoe::cases {

GlmModel logistic_model() { return GlmModel(Family::BernoulliLogit, Predictor::SecondOrder, 3); }

PriorSpec logistic_prior() {
  // (b0, b1, b2, b3, b11, b12, b13, b22, b23, b33)
  std::vector<Marginal> m(10, Uniform{-2.0, 2.0});
  m[1] = Uniform{2.0, 6.0};
  m[2] = Uniform{2.0, 6.0};
  return PriorSpec(std::move(m));
}

std::vector<Interval> logistic_bounds() { return std::vector<Interval>(3, Interval{-1.2872, 1.2872}); }

GlmModel poisson_model() { return GlmModel(Family::PoissonLog, Predictor::FirstOrder, 5); }

PriorSpec poisson_prior(double alpha) {
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  std::vector<Marginal> m{PointMass{0.0}};
  for (int j = 1; j <= 5; ++j) {
    if (j % 2 == 1)
      m.push_back(Uniform{1.0, 1.0 + alpha});
    else
      m.push_back(Uniform{-1.0 - alpha, -1.0});
  }
  return PriorSpec(std::move(m));
}

Eigen::VectorXd poisson_prior_means(double alpha) {
  const PriorSpec p = poisson_prior(alpha);
  return p.coefficient_means().tail(5);
}

std::vector<Interval> poisson_bounds() { return std::vector<Interval>(5, Interval{-1.0, 1.0}); }

GlmModel helicopter_model(const HelicopterGeometry& geom) {
  return GlmModel(Family::GammaLog, Predictor::Helicopter, 3, geom);
}

PriorSpec helicopter_prior() {
  return PriorSpec({Normal{0.102, 0.0625}, Normal{0.460, 0.0625}}, Uniform{0.75, 1.25});
}

std::vector<Interval> helicopter_bounds() { return {{0.07, 0.12}, {0.03, 0.09}, {0.07, 0.12}}; }

PointMatrix helicopter_grid() {
  const double length[4] = {0.07, 0.087, 0.103, 0.12};
  const double width[4] = {0.03, 0.05, 0.07, 0.09};
  PointMatrix g(64, 3);
  Eigen::Index r = 0;
  for (double x1 : length)
    for (double x2 : width)
      for (double x3 : length) {
        g(r, 0) = x1;
        g(r, 1) = x2;
        g(r, 2) = x3;
        ++r;
      }
  return g;
}

DesignProblem logistic_problem(LossSpec loss) {
  return {logistic_model(), logistic_prior(), std::move(loss), logistic_bounds(), kLogisticRuns};
}

DesignProblem poisson_problem(double alpha, LossSpec loss) {
  return {poisson_model(), poisson_prior(alpha), std::move(loss), poisson_bounds(), kPoissonRuns};
}

DesignProblem helicopter_problem(LossSpec loss) {
  if (loss.kind == LossKind::SEL && loss.prediction_grid.rows() == 0) loss.prediction_grid = helicopter_grid();
  return {helicopter_model(), helicopter_prior(), std::move(loss), helicopter_bounds(), kHelicopterRuns};
}

}  // namespace acedoe::cases
