#pragma once

#include <vector>

#include "acedoe/ace.hpp"
#include "acedoe/design.hpp"
#include "acedoe/glm.hpp"
#include "acedoe/loss.hpp"
#include "acedoe/prior.hpp"

namespace acedoe::cases {

// Logistic regression, second-order predictor in three variables.
GlmModel logistic_model();
PriorSpec logistic_prior();
std::vector<Interval> logistic_bounds();
constexpr std::size_t kLogisticRuns = 16;

// Poisson log-linear model in five variables with known zero intercept.
GlmModel poisson_model();
PriorSpec poisson_prior(double alpha);
std::vector<Interval> poisson_bounds();
Eigen::VectorXd poisson_prior_means(double alpha);
constexpr std::size_t kPoissonRuns = 6;

// Paper-helicopter Gamma regression built from dimensional analysis.
GlmModel helicopter_model(const HelicopterGeometry& geom = {});
PriorSpec helicopter_prior();
/// (rotor length, rotor width, tail length)
std::vector<Interval> helicopter_bounds();
/// The 4^3 prediction grid.
PointMatrix helicopter_grid();
constexpr std::size_t kHelicopterRuns = 4;

DesignProblem logistic_problem(LossSpec loss);
DesignProblem poisson_problem(double alpha, LossSpec loss);
DesignProblem helicopter_problem(LossSpec loss);

}  // namespace acedoe::cases
