#include "acedoe/prior.hpp"

#include <cmath>
#include <random>

#include "acedoe/error.hpp"

namespace acedoe {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const Marginal& m) {
  std::visit(Overloaded{
                 [](const Uniform& u) {
                   if (!(u.lo < u.hi)) throw DomainError("uniform marginal needs lo < hi");
                 },
                 [](const Normal& n) {
                   if (!(n.variance > 0.0)) throw DomainError("normal marginal needs positive variance");
                 },
                 [](const PointMass& p) {
                   if (!std::isfinite(p.value)) throw DomainError("point mass must be finite");
                 },
             },
             m);
}

double draw_one(const Marginal& m, Rng& rng) {
  return std::visit(Overloaded{
                        [&](const Uniform& u) { return std::uniform_real_distribution<double>(u.lo, u.hi)(rng); },
                        [&](const Normal& n) {
                          return std::normal_distribution<double>(n.mean, std::sqrt(n.variance))(rng);
                        },
                        [](const PointMass& p) { return p.value; },
                    },
                    m);
}

}  // namespace

double marginal_mean(const Marginal& m) {
  return std::visit(Overloaded{
                        [](const Uniform& u) { return 0.5 * (u.lo + u.hi); },
                        [](const Normal& n) { return n.mean; },
                        [](const PointMass& p) { return p.value; },
                    },
                    m);
}

bool is_point_mass(const Marginal& m) { return std::holds_alternative<PointMass>(m); }

PriorSpec::PriorSpec(std::vector<Marginal> coefficients, std::optional<Marginal> dispersion)
    : coefficients_(std::move(coefficients)), dispersion_(std::move(dispersion)) {
  if (coefficients_.empty()) throw DomainError("prior needs at least one coefficient marginal");
  for (const auto& m : coefficients_) validate(m);
  if (dispersion_) {
    validate(*dispersion_);
    // phi must stay positive for every draw
    const bool positive = std::visit(Overloaded{
                                         [](const Uniform& u) { return u.lo > 0.0; },
                                         [](const Normal&) { return false; },
                                         [](const PointMass& p) { return p.value > 0.0; },
                                     },
                                     *dispersion_);
    if (!positive) throw DomainError("dispersion prior must have positive support (uniform or point mass)");
  }
}

Eigen::VectorXd PriorSpec::coefficient_means() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(coefficients_.size()));
  for (std::size_t j = 0; j < coefficients_.size(); ++j) out(static_cast<Eigen::Index>(j)) = marginal_mean(coefficients_[j]);
  return out;
}

bool PriorSpec::degenerate() const {
  for (const auto& m : coefficients_)
    if (!is_point_mass(m)) return false;
  return !dispersion_ || is_point_mass(*dispersion_);
}

DrawSet sample_prior(const PriorSpec& prior, std::size_t count, Rng& rng) {
  if (count < 1) throw DomainError("sample_prior needs count >= 1");
  const auto p = static_cast<Eigen::Index>(prior.num_coefficients());
  DrawSet out{Eigen::MatrixXd(static_cast<Eigen::Index>(count), p),
              Eigen::VectorXd::Ones(static_cast<Eigen::Index>(count))};
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(count); ++k) {
    for (Eigen::Index j = 0; j < p; ++j) out.beta(k, j) = draw_one(prior.coefficients()[static_cast<std::size_t>(j)], rng);
    if (prior.dispersion()) out.phi(k) = draw_one(*prior.dispersion(), rng);
  }
  return out;
}

}  // namespace acedoe
