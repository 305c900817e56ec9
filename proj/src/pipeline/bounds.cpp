#include <cmath>
#include <algorithm>
#include <limits>
#include <string>
#include <numbers>

#include "qsurr/bounds.hpp"
#include "qsurr/error.hpp"

namespace qsurr::bounds {

void BoundParams::validate() const {
  if (d < 1) throw PreconditionError("d must be at least 1");
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw PreconditionError("delta must lie in (0, 1)");
  if (!(sigma_p >= 0.0)) throw PreconditionError("sigma_p must be non-negative");
  if (!(diameter > 0.0)) throw PreconditionError("diameter must be positive");
}

BoundParams BoundParams::for_spectrum(const spectrum::SpectrumDescriptor& desc, double epsilon,
                                      double delta) {
  BoundParams p;
  p.d = desc.d();
  p.epsilon = epsilon;
  p.delta = delta;
  p.sigma_p = spectrum::sigma_p(desc);
  p.diameter = 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(desc.d()));
  return p;
}

double beta_d(int d) {
  if (d < 1) throw PreconditionError("beta_d needs d >= 1");
  const double h = d / 2.0;
  const double dd = d;
  return (std::pow(h, -dd / (dd + 2.0)) + std::pow(h, 2.0 / (dd + 2.0))) *
         std::pow(2.0, (6.0 * dd + 2.0) / (dd + 2.0));
}

double alpha_epsilon(double epsilon, double kernel_sup_term) {
  if (!(epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  return std::min(1.0, kernel_sup_term + epsilon / 3.0);
}

namespace {

double exponent_2(int d) { return 2.0 / (1.0 + 2.0 / d); }

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw PreconditionError("alpha must be positive");
}

}  // namespace

double max_error_probability(const BoundParams& p, double n_features, double alpha) {
  p.validate();
  check_alpha(alpha);
  const double ratio = p.sigma_p * p.diameter / p.epsilon;
  return beta_d(p.d) * std::pow(ratio, exponent_2(p.d)) *
         std::exp(-n_features * p.epsilon * p.epsilon / (8.0 * (p.d + 2) * alpha));
}

double max_error_probability_clipped(const BoundParams& p, double n_features, double alpha) {
  return std::min(1.0, max_error_probability(p, n_features, alpha));
}

double min_features_real(const BoundParams& p, double alpha) {
  p.validate();
  check_alpha(alpha);
  const double scale = p.sigma_p * p.diameter;
  if (p.epsilon > scale)
    throw DomainTooSmall("epsilon " + std::to_string(p.epsilon) + " exceeds sigma_p * l = " +
                         std::to_string(scale));
  const double lead = 8.0 * (p.d + 2) * alpha / (p.epsilon * p.epsilon);
  return lead * (exponent_2(p.d) * std::log(scale / p.epsilon) + std::log(beta_d(p.d) / p.delta));
}

std::uint64_t min_features(const BoundParams& p, double alpha) {
  const double v = std::ceil(min_features_real(p, alpha));
  if (!(v < 1.8e19)) throw NumericalError("feature bound overflows a 64-bit count");
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

double lrr_features_real(const BoundParams& p) {
  p.validate();
  const double lam = p.lambda();
  if (!(lam > 0.0)) throw PreconditionError("lambda must be positive");
  if (!(p.c1 > 0.0) || !(p.c2 > 0.0)) throw PreconditionError("C1 and C2 must be positive");
  if (!(p.domain_size >= 1.0)) throw PreconditionError("|X| must be at least 1");
  if (p.n_layers < 1) throw PreconditionError("n_layers must be positive");
  const double l2 = static_cast<double>(p.n_layers) * p.n_layers;
  const double lead =
      p.d * p.c1 * (1.0 + lam) * (1.0 + lam) / (std::pow(lam, 4) * p.epsilon * p.epsilon);
  const double inner = p.c2 * (1.0 + lam) / (lam * lam) - std::log(p.delta);
  if (!(inner > 0.0)) throw NumericalError("ridge bound logarithm argument is not positive");
  return lead * (std::log(p.d * l2 * p.domain_size) + std::log(inner));
}

std::uint64_t lrr_features(const BoundParams& p) {
  const double v = std::ceil(lrr_features_real(p));
  if (!(v < 1.8e19)) throw NumericalError("feature bound overflows a 64-bit count");
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

void to_json(nlohmann::json& j, const BoundParams& p) {
  j = nlohmann::json{{"d", p.d},
                     {"epsilon", p.epsilon},
                     {"delta", p.delta},
                     {"sigma_p", p.sigma_p},
                     {"diameter", p.diameter},
                     {"lambda0", p.lambda0},
                     {"train_size", p.train_size},
                     {"lambda", p.lambda()},
                     {"sigma_y2", p.sigma_y2},
                     {"c1", p.c1},
                     {"c2", p.c2},
                     {"n_layers", p.n_layers},
                     {"domain_size", p.domain_size}};
}

}  // namespace qsurr::bounds
