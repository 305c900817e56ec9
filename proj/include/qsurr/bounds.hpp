#pragma once

// Sample-complexity bounds for the number of random Fourier features, and
// empirical checks of the lattice-kernel approximation they are about.
//
//   k(x, y)  = mean over the canonical lattice of cos(w.(x - y))
//   k~(x, y) = mean over D sampled frequencies of cos(w.(x - y))

#include <cstdint>
#include <span>

#include <Eigen/Core>
#include <json.hpp>

#include "qsurr/spectrum.hpp"

namespace qsurr::bounds {

struct BoundParams {
  int d = 1;
  double epsilon = 0.1;
  double delta = 0.05;
  double sigma_p = 1.0;   // sqrt(E ||w||^2)
  double diameter = 1.0;  // domain diameter l
  // Ridge-regression bound inputs.
  double lambda0 = 1.0;
  double train_size = 1.0;  // M; lambda = M * lambda0
  double sigma_y2 = 1.0;
  double c1 = 1.0;  // placeholder constants
  double c2 = 1.0;
  int n_layers = 1;
  double domain_size = 1.0;  // |X|

  double lambda() const { return train_size * lambda0; }
  void validate() const;

  /// sigma_p from the lattice (closed form) and diameter 2 pi sqrt(d).
  static BoundParams for_spectrum(const spectrum::SpectrumDescriptor& desc, double epsilon,
                                  double delta);
};

/// ((d/2)^(-d/(d+2)) + (d/2)^(2/(d+2))) * 2^((6d+2)/(d+2))
double beta_d(int d);

/// min(1, kernel_sup_term + epsilon / 3)
double alpha_epsilon(double epsilon, double kernel_sup_term);

/// beta_d (sigma_p l / eps)^(2/(1+2/d)) exp(-D eps^2 / (8 (d+2) alpha)), unclipped.
double max_error_probability(const BoundParams& p, double n_features, double alpha);
double max_error_probability_clipped(const BoundParams& p, double n_features, double alpha);

/// Right-hand side of the feature-count bound, before rounding.
/// Throws DomainTooSmall when epsilon > sigma_p * l.
double min_features_real(const BoundParams& p, double alpha);
/// ceil of min_features_real, at least 1.
std::uint64_t min_features(const BoundParams& p, double alpha);

/// Ridge-regression feature count, order of magnitude only (c1, c2 are placeholders):
/// d c1 (1+lambda)^2 / (lambda^4 eps^2) (log(d L^2 |X|) + log(c2 (1+lambda)/lambda^2 - log delta))
double lrr_features_real(const BoundParams& p);
std::uint64_t lrr_features(const BoundParams& p);

/// mean_k cos(freqs_k . delta); rows of freqs are frequencies.
double kernel_value(const Eigen::MatrixXd& freqs, std::span<const double> delta);

struct KernelSup {
  double kernel_sup_term = 0.0;    // sup of 1/2 + 1/2 k(2x, 2y) - k(x, y)
  double sup_kernel_error = 0.0;   // sup |k(x - y) - k~(x - y)|
};

/// Evaluates both kernels at `trial_points` uniform pairs in [0, 2pi)^(2d).
/// Throws CapExceeded if the canonical lattice has more than `cap` vectors.
KernelSup empirical_kernel_sup(const spectrum::SpectrumDescriptor& desc,
                               std::span<const spectrum::FrequencyVector> sample,
                               std::size_t trial_points, std::uint64_t seed,
                               std::uint64_t cap = spectrum::kDefaultEnumerationCap);

void to_json(nlohmann::json& j, const BoundParams& p);

}  // namespace qsurr::bounds
