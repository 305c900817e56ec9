#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <random>

#include "qsurr/bounds.hpp"
#include "qsurr/error.hpp"
#include "qsurr/kernels.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::bounds {

double kernel_value(const Eigen::MatrixXd& freqs, std::span<const double> delta) {
  if (freqs.rows() == 0) throw PreconditionError("kernel needs at least one frequency");
  if (static_cast<Eigen::Index>(delta.size()) != freqs.cols())
    throw ShapeError("kernel argument has the wrong dimension");
  const auto n = static_cast<std::size_t>(freqs.rows());
  std::vector<double> phase(n, 0.0);
  const auto& k = kernels::active();
  for (std::size_t t = 0; t < delta.size(); ++t)
    if (delta[t] != 0.0) k.axpy(phase.data(), freqs.col(t).data(), delta[t], n);
  double s = 0.0;
  for (double v : phase) s += std::cos(v);
  return s / static_cast<double>(n);
}

KernelSup empirical_kernel_sup(const spectrum::SpectrumDescriptor& desc,
                               std::span<const spectrum::FrequencyVector> sample,
                               std::size_t trial_points, std::uint64_t seed, std::uint64_t cap) {
  desc.validate();
  if (sample.empty()) throw PreconditionError("frequency sample is empty");
  if (trial_points == 0) throw PreconditionError("trial_points must be positive");
  const auto full = spectrum::to_matrix(spectrum::enumerate_canonical(desc, cap));
  if (full.rows() == 0) throw PreconditionError("spectrum has no nonzero frequencies");
  const auto sampled = spectrum::to_matrix(sample);
  if (sampled.cols() != full.cols()) throw ShapeError("sample dimension does not match spectrum");

  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  const int d = desc.d();
  std::vector<double> diff(d), diff2(d);
  KernelSup out;
  out.kernel_sup_term = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < trial_points; ++i) {
    for (int t = 0; t < d; ++t) {
      const double x = u(rng);
      const double y = u(rng);
      diff[t] = x - y;
      diff2[t] = 2.0 * diff[t];
    }
    const double k1 = kernel_value(full, diff);
    const double k2 = kernel_value(full, diff2);
    const double ks = kernel_value(sampled, diff);
    out.kernel_sup_term = std::max(out.kernel_sup_term, 0.5 + 0.5 * k2 - k1);
    out.sup_kernel_error = std::max(out.sup_kernel_error, std::abs(k1 - ks));
  }
  return out;
}

}  // namespace qsurr::bounds
