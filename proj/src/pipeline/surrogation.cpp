#include <string>

#include "qsurr/parallel.hpp"
#include "qsurr/pipeline.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::pipeline {

Eigen::VectorXd evaluate(const CircuitConfig& cfg, const ParameterSet& params,
                         const PointMatrix& points, const NoiseConfig& noise) {
  cfg.validate();
  params.validate_for(cfg);
  noise.validate();
  if (points.cols() != cfg.d_features)
    throw ShapeError("points have " + std::to_string(points.cols()) +
                     " features, circuit expects " + std::to_string(cfg.d_features));
  Eigen::VectorXd y(points.rows());
  parallel_for(static_cast<std::size_t>(points.rows()), [&](std::size_t r) {
    std::vector<double> x(points.cols());
    for (Eigen::Index c = 0; c < points.cols(); ++c) x[c] = points(r, c);
    NoiseConfig local = noise;
    local.seed = derive_seed(noise.seed, r);
    y(r) = qsim::expectation(cfg, params, x, local);
  });
  return y;
}

SurrogateModel surrogate_exact(const CircuitConfig& cfg, const ParameterSet& params,
                               std::uint64_t cap, double rcond) {
  const auto desc = spectrum::omega_max_of(cfg);
  if (spectrum::lattice_size(desc) > cap) {
    ResourceEstimate est = estimate_memory(cfg);
    throw ExactInfeasible("exact surrogation needs a " + est.grid_size.str() + " x " +
                              est.lattice_size.str() + " design matrix (" +
                              est.design_matrix_bytes.str() + " bytes, tier " +
                              to_string(est.feasible_on) + "), above the lattice cap of " +
                              std::to_string(cap),
                          std::move(est));
  }
  const auto grid = spectrum::full_grid(desc, cap);
  const auto freqs = spectrum::enumerate_lattice(desc, cap);
  const Eigen::VectorXd y = evaluate(cfg, params, grid.points);
  const auto design = surrogate::build_complex_design(grid.points, freqs);
  const auto result = surrogate::fit(design, y, rcond);
  auto model = surrogate::from_complex_fit(desc, freqs, result, surrogate::Mode::Exact);
  model.source_fingerprint = qsim::fingerprint(cfg, params);
  return model;
}

SurrogateModel fit_rff(const spectrum::SpectrumDescriptor& desc, const PointMatrix& points,
                       const Eigen::VectorXd& targets, const RffOptions& opts) {
  if (opts.n_frequencies == 0) throw PreconditionError("number of frequencies must be positive");
  if (points.rows() == 0) throw PreconditionError("surrogation needs at least one data point");
  if (points.rows() != targets.size()) throw ShapeError("points/targets length mismatch");

  Eigen::MatrixXd freqs;
  if (opts.sampling == spectrum::SamplingMode::Integer) {
    freqs = spectrum::to_matrix(spectrum::sample_distinct(desc, opts.n_frequencies, opts.seed));
  } else {
    freqs = spectrum::sample_continuous(desc, opts.n_frequencies, opts.seed);
  }
  const auto design = surrogate::build_real_design(points, freqs);
  const auto result = surrogate::fit(design, targets, opts.rcond);
  return surrogate::from_real_fit(desc, freqs, result, surrogate::Mode::Rff);
}

SurrogateModel surrogate_rff(const CircuitConfig& cfg, const ParameterSet& params,
                             const PointMatrix& points, const RffOptions& opts,
                             const NoiseConfig& noise) {
  const auto desc = spectrum::omega_max_of(cfg);
  if (opts.n_frequencies == 0) throw PreconditionError("number of frequencies must be positive");
  if (points.rows() == 0) throw PreconditionError("surrogation needs at least one data point");
  const Eigen::VectorXd y = evaluate(cfg, params, points, noise);
  auto model = fit_rff(desc, points, y, opts);
  model.source_fingerprint = qsim::fingerprint(cfg, params);
  return model;
}

}  // namespace qsurr::pipeline
