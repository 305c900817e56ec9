#pragma once

// Surrogation procedures (full-grid exact and dataset/sampled-frequency RFF),
// the parameter-shift trainer and the dense-design memory estimator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "qsurr/error.hpp"
#include "qsurr/qsim.hpp"
#include "qsurr/spectrum.hpp"
#include "qsurr/surrogate.hpp"

namespace qsurr::pipeline {

using qsim::CircuitConfig;
using qsim::NoiseConfig;
using qsim::ParameterSet;
using spectrum::BigInt;
using spectrum::PointMatrix;
using surrogate::SurrogateModel;

// ---------------------------------------------------------------------------
// Memory estimate

enum class Tier { Laptop, Workstation, Hpc, Infeasible };

inline constexpr double kLaptopBytes = 16e9;
inline constexpr double kWorkstationBytes = 8e12;
inline constexpr double kHpcBytes = 1.5e15;

struct ResourceEstimate {
  BigInt grid_size;     // |T|
  BigInt lattice_size;  // |Omega|
  BigInt design_matrix_bytes;
  int bytes_per_entry = 16;
  Tier feasible_on = Tier::Laptop;
};

/// Dense complex design matrix of the full-grid method: |T| * |Omega| * bytes_per_entry.
ResourceEstimate estimate_memory(const CircuitConfig& cfg, int bytes_per_entry = 16);
Tier classify(const BigInt& bytes);
std::string to_string(Tier t);

/// Largest qubit count (one feature per qubit) whose dense design fits in `bytes`.
int max_qubits_within(double bytes, int n_layers, int bytes_per_entry = 16);

/// Per tier and layer count: the qubit limit of the dense-design formula next to the
/// commonly quoted limits, flagging disagreements.
nlohmann::json table_discrepancy_report(int bytes_per_entry = 16);

void to_json(nlohmann::json& j, const ResourceEstimate& e);

/// Exact surrogation refused because the lattice exceeds the cap.
struct ExactInfeasible : CapExceeded {
  ExactInfeasible(const std::string& what, ResourceEstimate e)
      : CapExceeded(what), estimate(std::move(e)) {}
  ResourceEstimate estimate;
};

// ---------------------------------------------------------------------------
// Circuit sampling and surrogation

/// f(x) for every row. Shot sampling for row r uses seed derive_seed(noise.seed, r).
Eigen::VectorXd evaluate(const CircuitConfig& cfg, const ParameterSet& params,
                         const PointMatrix& points, const NoiseConfig& noise = {});

/// Full grid, full lattice, complex least squares, converted to cos/sin form.
SurrogateModel surrogate_exact(const CircuitConfig& cfg, const ParameterSet& params,
                               std::uint64_t cap = 1'000'000,
                               double rcond = surrogate::kDefaultRcond);

struct RffOptions {
  std::size_t n_frequencies = 0;
  std::uint64_t seed = 0;
  double rcond = surrogate::kDefaultRcond;
  spectrum::SamplingMode sampling = spectrum::SamplingMode::Integer;
};

/// Dataset points instead of the grid, D sampled canonical frequencies, real design.
SurrogateModel surrogate_rff(const CircuitConfig& cfg, const ParameterSet& params,
                             const PointMatrix& points, const RffOptions& opts,
                             const NoiseConfig& noise = {});

/// The fitting half of surrogate_rff for targets that were already sampled.
SurrogateModel fit_rff(const spectrum::SpectrumDescriptor& desc, const PointMatrix& points,
                       const Eigen::VectorXd& targets, const RffOptions& opts);

// ---------------------------------------------------------------------------
// Training

struct TrainConfig {
  double learning_rate = 0.1;
  int max_iters = 100;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> shots;
  double tolerance = 0.0;   // stop when |loss delta| < tolerance (0 disables)
  std::size_t batch_size = 0;  // 0: full batch

  void validate() const;
};

struct TrainResult {
  ParameterSet params;              // lowest full-data loss seen
  std::vector<double> loss_history;  // full-data MSE, index 0 = initial
  int iterations = 0;
};

/// d f(x) / d theta for every angle (flat layout of ParameterSet), by the parameter-shift rule.
std::vector<double> parameter_shift_gradient(const CircuitConfig& cfg, const ParameterSet& params,
                                             std::span<const double> x,
                                             const NoiseConfig& noise = {});

/// Gradient of the mean squared error over (points, targets).
std::vector<double> loss_gradient(const CircuitConfig& cfg, const ParameterSet& params,
                                  const PointMatrix& points, const Eigen::VectorXd& targets,
                                  const NoiseConfig& noise = {});

double loss(const CircuitConfig& cfg, const ParameterSet& params, const PointMatrix& points,
            const Eigen::VectorXd& targets, const NoiseConfig& noise = {});

/// Fixed-step gradient descent on the MSE. Starts from `initial` or from
/// ParameterSet::random(cfg, tc.seed).
TrainResult train(const CircuitConfig& cfg, const PointMatrix& points,
                  const Eigen::VectorXd& targets, const TrainConfig& tc,
                  std::optional<ParameterSet> initial = std::nullopt);

}  // namespace qsurr::pipeline
