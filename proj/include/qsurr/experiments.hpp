#pragma once

// Experiment harness: minimal-resource sweeps over circuit width, the trained
// showcase model and the straight-line extrapolation of sweep curves.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsurr/data.hpp"
#include "qsurr/pipeline.hpp"

namespace qsurr::experiments {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // sum of squared residuals
  double r2 = 1.0;
};

/// Ordinary least squares. Throws PreconditionError with fewer than two distinct xs.
LineFit linear_fit(std::span<const double> xs, std::span<const double> ys);

double median(std::vector<double> v);

// ---------------------------------------------------------------------------
// A trained model together with its train/test data.

struct ModelFixture {
  pipeline::CircuitConfig config;
  pipeline::ParameterSet params;
  data::Dataset train;
  data::Dataset test;
  std::vector<double> loss_history;
};

enum class FixtureSource {
  Trained,  // trig-poly data, PCA, parameter-shift training
  Teacher,  // data generated by a random circuit of the same shape; that circuit is the model
};

struct FixtureOptions {
  FixtureSource source = FixtureSource::Trained;
  int n_qubits = 4;
  int n_layers = 2;
  int base_features = 8;     // synthetic features before PCA; 0 -> n_qubits
  std::size_t size = 500;    // rows before the split
  double train_fraction = 0.8;
  double noise_sd = 0.05;
  std::uint64_t seed = 0;
  pipeline::TrainConfig train;
};

/// Trained: synthetic trig-poly data -> PCA to n_qubits features -> target rescale ->
/// split -> parameter-shift training (PCA skipped when base_features == n_qubits).
/// Teacher: circuit-generated data plus noise_sd Gaussian noise, split; the generating
/// circuit is returned as the model.
ModelFixture make_fixture(const FixtureOptions& opts);

/// Relative test-MSE deviation of an RFF surrogate of `fx` built from `points` rows of
/// the training set (all when points == 0) and `n_frequencies` sampled frequencies.
struct ProbeResult {
  double quantum_test_mse = 0.0;
  double surrogate_test_mse = 0.0;
  double deviation = 0.0;
};

struct ProbeContext {
  const ModelFixture* fixture = nullptr;
  pipeline::NoiseConfig noise;       // noise used for the surrogate's training labels
  Eigen::VectorXd quantum_test_pred;  // reference f on the test set
  Eigen::VectorXd quantum_train_pred; // f on the train set under `noise` (label stream)
};

/// Precomputes the reference predictions. Shot noise on the training labels is drawn
/// once per `label_seed`; the reference uses depolarizing noise only.
ProbeContext make_probe_context(const ModelFixture& fx, const pipeline::NoiseConfig& noise,
                                std::uint64_t label_seed);

ProbeResult probe(const ProbeContext& ctx, std::size_t n_frequencies, std::size_t n_points,
                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// Sweep

enum class Quantity { Frequencies, Datapoints };

std::string to_string(Quantity q);
Quantity quantity_from_string(const std::string& s);

struct SweepConfig {
  Quantity quantity = Quantity::Frequencies;
  int n_min = 4;
  int n_max = 7;
  std::vector<double> thresholds{0.10};
  int seeds = 20;
  std::uint64_t seed = 0;
  pipeline::NoiseConfig noise;
  FixtureOptions fixture;            // n_qubits is overwritten per sweep point
  std::size_t fixed_frequencies = 0;  // datapoints mode; 0 -> min(10^4, canonical count)
  std::size_t max_quantity = 0;       // search budget; 0 -> canonical count / train size
  bool vary_model = false;            // each seed also regenerates data and retrains the model
};

struct SweepRecord {
  int n_qubits = 0;
  double threshold = 0.0;
  /// Smallest quantity whose median deviation over the seed ensemble meets the threshold
  /// (budget + 1 when saturated).
  std::size_t required = 0;
  std::vector<std::size_t> per_seed;  // minimal quantity per seed (budget + 1 when saturated)
  int seeds_used = 0;
  double median = 0.0;  // statistics of per_seed
  double mean = 0.0;
  double std = 0.0;
  std::size_t budget = 0;
  std::string canonical_count;
  bool saturated = false;  // required > budget
};

struct SweepReport {
  Quantity quantity = Quantity::Frequencies;
  std::vector<SweepRecord> records;  // sorted by (n_qubits, threshold)
  std::vector<LineFit> fits;         // one per threshold, on `required`
};

/// Smallest q in [1, budget] with pred(q) true, assuming pred is monotone.
/// Exponential bracket followed by bisection. Returns budget + 1 when pred(budget) fails.
std::size_t minimal_quantity(std::size_t budget, const std::function<bool(std::size_t)>& pred);

/// `fixtures` (optional) supplies prebuilt models keyed by n_qubits - n_min.
SweepReport run_sweep(const SweepConfig& cfg,
                      const std::vector<const ModelFixture*>& fixtures = {});

void to_json(nlohmann::json& j, const SweepRecord& r);
void to_json(nlohmann::json& j, const SweepReport& r);
/// Columns: n_qubits, threshold, quantity_mean, quantity_std
std::string sweep_csv(const SweepReport& r);

// ---------------------------------------------------------------------------
// Showcase

struct ShowcaseReport {
  double quantum_test_mse = 0.0;
  double surrogate_test_mse = 0.0;   // median over seeds
  double frequency_fraction = 0.0;   // D / lattice size
  std::size_t n_frequencies = 0;
  std::string lattice_size;
  std::vector<double> deviations;    // per seed
  double median_deviation = 0.0;
};

ShowcaseReport run_showcase(const ModelFixture& fx, std::size_t n_frequencies, int seeds,
                            std::uint64_t seed);

void to_json(nlohmann::json& j, const ShowcaseReport& r);

}  // namespace qsurr::experiments
