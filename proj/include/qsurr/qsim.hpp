#pragma once

// Statevector simulation of the data-reuploading circuit
//
//   U(x; Theta) = W^L E(x) ... W^1 E(x) W^0
//
// W blocks apply Rx, Ry, Rz on every qubit followed by the CNOTs of the
// coupling map (in list order); E(x) applies Rx(x_f) on every qubit, where
// f is the feature assigned to that qubit. The model output is the mean of
// the single-qubit Z expectations.
//
// Bit ordering: qubit 0 is the most significant bit of the basis index, so
// the bitstring label "q0 q1 ... q(n-1)" reads the index in binary.

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsurr/kernels.hpp"

namespace qsurr::qsim {

using cplx = std::complex<double>;
using kernels::Mat2;

enum class Axis { X = 0, Y = 1, Z = 2 };

inline constexpr int kMaxQubits = 24;

struct CircuitConfig {
  int n_qubits = 1;
  int n_layers = 1;
  int d_features = 1;
  std::vector<std::pair<int, int>> coupling_map;  // (control, target)
  std::vector<int> feature_assignment;            // qubit -> feature

  /// Linear-chain coupling (q, q+1) and round-robin feature assignment q -> q mod d.
  /// d_features = 0 means one feature per qubit.
  static CircuitConfig make(int n_qubits, int n_layers, int d_features = 0);

  /// Throws PreconditionError when an invariant is violated.
  void validate() const;

  std::size_t dim() const { return std::size_t{1} << n_qubits; }
  int n_blocks() const { return n_layers + 1; }
  /// Number of encoding gates carrying each feature.
  std::vector<int> gates_per_feature() const;

  friend bool operator==(const CircuitConfig&, const CircuitConfig&) = default;
};

/// Trainable angles, shape (L+1) x n_qubits x 3, layout (block, qubit, axis).
class ParameterSet {
 public:
  ParameterSet() = default;
  ParameterSet(int n_blocks, int n_qubits);

  static ParameterSet zeros(const CircuitConfig& cfg);
  /// Angles uniform in [0, 2pi).
  static ParameterSet random(const CircuitConfig& cfg, std::uint64_t seed);

  int n_blocks() const { return n_blocks_; }
  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return angles_.size(); }

  double& operator()(int block, int qubit, Axis axis) { return angles_[index(block, qubit, axis)]; }
  double operator()(int block, int qubit, Axis axis) const { return angles_[index(block, qubit, axis)]; }

  std::span<double> flat() { return angles_; }
  std::span<const double> flat() const { return angles_; }

  void validate_for(const CircuitConfig& cfg) const;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;

 private:
  std::size_t index(int block, int qubit, Axis axis) const {
    return (static_cast<std::size_t>(block) * n_qubits_ + qubit) * 3 + static_cast<int>(axis);
  }

  int n_blocks_ = 0;
  int n_qubits_ = 0;
  std::vector<double> angles_;
};

class StateVector {
 public:
  /// |0...0>
  explicit StateVector(int n_qubits);
  /// Computational basis state |index>.
  static StateVector basis(int n_qubits, std::size_t index);
  /// Takes ownership of amplitudes; size must be 2^n_qubits.
  StateVector(int n_qubits, std::vector<cplx> amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm_sq() const;

 private:
  int n_qubits_;
  std::vector<cplx> amps_;
};

struct NoiseConfig {
  std::optional<std::uint64_t> shots;  // absent: exact expectation
  double depolarizing_p = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  bool noiseless() const { return !shots && depolarizing_p == 0.0; }
};

Mat2 rotation_matrix(Axis axis, double angle);

/// exp(-i angle P / 2) on `qubit`, in place.
void apply_rotation(StateVector& state, int qubit, Axis axis, double angle);
/// Arbitrary single-qubit gate, in place.
void apply_gate(StateVector& state, int qubit, const Mat2& u);
void apply_cnot(StateVector& state, int control, int target);

/// U(x; Theta)|0...0>.
StateVector run_circuit(const CircuitConfig& cfg, const ParameterSet& params,
                        std::span<const double> x);

/// <Z_q> for every qubit.
std::vector<double> z_expectations(const StateVector& state);
/// (1/n) sum_q <Z_q>
double mean_z(const StateVector& state);

/// Model output f(x). With shots, the mean-Z estimate from sampled bitstrings
/// (seeded by noise.seed); scaled by (1 - depolarizing_p) in both cases.
double expectation(const CircuitConfig& cfg, const ParameterSet& params,
                   std::span<const double> x, const NoiseConfig& noise = {});

/// Counts indexed by basis index; sums to shots.
std::vector<std::uint64_t> sample_counts(const StateVector& state, std::uint64_t shots,
                                         std::uint64_t seed);
/// Counts keyed by bitstring label (qubit 0 first); zero counts omitted.
std::map<std::string, std::uint64_t> sample_bitstrings(const StateVector& state,
                                                       std::uint64_t shots, std::uint64_t seed);

std::string bitstring_label(std::size_t index, int n_qubits);

/// Stable hex digest of the circuit architecture and angles.
std::string fingerprint(const CircuitConfig& cfg, const ParameterSet& params);

void to_json(nlohmann::json& j, const CircuitConfig& cfg);
void from_json(const nlohmann::json& j, CircuitConfig& cfg);
void to_json(nlohmann::json& j, const ParameterSet& p);
void from_json(const nlohmann::json& j, ParameterSet& p);

}  // namespace qsurr::qsim
