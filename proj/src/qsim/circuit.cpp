#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qsurr/error.hpp"
#include "qsurr/qsim.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::qsim {

namespace {

std::size_t stride_of(int n_qubits, int qubit) {
  return std::size_t{1} << (n_qubits - 1 - qubit);
}

void check_qubit(const StateVector& s, int q, const char* what) {
  if (q < 0 || q >= s.n_qubits()) {
    throw PreconditionError("QubitOutOfRange", std::string(what) + " qubit " + std::to_string(q) +
                                                   " outside [0, " +
                                                   std::to_string(s.n_qubits()) + ")");
  }
}

Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

// (n - 2 popcount(i)) / n, cached per thread for the last qubit count used.
const std::vector<double>& mean_z_weights(int n_qubits) {
  thread_local int cached_n = -1;
  thread_local std::vector<double> w;
  if (cached_n != n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    w.resize(dim);
    for (std::size_t i = 0; i < dim; ++i)
      w[i] = static_cast<double>(n_qubits - 2 * std::popcount(i)) / n_qubits;
    cached_n = n_qubits;
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------------------
// CircuitConfig

CircuitConfig CircuitConfig::make(int n_qubits, int n_layers, int d_features) {
  CircuitConfig c;
  c.n_qubits = n_qubits;
  c.n_layers = n_layers;
  c.d_features = d_features == 0 ? n_qubits : d_features;
  for (int q = 0; q + 1 < n_qubits; ++q) c.coupling_map.emplace_back(q, q + 1);
  c.feature_assignment.resize(n_qubits > 0 ? n_qubits : 0);
  for (int q = 0; q < n_qubits; ++q) c.feature_assignment[q] = q % std::max(1, c.d_features);
  c.validate();
  return c;
}

void CircuitConfig::validate() const {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw PreconditionError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  if (n_layers < 1) throw PreconditionError("n_layers must be positive");
  if (d_features < 1 || d_features > n_qubits)
    throw PreconditionError("d_features must be in [1, n_qubits]");
  for (const auto& [c, t] : coupling_map) {
    if (c < 0 || c >= n_qubits || t < 0 || t >= n_qubits)
      throw PreconditionError("coupling pair references a qubit out of range");
    if (c == t) throw PreconditionError("coupling pair has control == target");
  }
  if (static_cast<int>(feature_assignment.size()) != n_qubits)
    throw PreconditionError("feature_assignment must have one entry per qubit");
  std::vector<bool> seen(d_features, false);
  for (int f : feature_assignment) {
    if (f < 0 || f >= d_features) throw PreconditionError("feature index out of range");
    seen[f] = true;
  }
  for (int f = 0; f < d_features; ++f)
    if (!seen[f])
      throw PreconditionError("feature " + std::to_string(f) + " is not assigned to any qubit");
}

std::vector<int> CircuitConfig::gates_per_feature() const {
  std::vector<int> g(d_features, 0);
  for (int f : feature_assignment) ++g[f];
  return g;
}

// ---------------------------------------------------------------------------
// ParameterSet

ParameterSet::ParameterSet(int n_blocks, int n_qubits)
    : n_blocks_(n_blocks), n_qubits_(n_qubits),
      angles_(static_cast<std::size_t>(n_blocks) * n_qubits * 3, 0.0) {}

ParameterSet ParameterSet::zeros(const CircuitConfig& cfg) {
  return ParameterSet(cfg.n_blocks(), cfg.n_qubits);
}

ParameterSet ParameterSet::random(const CircuitConfig& cfg, std::uint64_t seed) {
  ParameterSet p(cfg.n_blocks(), cfg.n_qubits);
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  for (double& a : p.angles_) a = u(rng);
  return p;
}

void ParameterSet::validate_for(const CircuitConfig& cfg) const {
  if (n_blocks_ != cfg.n_blocks() || n_qubits_ != cfg.n_qubits)
    throw ShapeError("parameter shape (" + std::to_string(n_blocks_) + ", " +
                     std::to_string(n_qubits_) + ", 3) does not match circuit (" +
                     std::to_string(cfg.n_blocks()) + ", " + std::to_string(cfg.n_qubits) +
                     ", 3)");
  for (double a : angles_)
    if (!std::isfinite(a)) throw PreconditionError("parameter angles must be finite");
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits)
    throw PreconditionError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
  amps_.assign(std::size_t{1} << n_qubits, cplx(0.0, 0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int n_qubits, std::size_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) throw PreconditionError("basis index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector::StateVector(int n_qubits, std::vector<cplx> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > kMaxQubits || amps_.size() != (std::size_t{1} << n_qubits))
    throw ShapeError("amplitude vector length must be 2^n_qubits");
}

double StateVector::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

void NoiseConfig::validate() const {
  if (shots && *shots == 0) throw PreconditionError("shots must be positive");
  if (!(depolarizing_p >= 0.0 && depolarizing_p <= 1.0))
    throw PreconditionError("depolarizing_p must be in [0, 1]");
}

// ---------------------------------------------------------------------------
// Gates

Mat2 rotation_matrix(Axis axis, double angle) {
  const double c = std::cos(0.5 * angle);
  const double s = std::sin(0.5 * angle);
  switch (axis) {
    case Axis::X:
      return {cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0)};
    case Axis::Y:
      return {cplx(c, 0.0), cplx(-s, 0.0), cplx(s, 0.0), cplx(c, 0.0)};
    case Axis::Z:
      return {cplx(c, -s), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(c, s)};
  }
  return {};
}

void apply_gate(StateVector& state, int qubit, const Mat2& u) {
  check_qubit(state, qubit, "gate");
  kernels::active().apply_2x2(state.amplitudes().data(), state.dim(),
                              stride_of(state.n_qubits(), qubit), u);
}

void apply_rotation(StateVector& state, int qubit, Axis axis, double angle) {
  apply_gate(state, qubit, rotation_matrix(axis, angle));
}

void apply_cnot(StateVector& state, int control, int target) {
  check_qubit(state, control, "control");
  check_qubit(state, target, "target");
  if (control == target) throw PreconditionError("CNOT control and target coincide");
  const std::size_t cbit = stride_of(state.n_qubits(), control);
  const std::size_t tbit = stride_of(state.n_qubits(), target);
  auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

StateVector run_circuit(const CircuitConfig& cfg, const ParameterSet& params,
                        std::span<const double> x) {
  cfg.validate();
  params.validate_for(cfg);
  if (static_cast<int>(x.size()) != cfg.d_features)
    throw ShapeError("input has " + std::to_string(x.size()) + " features, circuit expects " +
                     std::to_string(cfg.d_features));
  for (double v : x)
    if (!std::isfinite(v)) throw PreconditionError("input must be finite");

  StateVector state(cfg.n_qubits);
  const auto& k = kernels::active();
  for (int block = 0; block < cfg.n_blocks(); ++block) {
    for (int q = 0; q < cfg.n_qubits; ++q) {
      // Rx(x) (encoding, blocks >= 1), then Rx, Ry, Rz of W^block, fused into one gate.
      Mat2 u = rotation_matrix(Axis::X, params(block, q, Axis::X));
      if (block > 0) u = matmul(u, rotation_matrix(Axis::X, x[cfg.feature_assignment[q]]));
      u = matmul(rotation_matrix(Axis::Y, params(block, q, Axis::Y)), u);
      u = matmul(rotation_matrix(Axis::Z, params(block, q, Axis::Z)), u);
      k.apply_2x2(state.amplitudes().data(), state.dim(), stride_of(cfg.n_qubits, q), u);
    }
    for (const auto& [c, t] : cfg.coupling_map) apply_cnot(state, c, t);
  }
  return state;
}

std::vector<double> z_expectations(const StateVector& state) {
  const int n = state.n_qubits();
  std::vector<double> z(n, 0.0);
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const double p = std::norm(amps[i]);
    for (int q = 0; q < n; ++q) z[q] += (i & stride_of(n, q)) ? -p : p;
  }
  return z;
}

double mean_z(const StateVector& state) {
  const auto& w = mean_z_weights(state.n_qubits());
  return kernels::active().weighted_norm_sum(state.amplitudes().data(), w.data(), state.dim());
}

double expectation(const CircuitConfig& cfg, const ParameterSet& params,
                   std::span<const double> x, const NoiseConfig& noise) {
  noise.validate();
  const StateVector state = run_circuit(cfg, params, x);
  double value;
  if (noise.shots) {
    const auto counts = sample_counts(state, *noise.shots, noise.seed);
    const auto& w = mean_z_weights(cfg.n_qubits);
    double acc = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
      if (counts[i]) acc += static_cast<double>(counts[i]) * w[i];
    value = acc / static_cast<double>(*noise.shots);
  } else {
    value = mean_z(state);
  }
  return (1.0 - noise.depolarizing_p) * value;
}

std::string fingerprint(const CircuitConfig& cfg, const ParameterSet& params) {
  nlohmann::json j;
  j["config"] = cfg;
  j["params"] = params;
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const CircuitConfig& cfg) {
  nlohmann::json coupling = nlohmann::json::array();
  for (const auto& [c, t] : cfg.coupling_map) coupling.push_back({c, t});
  j = nlohmann::json{{"n_qubits", cfg.n_qubits},
                     {"n_layers", cfg.n_layers},
                     {"d_features", cfg.d_features},
                     {"coupling_map", coupling},
                     {"feature_assignment", cfg.feature_assignment}};
}

void from_json(const nlohmann::json& j, CircuitConfig& cfg) {
  cfg.n_qubits = j.at("n_qubits").get<int>();
  cfg.n_layers = j.at("n_layers").get<int>();
  cfg.d_features = j.at("d_features").get<int>();
  cfg.coupling_map.clear();
  for (const auto& pair : j.at("coupling_map")) {
    if (!pair.is_array() || pair.size() != 2)
      throw PreconditionError("coupling_map entries must be [control, target]");
    cfg.coupling_map.emplace_back(pair[0].get<int>(), pair[1].get<int>());
  }
  cfg.feature_assignment = j.at("feature_assignment").get<std::vector<int>>();
  cfg.validate();
}

void to_json(nlohmann::json& j, const ParameterSet& p) {
  nlohmann::json blocks = nlohmann::json::array();
  for (int b = 0; b < p.n_blocks(); ++b) {
    nlohmann::json qubits = nlohmann::json::array();
    for (int q = 0; q < p.n_qubits(); ++q)
      qubits.push_back({p(b, q, Axis::X), p(b, q, Axis::Y), p(b, q, Axis::Z)});
    blocks.push_back(std::move(qubits));
  }
  j = nlohmann::json{{"angles", std::move(blocks)}};
}

void from_json(const nlohmann::json& j, ParameterSet& p) {
  const auto& blocks = j.at("angles");
  const int nb = static_cast<int>(blocks.size());
  const int nq = nb > 0 ? static_cast<int>(blocks[0].size()) : 0;
  ParameterSet out(nb, nq);
  for (int b = 0; b < nb; ++b) {
    if (static_cast<int>(blocks[b].size()) != nq) throw ShapeError("ragged angles tensor");
    for (int q = 0; q < nq; ++q) {
      const auto& r = blocks[b][q];
      if (r.size() != 3) throw ShapeError("each qubit needs exactly 3 angles (x, y, z)");
      for (int a = 0; a < 3; ++a) out(b, q, static_cast<Axis>(a)) = r[a].get<double>();
    }
  }
  p = std::move(out);
}

}  // namespace qsurr::qsim
