#pragma once

// Integer frequency lattice of a Pauli-encoded reuploading circuit and the
// equidistant grid that recovers its Fourier coefficients exactly.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "qsurr/qsim.hpp"

namespace qsurr::spectrum {

using BigInt = boost::multiprecision::cpp_int;

/// Rows are points, columns are features.
using PointMatrix = Eigen::MatrixXd;

struct SpectrumDescriptor {
  std::vector<int> omega_max;  // per feature

  int d() const { return static_cast<int>(omega_max.size()); }
  void validate() const;

  friend bool operator==(const SpectrumDescriptor&, const SpectrumDescriptor&) = default;
};

/// Integer frequency vector. Canonical form: first nonzero component positive.
struct FrequencyVector {
  std::vector<int> components;

  int d() const { return static_cast<int>(components.size()); }
  bool is_zero() const;
  bool is_canonical() const;
  FrequencyVector negated() const;
  /// Either *this or its negation, whichever is canonical.
  FrequencyVector canonical() const;
  bool within(const SpectrumDescriptor& desc) const;
  double squared_norm() const;

  friend bool operator==(const FrequencyVector&, const FrequencyVector&) = default;
  friend auto operator<=>(const FrequencyVector&, const FrequencyVector&) = default;
};

struct Grid {
  PointMatrix points;                   // |T| x d
  std::vector<int> per_feature_counts;  // T_i = 2 omega_max(i) + 1
};

enum class SamplingMode { Integer, Continuous };

/// omega_max(i) = L * (number of qubits encoding feature i).
SpectrumDescriptor omega_max_of(const qsim::CircuitConfig& cfg);

/// prod (2 omega_max(i) + 1), exact.
BigInt lattice_size(const SpectrumDescriptor& desc);
/// Number of canonical nonzero lattice vectors, (lattice_size - 1) / 2.
BigInt canonical_count(const SpectrumDescriptor& desc);

/// Every vector of the box prod [-omega_max(i), omega_max(i)], lexicographic
/// (first component most significant). Throws CapExceeded if lattice_size > cap.
std::vector<FrequencyVector> enumerate_lattice(const SpectrumDescriptor& desc, std::uint64_t cap);

/// Canonical nonzero vectors in lexicographic order. Throws CapExceeded.
std::vector<FrequencyVector> enumerate_canonical(const SpectrumDescriptor& desc,
                                                 std::uint64_t cap);

/// Streams the box in lexicographic order without materialising it.
void for_each_lattice_vector(const SpectrumDescriptor& desc,
                             const std::function<void(std::span<const int>)>& fn);

/// D distinct canonical nonzero vectors, components uniform over the integer box.
/// Throws InsufficientSpectrum when D exceeds canonical_count.
std::vector<FrequencyVector> sample_distinct(const SpectrumDescriptor& desc, std::size_t count,
                                             std::uint64_t seed);

/// Real-valued frequencies, components uniform on [-omega_max, omega_max],
/// sign-canonicalised. Rows are frequencies.
Eigen::MatrixXd sample_continuous(const SpectrumDescriptor& desc, std::size_t count,
                                  std::uint64_t seed);

/// Tensor-product grid of 2 omega_max(i) + 1 equidistant points per feature in [0, 2pi).
/// Throws CapExceeded if the grid has more than cap points.
Grid full_grid(const SpectrumDescriptor& desc, std::uint64_t cap);

/// sqrt(mean ||omega||^2) over the canonical nonzero lattice, in closed form.
double sigma_p(const SpectrumDescriptor& desc);

/// Frequencies as a dense (count x d) matrix of doubles.
Eigen::MatrixXd to_matrix(std::span<const FrequencyVector> freqs);

/// Default enumeration cap used where callers do not supply one.
inline constexpr std::uint64_t kDefaultEnumerationCap = 20'000'000;

void to_json(nlohmann::json& j, const SpectrumDescriptor& d);
void from_json(const nlohmann::json& j, SpectrumDescriptor& d);
void to_json(nlohmann::json& j, const FrequencyVector& f);
void from_json(const nlohmann::json& j, FrequencyVector& f);

}  // namespace qsurr::spectrum
