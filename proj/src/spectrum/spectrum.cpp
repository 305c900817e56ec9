#include "qsurr/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qsurr/error.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::spectrum {

namespace {

std::uint64_t checked_size(const SpectrumDescriptor& desc, std::uint64_t cap, const char* what) {
  const BigInt size = lattice_size(desc);
  if (size > cap) {
    throw CapExceeded(std::string(what) + " has " + size.str() + " entries, above the cap of " +
                      std::to_string(cap));
  }
  return size.convert_to<std::uint64_t>();
}

}  // namespace

void SpectrumDescriptor::validate() const {
  if (omega_max.empty()) throw PreconditionError("spectrum needs at least one feature");
  for (int w : omega_max)
    if (w < 0) throw PreconditionError("omega_max entries must be non-negative");
}

bool FrequencyVector::is_zero() const {
  return std::all_of(components.begin(), components.end(), [](int c) { return c == 0; });
}

bool FrequencyVector::is_canonical() const {
  for (int c : components) {
    if (c > 0) return true;
    if (c < 0) return false;
  }
  return true;  // all zero
}

FrequencyVector FrequencyVector::negated() const {
  FrequencyVector out{components};
  for (int& c : out.components) c = -c;
  return out;
}

FrequencyVector FrequencyVector::canonical() const {
  return is_canonical() ? *this : negated();
}

bool FrequencyVector::within(const SpectrumDescriptor& desc) const {
  if (d() != desc.d()) return false;
  for (int i = 0; i < d(); ++i)
    if (std::abs(components[i]) > desc.omega_max[i]) return false;
  return true;
}

double FrequencyVector::squared_norm() const {
  double s = 0.0;
  for (int c : components) s += static_cast<double>(c) * c;
  return s;
}

SpectrumDescriptor omega_max_of(const qsim::CircuitConfig& cfg) {
  cfg.validate();
  SpectrumDescriptor desc;
  for (int g : cfg.gates_per_feature()) desc.omega_max.push_back(cfg.n_layers * g);
  return desc;
}

BigInt lattice_size(const SpectrumDescriptor& desc) {
  BigInt size = 1;
  for (int w : desc.omega_max) size *= 2 * w + 1;
  return size;
}

BigInt canonical_count(const SpectrumDescriptor& desc) { return (lattice_size(desc) - 1) / 2; }

void for_each_lattice_vector(const SpectrumDescriptor& desc,
                             const std::function<void(std::span<const int>)>& fn) {
  desc.validate();
  const int d = desc.d();
  std::vector<int> v(d);
  for (int i = 0; i < d; ++i) v[i] = -desc.omega_max[i];
  while (true) {
    fn(v);
    int i = d - 1;
    while (i >= 0 && v[i] == desc.omega_max[i]) {
      v[i] = -desc.omega_max[i];
      --i;
    }
    if (i < 0) return;
    ++v[i];
  }
}

std::vector<FrequencyVector> enumerate_lattice(const SpectrumDescriptor& desc, std::uint64_t cap) {
  desc.validate();
  const std::uint64_t n = checked_size(desc, cap, "frequency lattice");
  std::vector<FrequencyVector> out;
  out.reserve(n);
  for_each_lattice_vector(desc, [&](std::span<const int> v) {
    out.push_back(FrequencyVector{{v.begin(), v.end()}});
  });
  return out;
}

std::vector<FrequencyVector> enumerate_canonical(const SpectrumDescriptor& desc,
                                                 std::uint64_t cap) {
  desc.validate();
  const std::uint64_t n = checked_size(desc, cap, "frequency lattice");
  std::vector<FrequencyVector> out;
  out.reserve(n / 2);
  for_each_lattice_vector(desc, [&](std::span<const int> v) {
    FrequencyVector f{{v.begin(), v.end()}};
    if (!f.is_zero() && f.is_canonical()) out.push_back(std::move(f));
  });
  return out;
}

std::vector<FrequencyVector> sample_distinct(const SpectrumDescriptor& desc, std::size_t count,
                                             std::uint64_t seed) {
  desc.validate();
  if (count == 0) throw PreconditionError("number of frequencies must be positive");
  const BigInt available = canonical_count(desc);
  if (BigInt(count) > available) {
    throw InsufficientSpectrum("requested " + std::to_string(count) +
                               " distinct frequencies but the canonical lattice holds " +
                               available.str());
  }

  Rng rng(seed);
  std::vector<std::uniform_int_distribution<int>> comp;
  for (int w : desc.omega_max) comp.emplace_back(-w, w);

  std::set<FrequencyVector> seen;
  std::vector<FrequencyVector> out;
  out.reserve(count);
  const std::size_t max_attempts = 100 * count;
  FrequencyVector f{std::vector<int>(desc.d())};
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < count; ++attempt) {
    for (int i = 0; i < desc.d(); ++i) f.components[i] = comp[i](rng);
    if (f.is_zero()) continue;
    FrequencyVector c = f.canonical();
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  if (out.size() == count) return out;

  // Rejection stalled near exhaustion: draw the rest from the explicit list.
  if (available > kDefaultEnumerationCap) {
    throw NumericalError("distinct sampling did not converge within " +
                         std::to_string(max_attempts) + " draws");
  }
  std::vector<FrequencyVector> rest;
  for (auto& v : enumerate_canonical(desc, kDefaultEnumerationCap))
    if (!seen.count(v)) rest.push_back(std::move(v));
  std::shuffle(rest.begin(), rest.end(), rng);
  for (std::size_t i = 0; out.size() < count; ++i) out.push_back(std::move(rest[i]));
  return out;
}

Eigen::MatrixXd sample_continuous(const SpectrumDescriptor& desc, std::size_t count,
                                  std::uint64_t seed) {
  desc.validate();
  if (count == 0) throw PreconditionError("number of frequencies must be positive");
  Rng rng(seed);
  Eigen::MatrixXd out(count, desc.d());
  for (std::size_t k = 0; k < count; ++k) {
    for (int i = 0; i < desc.d(); ++i) {
      std::uniform_real_distribution<double> u(-desc.omega_max[i], desc.omega_max[i]);
      out(k, i) = desc.omega_max[i] == 0 ? 0.0 : u(rng);
    }
    for (int i = 0; i < desc.d(); ++i) {
      if (out(k, i) > 0.0) break;
      if (out(k, i) < 0.0) {
        out.row(k) = -out.row(k);
        break;
      }
    }
  }
  return out;
}

Grid full_grid(const SpectrumDescriptor& desc, std::uint64_t cap) {
  desc.validate();
  const std::uint64_t n = checked_size(desc, cap, "sampling grid");
  Grid g;
  const int d = desc.d();
  for (int w : desc.omega_max) g.per_feature_counts.push_back(2 * w + 1);
  g.points.resize(static_cast<Eigen::Index>(n), d);
  std::vector<int> k(d, 0);
  for (std::uint64_t row = 0; row < n; ++row) {
    for (int i = 0; i < d; ++i)
      g.points(row, i) = 2.0 * std::numbers::pi * k[i] / g.per_feature_counts[i];
    for (int i = d - 1; i >= 0; --i) {
      if (++k[i] < g.per_feature_counts[i]) break;
      k[i] = 0;
    }
  }
  return g;
}

double sigma_p(const SpectrumDescriptor& desc) {
  desc.validate();
  // Over the full box, E[omega_i^2] = w(w+1)/3 per feature. The zero vector adds
  // nothing to the sum and the norm is even, so the canonical mean is
  // |box| / (|box| - 1) times the box mean.
  double box_mean = 0.0;
  for (int w : desc.omega_max) box_mean += w * (w + 1.0) / 3.0;
  const double box = lattice_size(desc).convert_to<double>();
  if (box <= 1.0) return 0.0;
  return std::sqrt(box_mean * box / (box - 1.0));
}

Eigen::MatrixXd to_matrix(std::span<const FrequencyVector> freqs) {
  const int d = freqs.empty() ? 0 : freqs[0].d();
  Eigen::MatrixXd m(freqs.size(), d);
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (freqs[k].d() != d) throw ShapeError("frequency vectors have inconsistent dimension");
    for (int i = 0; i < d; ++i) m(k, i) = freqs[k].components[i];
  }
  return m;
}

void to_json(nlohmann::json& j, const SpectrumDescriptor& d) {
  j = nlohmann::json{{"omega_max", d.omega_max}};
}

void from_json(const nlohmann::json& j, SpectrumDescriptor& d) {
  d.omega_max = j.at("omega_max").get<std::vector<int>>();
  d.validate();
}

void to_json(nlohmann::json& j, const FrequencyVector& f) { j = f.components; }

void from_json(const nlohmann::json& j, FrequencyVector& f) {
  f.components = j.get<std::vector<int>>();
}

}  // namespace qsurr::spectrum
