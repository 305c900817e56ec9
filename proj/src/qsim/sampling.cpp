#include <algorithm>
#include <cmath>

#include "qsurr/error.hpp"
#include "qsurr/qsim.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::qsim {

std::vector<std::uint64_t> sample_counts(const StateVector& state, std::uint64_t shots,
                                         std::uint64_t seed) {
  if (shots == 0) throw PreconditionError("shots must be positive");
  const auto amps = state.amplitudes();
  std::vector<double> probs(amps.size());
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    probs[i] = std::norm(amps[i]);
    total += probs[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("state has zero norm");

  // Sequential conditional binomials: a multinomial draw in O(2^n) RNG calls.
  std::vector<std::uint64_t> counts(amps.size(), 0);
  Rng rng(seed);
  std::uint64_t remaining = shots;
  double mass = total;
  std::size_t last = probs.size() - 1;
  while (last > 0 && probs[last] <= 0.0) --last;
  for (std::size_t i = 0; i <= last && remaining > 0; ++i) {
    if (i == last) {
      counts[i] = remaining;
      break;
    }
    if (probs[i] <= 0.0) {
      mass -= probs[i];
      continue;
    }
    const double p = mass > 0.0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 1.0;
    std::uint64_t k;
    if (p >= 1.0) {
      k = remaining;
    } else {
      std::binomial_distribution<std::uint64_t> bin(remaining, p);
      k = bin(rng);
    }
    counts[i] = k;
    remaining -= k;
    mass -= probs[i];
  }
  return counts;
}

std::string bitstring_label(std::size_t index, int n_qubits) {
  std::string s(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q)
    if (index & (std::size_t{1} << (n_qubits - 1 - q))) s[q] = '1';
  return s;
}

std::map<std::string, std::uint64_t> sample_bitstrings(const StateVector& state,
                                                       std::uint64_t shots, std::uint64_t seed) {
  const auto counts = sample_counts(state, shots, seed);
  std::map<std::string, std::uint64_t> out;
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) out.emplace(bitstring_label(i, state.n_qubits()), counts[i]);
  return out;
}

}  // namespace qsurr::qsim
