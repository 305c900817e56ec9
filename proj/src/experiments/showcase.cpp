#include "qsurr/experiments.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::experiments {

ShowcaseReport run_showcase(const ModelFixture& fx, std::size_t n_frequencies, int seeds,
                            std::uint64_t seed) {
  if (seeds < 1) throw PreconditionError("showcase needs at least one seed");
  const auto ctx = make_probe_context(fx, {}, derive_seed(seed, 0));
  const auto lattice = spectrum::lattice_size(spectrum::omega_max_of(fx.config));

  ShowcaseReport rep;
  rep.n_frequencies = n_frequencies;
  rep.lattice_size = lattice.str();
  rep.frequency_fraction = static_cast<double>(n_frequencies) / lattice.convert_to<double>();
  std::vector<double> mses;
  for (int s = 0; s < seeds; ++s) {
    const auto r = probe(ctx, n_frequencies, 0, derive_seed(seed, 100 + s));
    rep.quantum_test_mse = r.quantum_test_mse;
    mses.push_back(r.surrogate_test_mse);
    rep.deviations.push_back(r.deviation);
  }
  rep.surrogate_test_mse = median(mses);
  rep.median_deviation = median(rep.deviations);
  return rep;
}

void to_json(nlohmann::json& j, const ShowcaseReport& r) {
  j = nlohmann::json{{"quantum_test_mse", r.quantum_test_mse},
                     {"surrogate_test_mse", r.surrogate_test_mse},
                     {"frequency_fraction", r.frequency_fraction},
                     {"n_frequencies", r.n_frequencies},
                     {"lattice_size", r.lattice_size},
                     {"deviations", r.deviations},
                     {"median_deviation", r.median_deviation}};
}

}  // namespace qsurr::experiments
