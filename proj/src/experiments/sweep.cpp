#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

#include "qsurr/error.hpp"
#include "qsurr/experiments.hpp"
#include "qsurr/log.hpp"
#include "qsurr/parallel.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::experiments {

std::string to_string(Quantity q) { return q == Quantity::Frequencies ? "frequencies" : "datapoints"; }

Quantity quantity_from_string(const std::string& s) {
  if (s == "frequencies") return Quantity::Frequencies;
  if (s == "datapoints") return Quantity::Datapoints;
  throw PreconditionError("unknown sweep quantity '" + s + "' (expected frequencies or datapoints)");
}

std::size_t minimal_quantity(std::size_t budget, const std::function<bool(std::size_t)>& pred) {
  if (budget == 0) return 1;
  std::size_t lo = 0;  // largest value known to fail
  std::size_t hi = 1;
  while (!pred(hi)) {
    if (hi == budget) return budget + 1;
    lo = hi;
    hi = std::min(2 * hi, budget);
  }
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

namespace {

std::size_t clamp_count(const spectrum::BigInt& v, std::size_t limit) {
  return v < limit ? v.convert_to<std::size_t>() : limit;
}

}  // namespace

SweepReport run_sweep(const SweepConfig& cfg, const std::vector<const ModelFixture*>& fixtures) {
  if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw PreconditionError("invalid qubit range");
  if (cfg.seeds < 1) throw PreconditionError("sweep needs at least one seed");
  if (cfg.thresholds.empty()) throw PreconditionError("sweep needs at least one threshold");
  cfg.noise.validate();

  SweepReport rep;
  rep.quantity = cfg.quantity;
  auto thresholds = cfg.thresholds;
  std::sort(thresholds.begin(), thresholds.end());

  for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
    std::unique_ptr<ModelFixture> owned;
    const ModelFixture* fx = nullptr;
    const auto slot = static_cast<std::size_t>(n - cfg.n_min);
    auto opts = cfg.fixture;
    opts.n_qubits = n;
    if (slot < fixtures.size() && fixtures[slot] && !cfg.vary_model) {
      fx = fixtures[slot];
    } else {
      owned = std::make_unique<ModelFixture>(make_fixture(opts));
      fx = owned.get();
    }
    const auto canonical = spectrum::canonical_count(spectrum::omega_max_of(fx->config));
    const auto train_rows = static_cast<std::size_t>(fx->train.rows());

    std::size_t budget = 0;
    std::size_t fixed = 0;
    if (cfg.quantity == Quantity::Frequencies) {
      budget = clamp_count(canonical, cfg.max_quantity ? cfg.max_quantity : 10'000);
    } else {
      budget = cfg.max_quantity ? std::min(cfg.max_quantity, train_rows) : train_rows;
      fixed = clamp_count(canonical, cfg.fixed_frequencies ? cfg.fixed_frequencies : 10'000);
    }

    // One probe context (and, with vary_model, one model) per seed; deviations are cached
    // per seed so the per-seed searches and the ensemble-median search share probes.
    const auto n_seeds = static_cast<std::size_t>(cfg.seeds);
    std::vector<std::unique_ptr<ModelFixture>> models(n_seeds);
    std::vector<ProbeContext> contexts(n_seeds);
    std::vector<std::map<std::size_t, double>> caches(n_seeds);
    std::vector<std::uint64_t> seeds(n_seeds);
    parallel_for(n_seeds, [&](std::size_t s) {
      seeds[s] = derive_seed(cfg.seed, 1000 * static_cast<std::uint64_t>(n) + s);
      const ModelFixture* model = fx;
      if (cfg.vary_model && s > 0) {
        auto o = opts;
        o.seed = derive_seed(opts.seed, s);
        models[s] = std::make_unique<ModelFixture>(make_fixture(o));
        model = models[s].get();
      }
      contexts[s] = make_probe_context(*model, cfg.noise, derive_seed(seeds[s], 7));
    });
    auto deviation = [&](std::size_t s, std::size_t q) {
      auto it = caches[s].find(q);
      if (it != caches[s].end()) return it->second;
      const auto r = cfg.quantity == Quantity::Frequencies ? probe(contexts[s], q, 0, seeds[s])
                                                           : probe(contexts[s], fixed, q, seeds[s]);
      caches[s].emplace(q, r.deviation);
      return r.deviation;
    };

    // per_seed[s][t]: minimal quantity for seed s at threshold t
    std::vector<std::vector<std::size_t>> per_seed(n_seeds);
    // Thresholds ascend, so a quantity meeting a tighter one also meets the next:
    // each search is capped by the previous answer.
    parallel_for(n_seeds, [&](std::size_t s) {
      std::size_t cap = budget;
      for (double t : thresholds) {
        const auto q = minimal_quantity(cap, [&](std::size_t v) { return deviation(s, v) <= t; });
        per_seed[s].push_back(q);
        if (q <= budget) cap = q;
      }
    });

    auto median_deviation = [&](std::size_t q) {
      std::vector<double> devs(n_seeds);
      parallel_for(n_seeds, [&](std::size_t s) { devs[s] = deviation(s, q); });
      return median(devs);
    };

    std::size_t cap = budget;
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      SweepRecord rec;
      rec.n_qubits = n;
      rec.threshold = thresholds[t];
      rec.seeds_used = cfg.seeds;
      rec.budget = budget;
      rec.canonical_count = canonical.str();
      std::vector<double> vals;
      for (const auto& s : per_seed) {
        rec.per_seed.push_back(s[t]);
        vals.push_back(static_cast<double>(s[t]));
      }
      rec.required = minimal_quantity(
          cap, [&](std::size_t q) { return median_deviation(q) <= thresholds[t]; });
      rec.saturated = rec.required > budget;
      if (!rec.saturated) cap = rec.required;
      rec.median = median(vals);
      double sum = 0.0;
      for (double v : vals) sum += v;
      rec.mean = sum / static_cast<double>(vals.size());
      double var = 0.0;
      for (double v : vals) var += (v - rec.mean) * (v - rec.mean);
      rec.std = vals.size() > 1 ? std::sqrt(var / static_cast<double>(vals.size() - 1)) : 0.0;
      if (rec.saturated)
        log::warn("sweep n=" + std::to_string(n) + " threshold " + std::to_string(rec.threshold) +
                  " not reached within budget " + std::to_string(budget));
      rep.records.push_back(std::move(rec));
    }
  }

  if (cfg.n_max > cfg.n_min) {
    for (double t : thresholds) {
      std::vector<double> xs, ys;
      for (const auto& r : rep.records)
        if (r.threshold == t) {
          xs.push_back(r.n_qubits);
          ys.push_back(static_cast<double>(r.required));
        }
      rep.fits.push_back(linear_fit(xs, ys));
    }
  }
  return rep;
}

void to_json(nlohmann::json& j, const SweepRecord& r) {
  j = nlohmann::json{{"n_qubits", r.n_qubits},
                     {"threshold", r.threshold},
                     {"required_quantity", r.required},
                     {"per_seed_median", r.median},
                     {"per_seed", r.per_seed},
                     {"seeds_used", r.seeds_used},
                     {"mean", r.mean},
                     {"std", r.std},
                     {"budget", r.budget},
                     {"canonical_count", r.canonical_count},
                     {"saturated", r.saturated}};
}

void to_json(nlohmann::json& j, const SweepReport& r) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : r.fits)
    fits.push_back({{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"r2", f.r2}});
  j = nlohmann::json{{"axis", "n_qubits"},
                     {"quantity", to_string(r.quantity)},
                     {"records", r.records},
                     {"fits", std::move(fits)}};
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "n_qubits,threshold,quantity_mean,quantity_std\n";
  for (const auto& rec : r.records)
    out << rec.n_qubits << ',' << rec.threshold << ',' << rec.mean << ',' << rec.std << '\n';
  return out.str();
}

}  // namespace qsurr::experiments
