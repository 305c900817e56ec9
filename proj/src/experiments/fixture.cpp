#include <algorithm>
#include <numeric>

#include "qsurr/error.hpp"
#include "qsurr/experiments.hpp"
#include "qsurr/log.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::experiments {

ModelFixture make_fixture(const FixtureOptions& opts) {
  if (opts.n_qubits < 1) throw PreconditionError("fixture needs at least one qubit");
  if (opts.source == FixtureSource::Teacher) {
    if (opts.n_layers != 2) throw PreconditionError("teacher fixtures use the 2-layer generator circuit");
    auto raw = data::synth_generate(opts.n_qubits, opts.size, data::SynthKind::Circuit,
                                    derive_seed(opts.seed, 10), opts.noise_sd);
    const auto& truth = raw.provenance.front();
    auto [train, test] = data::train_test_split(raw, opts.train_fraction, derive_seed(opts.seed, 11));
    ModelFixture fx;
    fx.config = truth.at("config").get<qsim::CircuitConfig>();
    fx.params = truth.at("params").get<qsim::ParameterSet>();
    fx.train = std::move(train);
    fx.test = std::move(test);
    return fx;
  }
  const int base = opts.base_features > 0 ? opts.base_features : opts.n_qubits;
  if (base < opts.n_qubits) throw PreconditionError("base_features must be at least n_qubits");

  auto raw = data::synth_generate(base, opts.size, data::SynthKind::TrigPoly,
                                  derive_seed(opts.seed, 10), opts.noise_sd);
  data::Dataset reduced = base == opts.n_qubits
                              ? data::normalize(raw)
                              : data::pca(raw, opts.n_qubits).data;
  auto scaled = data::rescale_targets(reduced);
  auto [train, test] = data::train_test_split(scaled, opts.train_fraction, derive_seed(opts.seed, 11));

  ModelFixture fx;
  fx.config = qsim::CircuitConfig::make(opts.n_qubits, opts.n_layers, opts.n_qubits);
  auto tc = opts.train;
  tc.seed = derive_seed(opts.seed, 12);
  auto result = pipeline::train(fx.config, train.X, train.y, tc);
  fx.params = std::move(result.params);
  fx.loss_history = std::move(result.loss_history);
  fx.train = std::move(train);
  fx.test = std::move(test);
  log::debug("fixture n=" + std::to_string(opts.n_qubits) + " trained, loss " +
             std::to_string(fx.loss_history.front()) + " -> " +
             std::to_string(*std::min_element(fx.loss_history.begin(), fx.loss_history.end())));
  return fx;
}

ProbeContext make_probe_context(const ModelFixture& fx, const pipeline::NoiseConfig& noise,
                                std::uint64_t label_seed) {
  ProbeContext ctx;
  ctx.fixture = &fx;
  ctx.noise = noise;
  ctx.noise.seed = label_seed;
  pipeline::NoiseConfig reference;
  reference.depolarizing_p = noise.depolarizing_p;
  ctx.quantum_test_pred = pipeline::evaluate(fx.config, fx.params, fx.test.X, reference);
  ctx.quantum_train_pred = pipeline::evaluate(fx.config, fx.params, fx.train.X, ctx.noise);
  return ctx;
}

ProbeResult probe(const ProbeContext& ctx, std::size_t n_frequencies, std::size_t n_points,
                  std::uint64_t seed) {
  const ModelFixture& fx = *ctx.fixture;
  const auto available = static_cast<std::size_t>(fx.train.rows());
  const auto desc = spectrum::omega_max_of(fx.config);

  pipeline::RffOptions opts;
  opts.n_frequencies = n_frequencies;
  opts.seed = derive_seed(seed, 1);

  pipeline::SurrogateModel model;
  if (n_points == 0 || n_points >= available) {
    model = pipeline::fit_rff(desc, fx.train.X, ctx.quantum_train_pred, opts);
  } else {
    std::vector<Eigen::Index> order(available);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(derive_seed(seed, 2));
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(n_points);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n_points), fx.train.cols());
    Eigen::VectorXd y(static_cast<Eigen::Index>(n_points));
    for (std::size_t i = 0; i < n_points; ++i) {
      x.row(static_cast<Eigen::Index>(i)) = fx.train.X.row(order[i]);
      y(static_cast<Eigen::Index>(i)) = ctx.quantum_train_pred(order[i]);
    }
    model = pipeline::fit_rff(desc, x, y, opts);
  }

  ProbeResult r;
  r.quantum_test_mse = surrogate::mse(ctx.quantum_test_pred, fx.test.y);
  r.surrogate_test_mse = surrogate::mse(model, fx.test.X, fx.test.y);
  r.deviation = surrogate::relative_mse_deviation(r.surrogate_test_mse, r.quantum_test_mse);
  return r;
}

}  // namespace qsurr::experiments
