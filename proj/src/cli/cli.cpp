#include <chrono>
#include <cmath>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "qsurr/bounds.hpp"
#include "qsurr/cli.hpp"
#include "qsurr/data.hpp"
#include "qsurr/error.hpp"
#include "qsurr/experiments.hpp"
#include "qsurr/kernels.hpp"
#include "qsurr/log.hpp"
#include "qsurr/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace qsurr::cli {

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<std::uint64_t> shots;
  double depolarizing = 0.0;
  bool json_logs = false;
  bool verbose = false;
};

// Per-invocation state: the resolved config and the files written so far.
struct Run {
  Globals g;
  json config = json::object();
  std::vector<std::string> artifacts;

  qsim::NoiseConfig noise() const {
    qsim::NoiseConfig n;
    n.shots = g.shots;
    n.depolarizing_p = g.depolarizing;
    n.seed = g.seed;
    return n;
  }

  void emit(const std::string& name, const std::string& content) {
    write_text(fs::path(g.out_dir) / name, content);
    artifacts.push_back(name);
  }
  void emit(const std::string& name, const json& j) { emit(name, dump(j)); }
};

json circuit_file(const qsim::CircuitConfig& cfg, const qsim::ParameterSet& params) {
  return json{{"config", cfg}, {"params", params}};
}

std::pair<qsim::CircuitConfig, qsim::ParameterSet> load_circuit(const std::string& path) {
  const auto j = read_json(path);
  auto cfg = j.at("config").get<qsim::CircuitConfig>();
  auto params = j.at("params").get<qsim::ParameterSet>();
  cfg.validate();
  params.validate_for(cfg);
  return {std::move(cfg), std::move(params)};
}

data::Dataset load_dataset(const std::string& path) { return read_json(path).get<data::Dataset>(); }

// ---------------------------------------------------------------------------

struct DatagenOpts {
  std::string kind = "trig-poly";
  int features = 4;
  std::size_t size = 500;
  double noise_sd = 0.05;
  std::string output = "dataset.json";
  bool csv = false;
};

void cmd_datagen(Run& run, const DatagenOpts& o) {
  const auto kind = data::synth_kind_from_string(o.kind);
  run.config = {{"kind", o.kind}, {"features", o.features}, {"size", o.size},
                {"noise_sd", o.noise_sd}, {"output", o.output}, {"csv", o.csv}};
  const auto ds = data::synth_generate(o.features, o.size, kind, run.g.seed, o.noise_sd);
  run.emit(o.output, json(ds));
  if (o.csv) {
    std::ostringstream buf;
    data::write_csv(buf, ds);
    run.emit(fs::path(o.output).replace_extension(".csv").string(), buf.str());
  }
}

struct PreprocessOpts {
  std::string input;
  std::string csv;
  std::string target = "target";
  bool normalize = true;
  bool rescale = true;
  int pca = 0;
  double dbscan_eps = 0.0;
  int min_pts = 5;
  double split = 0.0;
  std::string output = "processed.json";
};

void cmd_preprocess(Run& run, const PreprocessOpts& o) {
  run.config = {{"input", o.input}, {"csv", o.csv}, {"target", o.target},
                {"normalize", o.normalize}, {"rescale", o.rescale}, {"pca", o.pca},
                {"dbscan_eps", o.dbscan_eps}, {"min_pts", o.min_pts}, {"split", o.split},
                {"output", o.output}};
  json report = json::object();
  data::Dataset ds;
  if (!o.csv.empty()) {
    auto r = data::load_csv(o.csv, o.target);
    report["rejected_rows"] = r.rejected_rows;
    ds = std::move(r.data);
  } else if (!o.input.empty()) {
    ds = load_dataset(o.input);
  } else {
    throw PreconditionError("preprocess needs --input or --csv");
  }
  report["input_rows"] = ds.rows();
  if (o.normalize) ds = data::normalize(ds);
  if (o.pca > 0) {
    auto p = data::pca(ds, o.pca);
    report["explained_ratio"] =
        std::vector<double>(p.explained_ratio.data(), p.explained_ratio.data() + p.explained_ratio.size());
    ds = std::move(p.data);
  }
  if (o.dbscan_eps > 0.0) {
    auto d = data::dbscan(ds, o.dbscan_eps, o.min_pts);
    report["clusters"] = d.n_clusters;
    report["noise_removed"] = d.n_noise;
    ds = std::move(d.filtered);
  }
  if (o.rescale) ds = data::rescale_targets(ds);
  report["output_rows"] = ds.rows();
  if (o.split > 0.0) {
    auto [tr, te] = data::train_test_split(ds, o.split, run.g.seed);
    report["train_rows"] = tr.rows();
    report["test_rows"] = te.rows();
    const auto stem = fs::path(o.output).stem().string();
    run.emit(stem + "_train.json", json(tr));
    run.emit(stem + "_test.json", json(te));
  } else {
    run.emit(o.output, json(ds));
  }
  run.emit("preprocess_report.json", report);
}

struct TrainOpts {
  std::string data;
  int qubits = 0;
  int layers = 1;
  double lr = 0.1;
  int iters = 100;
  std::size_t batch = 0;
  double tol = 0.0;
  std::string output = "circuit.json";
};

void cmd_train(Run& run, const TrainOpts& o) {
  const auto ds = load_dataset(o.data);
  const int d = static_cast<int>(ds.cols());
  const int n = o.qubits > 0 ? o.qubits : d;
  pipeline::TrainConfig tc;
  tc.learning_rate = o.lr;
  tc.max_iters = o.iters;
  tc.seed = run.g.seed;
  tc.shots = run.g.shots;
  tc.tolerance = o.tol;
  tc.batch_size = o.batch;
  run.config = {{"data", o.data}, {"qubits", n}, {"layers", o.layers}, {"lr", o.lr},
                {"iters", o.iters}, {"batch", o.batch}, {"tol", o.tol}, {"output", o.output}};
  if (run.g.depolarizing > 0.0) log::warn("training ignores --depolarizing");
  const auto cfg = qsim::CircuitConfig::make(n, o.layers, d);
  const auto result = pipeline::train(cfg, ds.X, ds.y, tc);
  auto j = circuit_file(cfg, result.params);
  j["loss_history"] = result.loss_history;
  j["iterations"] = result.iterations;
  run.emit(o.output, j);
}

struct SurrogateOpts {
  std::string mode;
  std::string circuit;
  std::string data;
  std::size_t frequencies = 0;
  std::string sampling = "integer";
  std::uint64_t cap = 1'000'000;
  double rcond = surrogate::kDefaultRcond;
  std::string output = "surrogate.json";
};

void cmd_surrogate(Run& run, const SurrogateOpts& o) {
  const auto [cfg, params] = load_circuit(o.circuit);
  run.config = {{"mode", o.mode}, {"circuit", o.circuit}, {"rcond", o.rcond}, {"output", o.output}};
  surrogate::SurrogateModel model;
  if (o.mode == "exact") {
    run.config["cap"] = o.cap;
    if (!run.noise().noiseless()) log::warn("exact surrogation samples the noiseless circuit");
    model = pipeline::surrogate_exact(cfg, params, o.cap, o.rcond);
  } else {
    if (o.data.empty()) throw PreconditionError("rff surrogation needs --data");
    if (o.frequencies == 0) throw PreconditionError("rff surrogation needs --frequencies >= 1");
    run.config["data"] = o.data;
    run.config["frequencies"] = o.frequencies;
    run.config["sampling"] = o.sampling;
    pipeline::RffOptions opts;
    opts.n_frequencies = o.frequencies;
    opts.seed = run.g.seed;
    opts.rcond = o.rcond;
    opts.sampling = o.sampling == "continuous" ? spectrum::SamplingMode::Continuous
                                               : spectrum::SamplingMode::Integer;
    const auto ds = load_dataset(o.data);
    model = pipeline::surrogate_rff(cfg, params, ds.X, opts, run.noise());
  }
  run.emit(o.output, json(model));
}

struct EvalOpts {
  std::string surrogate;
  std::string circuit;
  std::string data;
  std::string output = "eval.json";
};

void cmd_eval(Run& run, const EvalOpts& o) {
  if (o.surrogate.empty() && o.circuit.empty())
    throw PreconditionError("eval needs --surrogate and/or --circuit");
  run.config = {{"surrogate", o.surrogate}, {"circuit", o.circuit}, {"data", o.data}, {"output", o.output}};
  const auto ds = load_dataset(o.data);
  json report = {{"rows", ds.rows()}};
  std::optional<double> ms, mq;
  if (!o.surrogate.empty()) {
    const auto model = read_json(o.surrogate).get<surrogate::SurrogateModel>();
    ms = surrogate::mse(model, ds.X, ds.y);
    report["surrogate_mse"] = *ms;
  }
  if (!o.circuit.empty()) {
    const auto [cfg, params] = load_circuit(o.circuit);
    mq = surrogate::mse(pipeline::evaluate(cfg, params, ds.X, run.noise()), ds.y);
    report["quantum_mse"] = *mq;
  }
  if (ms && mq && *mq > 0.0) report["relative_deviation"] = surrogate::relative_mse_deviation(*ms, *mq);
  run.emit(o.output, report);
}

struct EstimateOpts {
  int qubits = 0;
  int layers = 0;
  int features = 0;
  int bytes_per_entry = 16;
  std::string output = "estimate.json";
};

void cmd_estimate(Run& run, const EstimateOpts& o) {
  run.config = {{"qubits", o.qubits}, {"layers", o.layers}, {"features", o.features},
                {"bytes_per_entry", o.bytes_per_entry}, {"output", o.output}};
  const auto cfg = qsim::CircuitConfig::make(o.qubits, o.layers, o.features);
  const auto est = pipeline::estimate_memory(cfg, o.bytes_per_entry);
  json j = est;
  j["n_qubits"] = cfg.n_qubits;
  j["n_layers"] = cfg.n_layers;
  j["d_features"] = cfg.d_features;
  j["table_discrepancy"] = pipeline::table_discrepancy_report(o.bytes_per_entry);
  run.emit(o.output, j);
}

struct BoundsOpts {
  int qubits = 0;
  int layers = 1;
  int features = 0;
  std::vector<int> omega_max;
  double epsilon = 0.1;
  double delta = 0.05;
  std::optional<double> kernel_sup;
  std::size_t kernel_trials = 200;
  std::optional<double> sigma_p;
  std::optional<double> diameter;
  std::size_t frequencies = 0;
  double lambda0 = 1.0;
  double train_size = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double domain_size = 1.0;
  std::string output = "bounds.json";
};

void cmd_bounds(Run& run, const BoundsOpts& o) {
  spectrum::SpectrumDescriptor desc;
  int layers = o.layers;
  if (!o.omega_max.empty()) {
    desc.omega_max = o.omega_max;
  } else if (o.qubits > 0) {
    desc = spectrum::omega_max_of(qsim::CircuitConfig::make(o.qubits, o.layers, o.features));
  } else {
    throw PreconditionError("bounds needs --omega-max or --qubits/--layers");
  }
  desc.validate();

  auto p = bounds::BoundParams::for_spectrum(desc, o.epsilon, o.delta);
  if (o.sigma_p) p.sigma_p = *o.sigma_p;
  if (o.diameter) p.diameter = *o.diameter;
  p.lambda0 = o.lambda0;
  p.train_size = o.train_size;
  p.c1 = o.c1;
  p.c2 = o.c2;
  p.n_layers = layers;
  p.domain_size = o.domain_size;
  p.validate();

  double sup_term = 1.0;
  std::string sup_source = "default";
  if (o.kernel_sup) {
    sup_term = *o.kernel_sup;
    sup_source = "user";
  } else if (spectrum::canonical_count(desc) <= 2'000'000) {
    const auto all = spectrum::enumerate_canonical(desc, spectrum::kDefaultEnumerationCap);
    sup_term = bounds::empirical_kernel_sup(desc, all, o.kernel_trials, run.g.seed).kernel_sup_term;
    sup_source = "empirical";
  }
  const double alpha = bounds::alpha_epsilon(p.epsilon, sup_term);
  run.config = {{"omega_max", desc.omega_max}, {"epsilon", o.epsilon}, {"delta", o.delta},
                {"kernel_trials", o.kernel_trials}, {"frequencies", o.frequencies},
                {"output", o.output}};

  json j = {{"params", p},
            {"beta_d", bounds::beta_d(p.d)},
            {"kernel_sup_term", sup_term},
            {"kernel_sup_source", sup_source},
            {"alpha_epsilon", alpha}};
  const auto d_min = bounds::min_features(p, alpha);
  j["min_features"] = d_min;
  const double at = o.frequencies ? static_cast<double>(o.frequencies) : static_cast<double>(d_min);
  j["max_error_probability"] = {{"n_features", at},
                                {"value", bounds::max_error_probability(p, at, alpha)},
                                {"clipped", bounds::max_error_probability_clipped(p, at, alpha)}};
  j["lrr_features"] = {{"value", bounds::lrr_features(p)},
                       {"note", "order of magnitude only; C1 and C2 are placeholder constants"}};
  run.emit(o.output, j);
}

struct FixtureFlags {
  int layers = 2;
  std::size_t size = 500;
  int base_features = 0;
  double noise_sd = 0.05;
  int iters = 300;
  double lr = 3.0;
  std::size_t batch = 50;

  experiments::FixtureOptions options(std::uint64_t seed) const {
    experiments::FixtureOptions f;
    f.n_layers = layers;
    f.size = size;
    f.base_features = base_features;
    f.noise_sd = noise_sd;
    f.seed = seed;
    f.train.max_iters = iters;
    f.train.learning_rate = lr;
    f.train.batch_size = batch;
    return f;
  }
  json to_json() const {
    return {{"layers", layers}, {"size", size}, {"base_features", base_features},
            {"noise_sd", noise_sd}, {"iters", iters}, {"lr", lr}, {"batch", batch}};
  }
};

void add_fixture_flags(CLI::App* sub, FixtureFlags& f) {
  sub->add_option("--layers", f.layers, "Circuit layers")->capture_default_str();
  sub->add_option("--size", f.size, "Synthetic rows before the train/test split")->capture_default_str();
  sub->add_option("--base-features", f.base_features,
                  "Synthetic features before PCA (0: one per qubit)")->capture_default_str();
  sub->add_option("--noise-sd", f.noise_sd, "Target noise")->capture_default_str();
  sub->add_option("--iters", f.iters, "Training iterations")->capture_default_str();
  sub->add_option("--lr", f.lr, "Training step size")->capture_default_str();
  sub->add_option("--batch", f.batch, "Training minibatch (0: full batch)")->capture_default_str();
}

struct SweepOpts {
  std::string quantity = "frequencies";
  int qubits_min = 4;
  int qubits_max = 7;
  std::vector<double> thresholds{0.10};
  int seeds = 20;
  std::size_t fixed_frequencies = 0;
  std::size_t max_quantity = 0;
  bool vary_model = false;
  FixtureFlags fixture;
};

void cmd_sweep(Run& run, const SweepOpts& o) {
  experiments::SweepConfig c;
  c.quantity = experiments::quantity_from_string(o.quantity);
  c.n_min = o.qubits_min;
  c.n_max = o.qubits_max;
  c.thresholds = o.thresholds;
  c.seeds = o.seeds;
  c.seed = run.g.seed;
  c.noise = run.noise();
  c.fixture = o.fixture.options(run.g.seed);
  c.fixed_frequencies = o.fixed_frequencies;
  c.max_quantity = o.max_quantity;
  c.vary_model = o.vary_model;
  run.config = {{"quantity", o.quantity}, {"qubits_min", o.qubits_min},
                {"qubits_max", o.qubits_max}, {"thresholds", o.thresholds},
                {"seeds", o.seeds}, {"fixed_frequencies", o.fixed_frequencies},
                {"max_quantity", o.max_quantity}, {"vary_model", o.vary_model},
                {"fixture", o.fixture.to_json()}};
  const auto rep = experiments::run_sweep(c);
  run.emit("sweep.json", json(rep));
  run.emit("sweep.csv", experiments::sweep_csv(rep));
}

struct ShowcaseOpts {
  std::string circuit;
  std::string train;
  std::string test;
  int qubits = 8;
  std::size_t frequencies = 0;
  int seeds = 10;
  FixtureFlags fixture;
};

void cmd_showcase(Run& run, const ShowcaseOpts& o) {
  experiments::ModelFixture fx;
  run.config = {{"frequencies", o.frequencies}, {"seeds", o.seeds}};
  if (!o.circuit.empty()) {
    if (o.train.empty() || o.test.empty())
      throw PreconditionError("showcase with --circuit also needs --train and --test");
    std::tie(fx.config, fx.params) = load_circuit(o.circuit);
    fx.train = load_dataset(o.train);
    fx.test = load_dataset(o.test);
    run.config["circuit"] = o.circuit;
    run.config["train"] = o.train;
    run.config["test"] = o.test;
  } else {
    auto opts = o.fixture.options(run.g.seed);
    opts.n_qubits = o.qubits;
    run.config["qubits"] = o.qubits;
    run.config["fixture"] = o.fixture.to_json();
    fx = experiments::make_fixture(opts);
    auto j = circuit_file(fx.config, fx.params);
    j["loss_history"] = fx.loss_history;
    run.emit("circuit.json", j);
  }
  std::size_t d = o.frequencies;
  if (d == 0) {
    // 1% of the lattice, capped by the canonical half
    const auto desc = spectrum::omega_max_of(fx.config);
    const spectrum::BigInt pct = spectrum::lattice_size(desc) / 100;
    const auto canon = spectrum::canonical_count(desc);
    d = std::max<std::size_t>(1, (pct < canon ? pct : canon).convert_to<std::size_t>());
  }
  run.config["n_frequencies"] = d;
  const auto rep = experiments::run_showcase(fx, d, o.seeds, run.g.seed);
  run.emit("showcase.json", json(rep));
}

struct ReplayOpts {
  std::string manifest;
};

int exit_code(ErrorKind k) { return static_cast<int>(k); }

void report_error(std::ostream& err, const std::string& name, const std::string& message, int code) {
  static const char* kinds[] = {"ok", "usage", "io", "numerical", "precondition"};
  err << json{{"error", name}, {"kind", kinds[code >= 1 && code <= 4 ? code : 3]},
              {"message", message}, {"exit_code", code}}.dump()
      << "\n";
}

std::vector<std::string> replace_out_dir(std::vector<std::string> args, const std::string& dir) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--out-dir" && i + 1 < args.size()) {
      args[i + 1] = dir;
      return args;
    }
    if (args[i].rfind("--out-dir=", 0) == 0) {
      args[i] = "--out-dir=" + dir;
      return args;
    }
  }
  args.insert(args.begin(), {"--out-dir", dir});
  return args;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void cmd_replay(Run& run, const ReplayOpts& o, std::ostream& err) {
  const auto m = read_json(o.manifest).get<RunManifest>();
  if (m.command == "replay") throw PreconditionError("cannot replay a replay manifest");
  const fs::path original = fs::path(o.manifest).parent_path();
  const auto args = replace_out_dir(m.argv, run.g.out_dir + "/replay");
  std::ostringstream sink;
  const int code = execute(args, sink, err);
  if (code != 0) throw NumericalError("ReplayFailed", "replayed command exited with " + std::to_string(code));
  json files = json::array();
  bool all_equal = true;
  for (const auto& name : m.artifacts) {
    const bool same = read_text(original / name) == read_text(fs::path(run.g.out_dir) / "replay" / name);
    all_equal = all_equal && same;
    files.push_back({{"artifact", name}, {"identical", same}});
  }
  run.config = {{"manifest", o.manifest}};
  run.emit("replay_report.json", json{{"command", m.command}, {"artifacts", files}, {"identical", all_equal}});
  if (!all_equal) throw NumericalError("ReplayMismatch", "replayed artifacts differ from the manifest run");
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"Classical surrogates of data-reuploading quantum models", "qsurr"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", QSURR_VERSION);

  Run run;
  app.add_option("--seed", run.g.seed, "Base random seed")->capture_default_str();
  app.add_option("--out-dir", run.g.out_dir, "Directory for artifacts")->capture_default_str();
  app.add_option("--shots", run.g.shots, "Measurement shots (default: exact expectation)")
      ->check(CLI::PositiveNumber);
  app.add_option("--depolarizing", run.g.depolarizing, "Global depolarizing probability")
      ->check(CLI::Range(0.0, 1.0));
  app.add_flag("--json-logs", run.g.json_logs, "Structured JSON log lines on stderr");
  app.add_flag("-v,--verbose", run.g.verbose, "Info-level logging");

  DatagenOpts dg;
  auto* s_datagen = app.add_subcommand("datagen", "Generate a synthetic dataset");
  s_datagen->add_option("--kind", dg.kind, "trig-poly | circuit")
      ->check(CLI::IsMember({"trig-poly", "circuit"}))->capture_default_str();
  s_datagen->add_option("--features", dg.features, "Input dimension")->capture_default_str();
  s_datagen->add_option("--size", dg.size, "Rows")->capture_default_str();
  s_datagen->add_option("--noise-sd", dg.noise_sd, "Gaussian target noise")->capture_default_str();
  s_datagen->add_option("-o,--output", dg.output)->capture_default_str();
  s_datagen->add_flag("--csv", dg.csv, "Also write a CSV copy");

  PreprocessOpts pp;
  auto* s_pre = app.add_subcommand("preprocess", "Normalize, PCA, DBSCAN, rescale, split");
  s_pre->add_option("--input", pp.input, "Dataset JSON")->check(CLI::ExistingFile);
  s_pre->add_option("--csv", pp.csv, "CSV input (header row)")->check(CLI::ExistingFile);
  s_pre->add_option("--target", pp.target, "Target column for --csv")->capture_default_str();
  s_pre->add_flag("!--no-normalize", pp.normalize, "Skip min-max normalisation");
  s_pre->add_flag("!--no-rescale", pp.rescale, "Skip target rescaling to [-1,1]");
  s_pre->add_option("--pca", pp.pca, "Number of principal components (0: off)");
  s_pre->add_option("--dbscan-eps", pp.dbscan_eps, "DBSCAN radius (0: off)");
  s_pre->add_option("--min-pts", pp.min_pts, "DBSCAN core threshold")->capture_default_str();
  s_pre->add_option("--split", pp.split, "Train fraction (0: no split)");
  s_pre->add_option("-o,--output", pp.output)->capture_default_str();

  TrainOpts tr;
  auto* s_train = app.add_subcommand("train", "Parameter-shift gradient descent");
  s_train->add_option("--data", tr.data, "Training dataset JSON")->required()->check(CLI::ExistingFile);
  s_train->add_option("--qubits", tr.qubits, "Qubits (default: number of features)");
  s_train->add_option("--layers", tr.layers)->capture_default_str();
  s_train->add_option("--lr", tr.lr)->capture_default_str();
  s_train->add_option("--iters", tr.iters)->capture_default_str();
  s_train->add_option("--batch", tr.batch, "Minibatch size (0: full batch)")->capture_default_str();
  s_train->add_option("--tol", tr.tol, "Stop when the loss changes less than this")->capture_default_str();
  s_train->add_option("-o,--output", tr.output)->capture_default_str();

  SurrogateOpts su;
  auto* s_sur = app.add_subcommand("surrogate", "Build a Fourier surrogate (exact | rff)");
  s_sur->add_option("mode", su.mode, "exact | rff")->required()->check(CLI::IsMember({"exact", "rff"}));
  s_sur->add_option("--circuit", su.circuit, "Circuit JSON")->required()->check(CLI::ExistingFile);
  s_sur->add_option("--data", su.data, "Dataset JSON (rff)")->check(CLI::ExistingFile);
  s_sur->add_option("--frequencies,-D", su.frequencies, "Sampled frequencies (rff)");
  s_sur->add_option("--sampling", su.sampling, "integer | continuous")
      ->check(CLI::IsMember({"integer", "continuous"}))->capture_default_str();
  s_sur->add_option("--cap", su.cap, "Largest lattice the exact method may build")->capture_default_str();
  s_sur->add_option("--rcond", su.rcond, "Relative singular value cutoff")->capture_default_str();
  s_sur->add_option("-o,--output", su.output)->capture_default_str();

  EvalOpts ev;
  auto* s_eval = app.add_subcommand("eval", "Test MSE of a surrogate and/or circuit");
  s_eval->add_option("--surrogate", ev.surrogate)->check(CLI::ExistingFile);
  s_eval->add_option("--circuit", ev.circuit)->check(CLI::ExistingFile);
  s_eval->add_option("--data", ev.data)->required()->check(CLI::ExistingFile);
  s_eval->add_option("-o,--output", ev.output)->capture_default_str();

  EstimateOpts es;
  auto* s_est = app.add_subcommand("estimate", "Memory of the dense full-grid design matrix");
  s_est->add_option("--qubits", es.qubits)->required()->check(CLI::PositiveNumber);
  s_est->add_option("--layers", es.layers)->required()->check(CLI::PositiveNumber);
  s_est->add_option("--features", es.features, "Input dimension (0: one per qubit)");
  s_est->add_option("--bytes-per-entry", es.bytes_per_entry)->capture_default_str();
  s_est->add_option("-o,--output", es.output)->capture_default_str();

  BoundsOpts bo;
  auto* s_bnd = app.add_subcommand("bounds", "Random-feature sample-complexity bounds");
  s_bnd->add_option("--qubits", bo.qubits);
  s_bnd->add_option("--layers", bo.layers)->capture_default_str();
  s_bnd->add_option("--features", bo.features, "Input dimension (0: one per qubit)");
  s_bnd->add_option("--omega-max", bo.omega_max, "Per-feature maximal frequency")->delimiter(',');
  s_bnd->add_option("--epsilon", bo.epsilon)->capture_default_str();
  s_bnd->add_option("--delta", bo.delta)->capture_default_str();
  s_bnd->add_option("--kernel-sup", bo.kernel_sup, "Supremum term of alpha (default: estimated)");
  s_bnd->add_option("--kernel-trials", bo.kernel_trials)->capture_default_str();
  s_bnd->add_option("--sigma-p", bo.sigma_p, "Override the lattice sigma_p");
  s_bnd->add_option("--diameter", bo.diameter, "Override the domain diameter");
  s_bnd->add_option("--frequencies,-D", bo.frequencies, "Evaluate the failure probability here");
  s_bnd->add_option("--lambda0", bo.lambda0)->capture_default_str();
  s_bnd->add_option("--train-size", bo.train_size)->capture_default_str();
  s_bnd->add_option("--c1", bo.c1)->capture_default_str();
  s_bnd->add_option("--c2", bo.c2)->capture_default_str();
  s_bnd->add_option("--domain-size", bo.domain_size)->capture_default_str();
  s_bnd->add_option("-o,--output", bo.output)->capture_default_str();

  SweepOpts sw;
  auto* s_sweep = app.add_subcommand("sweep", "Minimal frequencies/datapoints versus qubit count");
  s_sweep->add_option("--quantity", sw.quantity, "frequencies | datapoints")
      ->check(CLI::IsMember({"frequencies", "datapoints"}))->capture_default_str();
  s_sweep->add_option("--qubits-min", sw.qubits_min)->capture_default_str();
  s_sweep->add_option("--qubits-max", sw.qubits_max)->capture_default_str();
  s_sweep->add_option("--thresholds", sw.thresholds, "Relative MSE deviations")->delimiter(',');
  s_sweep->add_option("--seeds", sw.seeds)->capture_default_str();
  s_sweep->add_option("--fixed-frequencies", sw.fixed_frequencies,
                      "Frequencies in datapoints mode (0: min(10^4, canonical))");
  s_sweep->add_option("--max-quantity", sw.max_quantity, "Search budget (0: automatic)");
  s_sweep->add_flag("--vary-model", sw.vary_model, "Retrain the model for every seed");
  add_fixture_flags(s_sweep, sw.fixture);

  ShowcaseOpts sc;
  auto* s_show = app.add_subcommand("showcase", "Trained model versus its RFF surrogate");
  s_show->add_option("--circuit", sc.circuit)->check(CLI::ExistingFile);
  s_show->add_option("--train", sc.train)->check(CLI::ExistingFile);
  s_show->add_option("--test", sc.test)->check(CLI::ExistingFile);
  s_show->add_option("--qubits", sc.qubits)->capture_default_str();
  s_show->add_option("--frequencies,-D", sc.frequencies, "Sampled frequencies (0: 1% of the lattice)");
  s_show->add_option("--seeds", sc.seeds)->capture_default_str();
  add_fixture_flags(s_show, sc.fixture);

  ReplayOpts rp;
  auto* s_replay = app.add_subcommand("replay", "Re-run a manifest and compare artifacts");
  s_replay->add_option("manifest", rp.manifest)->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what(), 1);
    return 1;
  }

  log::set_json(run.g.json_logs);
  log::set_min_level(run.g.verbose ? log::Level::Info : log::Level::Warn);

  std::string command;
  try {
    if (*s_datagen) command = "datagen", cmd_datagen(run, dg);
    else if (*s_pre) command = "preprocess", cmd_preprocess(run, pp);
    else if (*s_train) command = "train", cmd_train(run, tr);
    else if (*s_sur) command = "surrogate", cmd_surrogate(run, su);
    else if (*s_eval) command = "eval", cmd_eval(run, ev);
    else if (*s_est) command = "estimate", cmd_estimate(run, es);
    else if (*s_bnd) command = "bounds", cmd_bounds(run, bo);
    else if (*s_sweep) command = "sweep", cmd_sweep(run, sw);
    else if (*s_show) command = "showcase", cmd_showcase(run, sc);
    else if (*s_replay) command = "replay", cmd_replay(run, rp, err);

    RunManifest m;
    m.command = command;
    m.argv = args;
    m.out_dir = run.g.out_dir;
    m.config = run.config;
    m.seeds = {{"seed", run.g.seed}};
    if (run.g.shots) m.config["shots"] = *run.g.shots;
    m.config["depolarizing"] = run.g.depolarizing;
    m.config["simd_backend"] = kernels::backend_name(kernels::active_backend());
    m.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.artifacts = run.artifacts;
    m.version = QSURR_VERSION;
    write_text(fs::path(run.g.out_dir) / kManifestName, dump(json(m)));

    json summary = {{"command", command}, {"artifacts", json::array()}};
    for (const auto& a : run.artifacts) summary["artifacts"].push_back((fs::path(run.g.out_dir) / a).string());
    out << summary.dump() << "\n";
    return 0;
  } catch (const Error& e) {
    report_error(err, e.name(), e.what(), exit_code(e.kind()));
    return exit_code(e.kind());
  } catch (const json::exception& e) {
    report_error(err, "MalformedInput", e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what(), 3);
    return 3;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return execute(args, out, err);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return execute(args, out, err);
}

}  // namespace qsurr::cli
