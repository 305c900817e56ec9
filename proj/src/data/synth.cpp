#include <algorithm>
#include <cmath>
#include <random>

#include "qsurr/data.hpp"
#include "qsurr/error.hpp"
#include "qsurr/pipeline.hpp"
#include "qsurr/rng.hpp"
#include "qsurr/spectrum.hpp"

namespace qsurr::data {

namespace {

constexpr int kTrigOmega = 2;
constexpr std::size_t kTrigTerms = 32;

}  // namespace

std::string to_string(SynthKind k) { return k == SynthKind::TrigPoly ? "trig-poly" : "circuit"; }

SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "trig-poly") return SynthKind::TrigPoly;
  if (s == "circuit") return SynthKind::Circuit;
  throw PreconditionError("unknown synthetic kind '" + s + "' (expected trig-poly or circuit)");
}

double TrigPoly::operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  double s = c0;
  for (Eigen::Index k = 0; k < freqs.rows(); ++k) {
    const double phase = freqs.row(k).dot(x);
    s += a(k) * std::cos(phase) + b(k) * std::sin(phase);
  }
  return s / scale;
}

void to_json(nlohmann::json& j, const TrigPoly& t) {
  nlohmann::json terms = nlohmann::json::array();
  for (Eigen::Index k = 0; k < t.freqs.rows(); ++k) {
    std::vector<int> f(t.freqs.cols());
    for (Eigen::Index c = 0; c < t.freqs.cols(); ++c) f[c] = static_cast<int>(t.freqs(k, c));
    terms.push_back({{"freq", f}, {"a", t.a(k)}, {"b", t.b(k)}});
  }
  j = nlohmann::json{{"c0", t.c0}, {"scale", t.scale}, {"terms", std::move(terms)}};
}

void from_json(const nlohmann::json& j, TrigPoly& t) {
  const auto& terms = j.at("terms");
  const auto n = static_cast<Eigen::Index>(terms.size());
  const auto d = n > 0 ? static_cast<Eigen::Index>(terms[0].at("freq").size()) : 0;
  t.c0 = j.at("c0").get<double>();
  t.scale = j.at("scale").get<double>();
  t.freqs.resize(n, d);
  t.a.resize(n);
  t.b.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto f = terms[k].at("freq").get<std::vector<int>>();
    if (static_cast<Eigen::Index>(f.size()) != d) throw ShapeError("trig-poly term has wrong dimension");
    for (Eigen::Index c = 0; c < d; ++c) t.freqs(k, c) = f[c];
    t.a(k) = terms[k].at("a").get<double>();
    t.b(k) = terms[k].at("b").get<double>();
  }
}

Dataset synth_generate(int d, std::size_t size, SynthKind kind, std::uint64_t seed,
                       double noise_sd) {
  if (d < 1) throw PreconditionError("synthetic data needs d >= 1");
  if (size < 1) throw PreconditionError("synthetic data needs size >= 1");
  if (!(noise_sd >= 0.0)) throw PreconditionError("noise_sd must be non-negative");

  Dataset ds;
  const auto n = static_cast<Eigen::Index>(size);
  ds.X.resize(n, d);
  {
    Rng rng(derive_seed(seed, 0));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // Row-major draw order so a prefix of rows does not depend on d.
    for (Eigen::Index r = 0; r < n; ++r)
      for (int c = 0; c < d; ++c) ds.X(r, c) = u(rng);
  }
  for (int c = 0; c < d; ++c) ds.feature_names.push_back("x" + std::to_string(c));

  nlohmann::json record = {{"op", "synth"},
                           {"kind", to_string(kind)},
                           {"d", d},
                           {"size", size},
                           {"seed", seed},
                           {"noise_sd", noise_sd}};
  Eigen::VectorXd clean(n);

  if (kind == SynthKind::TrigPoly) {
    spectrum::SpectrumDescriptor desc{std::vector<int>(static_cast<std::size_t>(d), kTrigOmega)};
    const auto available = spectrum::canonical_count(desc);
    const std::size_t terms =
        available < kTrigTerms ? static_cast<std::size_t>(available) : kTrigTerms;
    TrigPoly truth;
    truth.freqs = spectrum::to_matrix(spectrum::sample_distinct(desc, terms, derive_seed(seed, 1)));
    Rng rng(derive_seed(seed, 2));
    std::normal_distribution<double> g(0.0, 1.0);
    truth.c0 = g(rng);
    truth.a.resize(static_cast<Eigen::Index>(terms));
    truth.b.resize(static_cast<Eigen::Index>(terms));
    for (std::size_t k = 0; k < terms; ++k) {
      truth.a(static_cast<Eigen::Index>(k)) = g(rng);
      truth.b(static_cast<Eigen::Index>(k)) = g(rng);
    }
    for (Eigen::Index r = 0; r < n; ++r) clean(r) = truth(ds.X.row(r));
    const double peak = clean.cwiseAbs().maxCoeff();
    truth.scale = peak > 0.0 ? peak : 1.0;
    clean /= truth.scale;
    record["truth"] = truth;
  } else {
    const auto cfg = qsim::CircuitConfig::make(d, 2, d);
    const auto params = qsim::ParameterSet::random(cfg, derive_seed(seed, 1));
    clean = pipeline::evaluate(cfg, params, ds.X);
    record["config"] = cfg;
    record["params"] = params;
  }

  ds.y = clean;
  if (noise_sd > 0.0) {
    Rng rng(derive_seed(seed, 3));
    std::normal_distribution<double> g(0.0, noise_sd);
    for (Eigen::Index r = 0; r < n; ++r) ds.y(r) += g(rng);
  }
  ds.provenance.push_back(std::move(record));
  return ds;
}

}  // namespace qsurr::data
