#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "qsurr/error.hpp"
#include "qsurr/kernels.hpp"
#include "qsurr/log.hpp"
#include "qsurr/surrogate.hpp"

namespace qsurr::surrogate {

namespace {

constexpr double kLeakageWarn = 1e-6;

bool integral(double v) {
  return std::isfinite(v) && v == std::round(v) && std::abs(v) < 2147483647.0;
}

}  // namespace

void SurrogateModel::validate() const {
  spectrum.validate();
  if (a.size() != b.size() || a.size() != frequencies.rows())
    throw ShapeError("surrogate term arrays have inconsistent lengths");
  if (frequencies.rows() > 0 && frequencies.cols() != spectrum.d())
    throw ShapeError("surrogate frequencies do not match the spectrum dimension");
}

double conjugate_leakage(std::span<const FrequencyVector> freqs,
                         const Eigen::VectorXcd& coefficients) {
  std::map<FrequencyVector, Eigen::Index> index;
  for (std::size_t k = 0; k < freqs.size(); ++k) index.emplace(freqs[k], k);
  double worst = 0.0;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    if (freqs[k].is_zero()) {
      worst = std::max(worst, std::abs(coefficients(k).imag()));
      continue;
    }
    const auto it = index.find(freqs[k].negated());
    if (it != index.end())
      worst = std::max(worst, std::abs(coefficients(it->second) - std::conj(coefficients(k))));
  }
  return worst;
}

SurrogateModel from_complex_fit(const SpectrumDescriptor& desc,
                                std::span<const FrequencyVector> freqs,
                                const FitResult<std::complex<double>>& fit, Mode mode) {
  if (static_cast<Eigen::Index>(freqs.size()) != fit.coefficients.size())
    throw ShapeError("coefficient count does not match frequency count");
  std::map<FrequencyVector, Eigen::Index> index;
  for (std::size_t k = 0; k < freqs.size(); ++k) index.emplace(freqs[k], k);

  SurrogateModel m;
  m.spectrum = desc;
  m.mode = mode;
  m.residual = fit.residual_norm;

  std::vector<FrequencyVector> kept;
  std::vector<double> a, b;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    const auto c = fit.coefficients(k);
    if (freqs[k].is_zero()) {
      m.intercept = c.real();
    } else if (freqs[k].is_canonical()) {
      kept.push_back(freqs[k]);
      a.push_back(2.0 * c.real());
      b.push_back(2.0 * c.imag());
    } else if (!index.count(freqs[k].negated())) {
      // Lone non-canonical frequency: store it through its canonical partner.
      kept.push_back(freqs[k].negated());
      a.push_back(2.0 * c.real());
      b.push_back(-2.0 * c.imag());
    }
  }

  const double leak = conjugate_leakage(freqs, fit.coefficients);
  if (leak > kLeakageWarn) {
    log::warn("complex fit leaks " + std::to_string(leak) +
              " into non-conjugate coefficients; the frequency set may not be conjugate-closed");
  }

  m.frequencies = spectrum::to_matrix(kept);
  if (kept.empty()) m.frequencies.resize(0, desc.d());
  m.a = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
  m.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  return m;
}

SurrogateModel from_real_fit(const SpectrumDescriptor& desc, const Eigen::MatrixXd& freqs,
                             const FitResult<double>& fit, Mode mode) {
  if (fit.coefficients.size() != 1 + 2 * freqs.rows())
    throw ShapeError("real fit must have 1 + 2D coefficients");
  SurrogateModel m;
  m.spectrum = desc;
  m.mode = mode;
  m.residual = fit.residual_norm;
  m.frequencies = freqs;
  m.intercept = fit.coefficients(0);
  m.a.resize(freqs.rows());
  m.b.resize(freqs.rows());
  for (Eigen::Index k = 0; k < freqs.rows(); ++k) {
    m.a(k) = fit.coefficients(2 * k + 1);
    m.b(k) = fit.coefficients(2 * k + 2);
  }
  return m;
}

double predict(const SurrogateModel& model, std::span<const double> x) {
  if (static_cast<int>(x.size()) != model.d())
    throw ShapeError("input has " + std::to_string(x.size()) + " features, surrogate expects " +
                     std::to_string(model.d()));
  const auto n = static_cast<std::size_t>(model.frequencies.rows());
  if (n == 0) return model.intercept;

  thread_local std::vector<double> phase, cosv, sinv;
  phase.assign(n, 0.0);
  cosv.resize(n);
  sinv.resize(n);
  const auto& k = kernels::active();
  for (int t = 0; t < model.d(); ++t)
    if (x[t] != 0.0) k.axpy(phase.data(), model.frequencies.col(t).data(), x[t], n);
  for (std::size_t i = 0; i < n; ++i) {
    cosv[i] = std::cos(phase[i]);
    sinv[i] = std::sin(phase[i]);
  }
  return model.intercept + (k.dot(model.a.data(), cosv.data(), n) +
                            k.dot(model.b.data(), sinv.data(), n));
}

Eigen::VectorXd predict(const SurrogateModel& model, const PointMatrix& points) {
  Eigen::VectorXd out(points.rows());
  std::vector<double> row(points.cols());
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) row[c] = points(r, c);
    out(r) = predict(model, row);
  }
  return out;
}

double mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y) {
  if (y.size() == 0) throw PreconditionError("mse needs a nonempty set");
  if (predictions.size() != y.size()) throw ShapeError("prediction/target length mismatch");
  return (predictions - y).squaredNorm() / static_cast<double>(y.size());
}

double mse(const SurrogateModel& model, const PointMatrix& points, const Eigen::VectorXd& y) {
  if (points.rows() == 0) throw PreconditionError("mse needs a nonempty set");
  return mse(predict(model, points), y);
}

double sup_error(const SurrogateModel& model, const Oracle& oracle, const PointMatrix& points) {
  if (points.rows() == 0) throw PreconditionError("sup_error needs a nonempty set");
  double worst = 0.0;
  std::vector<double> row(points.cols());
  for (Eigen::Index r = 0; r < points.rows(); ++r) {
    for (Eigen::Index c = 0; c < points.cols(); ++c) row[c] = points(r, c);
    worst = std::max(worst, std::abs(oracle(row) - predict(model, row)));
  }
  return worst;
}

double relative_mse_deviation(double mse_surrogate, double mse_quantum) {
  if (!(mse_quantum > 0.0))
    throw PreconditionError("relative deviation needs a positive reference MSE");
  return (mse_surrogate - mse_quantum) / mse_quantum;
}

std::string to_string(Mode m) { return m == Mode::Exact ? "exact" : "rff"; }

Mode mode_from_string(const std::string& s) {
  if (s == "exact") return Mode::Exact;
  if (s == "rff") return Mode::Rff;
  throw PreconditionError("unknown surrogate mode '" + s + "'");
}

void to_json(nlohmann::json& j, const SurrogateModel& m) {
  nlohmann::json terms = nlohmann::json::array();
  for (Eigen::Index k = 0; k < m.frequencies.rows(); ++k) {
    nlohmann::json freq = nlohmann::json::array();
    for (Eigen::Index t = 0; t < m.frequencies.cols(); ++t) {
      const double v = m.frequencies(k, t);
      if (integral(v))
        freq.push_back(static_cast<int>(v));
      else
        freq.push_back(v);
    }
    terms.push_back({{"freq", std::move(freq)}, {"a", m.a(k)}, {"b", m.b(k)}});
  }
  j = nlohmann::json{{"d", m.d()},
                     {"omega_max", m.spectrum.omega_max},
                     {"intercept", m.intercept},
                     {"terms", std::move(terms)},
                     {"mode", to_string(m.mode)},
                     {"residual", m.residual}};
}

void from_json(const nlohmann::json& j, SurrogateModel& m) {
  SurrogateModel out;
  const int d = j.at("d").get<int>();
  out.spectrum.omega_max = j.at("omega_max").get<std::vector<int>>();
  if (out.spectrum.d() != d) throw ShapeError("omega_max length does not match d");
  out.intercept = j.at("intercept").get<double>();
  out.mode = mode_from_string(j.at("mode").get<std::string>());
  out.residual = j.at("residual").get<double>();
  const auto& terms = j.at("terms");
  out.frequencies.resize(static_cast<Eigen::Index>(terms.size()), d);
  out.a.resize(static_cast<Eigen::Index>(terms.size()));
  out.b.resize(static_cast<Eigen::Index>(terms.size()));
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& f = terms[k].at("freq");
    if (static_cast<int>(f.size()) != d) throw ShapeError("term frequency has wrong dimension");
    for (int t = 0; t < d; ++t) out.frequencies(k, t) = f[t].get<double>();
    out.a(k) = terms[k].at("a").get<double>();
    out.b(k) = terms[k].at("b").get<double>();
  }
  out.validate();
  m = std::move(out);
}

}  // namespace qsurr::surrogate
