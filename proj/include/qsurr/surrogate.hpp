#pragma once

// Fourier design matrices, the SVD least-squares fit, and the deployable
// classical surrogate
//
//   s(x) = c0 + sum_w ( a_w cos(w.x) + b_w sin(w.x) ).

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "qsurr/spectrum.hpp"

namespace qsurr::surrogate {

using spectrum::FrequencyVector;
using spectrum::PointMatrix;
using spectrum::SpectrumDescriptor;

/// Entry (j, k) = exp(-i w_k . x_j). Row k of `frequencies` is w_k.
struct ComplexDesign {
  Eigen::MatrixXcd entries;
  Eigen::MatrixXd frequencies;
};

/// Columns [1, cos(w_1.x), sin(w_1.x), ..., cos(w_D.x), sin(w_D.x)].
/// Frequency k owns columns 2k+1 (cos) and 2k+2 (sin).
struct RealDesign {
  Eigen::MatrixXd entries;
  Eigen::MatrixXd frequencies;
};

inline constexpr double kDefaultRcond = 1e-10;

ComplexDesign build_complex_design(const PointMatrix& points,
                                   std::span<const FrequencyVector> freqs);

/// Frequencies must be canonical and nonzero.
RealDesign build_real_design(const PointMatrix& points, std::span<const FrequencyVector> freqs);
/// Real-valued frequencies (rows); each row must be nonzero.
RealDesign build_real_design(const PointMatrix& points, const Eigen::MatrixXd& freqs);

/// w.x for every point (rows) and frequency (columns).
Eigen::MatrixXd phase_matrix(const PointMatrix& points, const Eigen::MatrixXd& freqs);

template <class Scalar>
struct FitResult {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coefficients;
  double residual_norm = 0.0;  // ||A c - y||
  Eigen::Index rank = 0;
  Eigen::VectorXd singular_values;
};

/// Minimum-norm least-squares solution through the SVD pseudoinverse; singular
/// values below rcond * sigma_max are discarded.
FitResult<std::complex<double>> fit(const ComplexDesign& design, const Eigen::VectorXd& y,
                                    double rcond = kDefaultRcond);
FitResult<double> fit(const RealDesign& design, const Eigen::VectorXd& y,
                      double rcond = kDefaultRcond);

/// Dense pseudoinverse, exposed for checks against direct solves.
Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a, double rcond = kDefaultRcond);

enum class Mode { Exact, Rff };

struct SurrogateModel {
  SpectrumDescriptor spectrum;
  double intercept = 0.0;
  Eigen::MatrixXd frequencies;  // D x d
  Eigen::VectorXd a;            // cosine coefficients
  Eigen::VectorXd b;            // sine coefficients
  Mode mode = Mode::Rff;
  double residual = 0.0;
  std::string source_fingerprint;  // not serialised

  int d() const { return spectrum.d(); }
  std::size_t n_terms() const { return static_cast<std::size_t>(a.size()); }
  void validate() const;
};

/// Converts a complex fit over `freqs` into cos/sin storage:
/// c0 = Re c_0, a_w = 2 Re c_w, b_w = 2 Im c_w for canonical nonzero w.
/// Logs a warning when imaginary leakage exceeds 1e-6.
SurrogateModel from_complex_fit(const SpectrumDescriptor& desc,
                                std::span<const FrequencyVector> freqs,
                                const FitResult<std::complex<double>>& fit, Mode mode);

/// Largest violation of c_{-w} = conj(c_w) and of Im c_0 = 0.
double conjugate_leakage(std::span<const FrequencyVector> freqs,
                         const Eigen::VectorXcd& coefficients);

/// Model from a real fit over canonical frequencies (coefficient 0 is the intercept).
SurrogateModel from_real_fit(const SpectrumDescriptor& desc, const Eigen::MatrixXd& freqs,
                             const FitResult<double>& fit, Mode mode);

double predict(const SurrogateModel& model, std::span<const double> x);
Eigen::VectorXd predict(const SurrogateModel& model, const PointMatrix& points);

double mse(const SurrogateModel& model, const PointMatrix& points, const Eigen::VectorXd& y);
double mse(const Eigen::VectorXd& predictions, const Eigen::VectorXd& y);

using Oracle = std::function<double(std::span<const double>)>;
/// max |oracle(x) - s(x)| over the rows of points.
double sup_error(const SurrogateModel& model, const Oracle& oracle, const PointMatrix& points);

/// (mse_surrogate - mse_quantum) / mse_quantum
double relative_mse_deviation(double mse_surrogate, double mse_quantum);

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

void to_json(nlohmann::json& j, const SurrogateModel& m);
void from_json(const nlohmann::json& j, SurrogateModel& m);

}  // namespace qsurr::surrogate
