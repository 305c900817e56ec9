#include <cmath>
#include <string>

#include "qsurr/error.hpp"
#include "qsurr/kernels.hpp"
#include "qsurr/surrogate.hpp"

namespace qsurr::surrogate {

namespace {

void check_inputs(const PointMatrix& points, Eigen::Index n_freqs, Eigen::Index freq_dim) {
  if (points.rows() == 0) throw PreconditionError("design matrix needs at least one point");
  if (n_freqs == 0) throw PreconditionError("design matrix needs at least one frequency");
  if (points.cols() != freq_dim)
    throw ShapeError("points have dimension " + std::to_string(points.cols()) +
                     " but frequencies have dimension " + std::to_string(freq_dim));
  if (!points.allFinite()) throw PreconditionError("points must be finite");
}

}  // namespace

Eigen::MatrixXd phase_matrix(const PointMatrix& points, const Eigen::MatrixXd& freqs) {
  check_inputs(points, freqs.rows(), freqs.cols());
  const auto& k = kernels::active();
  const auto rows = static_cast<std::size_t>(points.rows());
  Eigen::MatrixXd phases = Eigen::MatrixXd::Zero(points.rows(), freqs.rows());
  for (Eigen::Index f = 0; f < freqs.rows(); ++f) {
    double* col = phases.col(f).data();
    for (Eigen::Index t = 0; t < freqs.cols(); ++t) {
      const double w = freqs(f, t);
      if (w != 0.0) k.axpy(col, points.col(t).data(), w, rows);
    }
  }
  return phases;
}

ComplexDesign build_complex_design(const PointMatrix& points,
                                   std::span<const FrequencyVector> freqs) {
  if (freqs.empty()) throw PreconditionError("design matrix needs at least one frequency");
  ComplexDesign out;
  out.frequencies = spectrum::to_matrix(freqs);
  const Eigen::MatrixXd phases = phase_matrix(points, out.frequencies);
  out.entries.resize(phases.rows(), phases.cols());
  for (Eigen::Index c = 0; c < phases.cols(); ++c)
    for (Eigen::Index r = 0; r < phases.rows(); ++r)
      out.entries(r, c) = std::complex<double>(std::cos(phases(r, c)), -std::sin(phases(r, c)));
  return out;
}

RealDesign build_real_design(const PointMatrix& points, const Eigen::MatrixXd& freqs) {
  for (Eigen::Index k = 0; k < freqs.rows(); ++k)
    if (freqs.row(k).isZero(0.0))
      throw PreconditionError("real design does not accept the zero frequency; the intercept "
                              "column already covers it");
  const Eigen::MatrixXd phases = phase_matrix(points, freqs);
  RealDesign out;
  out.frequencies = freqs;
  out.entries.resize(phases.rows(), 1 + 2 * phases.cols());
  out.entries.col(0).setOnes();
  for (Eigen::Index c = 0; c < phases.cols(); ++c) {
    for (Eigen::Index r = 0; r < phases.rows(); ++r) {
      out.entries(r, 2 * c + 1) = std::cos(phases(r, c));
      out.entries(r, 2 * c + 2) = std::sin(phases(r, c));
    }
  }
  return out;
}

RealDesign build_real_design(const PointMatrix& points, std::span<const FrequencyVector> freqs) {
  if (freqs.empty()) throw PreconditionError("design matrix needs at least one frequency");
  for (const auto& f : freqs) {
    if (f.is_zero()) throw PreconditionError("real design does not accept the zero frequency");
    if (!f.is_canonical())
      throw PreconditionError("real design needs canonical frequencies (first nonzero > 0)");
  }
  return build_real_design(points, spectrum::to_matrix(freqs));
}

}  // namespace qsurr::surrogate
