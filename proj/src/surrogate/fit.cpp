#include <Eigen/SVD>

#include <string>

#include "qsurr/error.hpp"
#include "qsurr/surrogate.hpp"

namespace qsurr::surrogate {

namespace {

template <class Matrix>
FitResult<typename Matrix::Scalar> svd_solve(const Matrix& a, const Eigen::VectorXd& y,
                                             double rcond) {
  using Scalar = typename Matrix::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  if (a.rows() == 0 || a.cols() == 0) throw PreconditionError("empty design matrix");
  if (a.rows() != y.size())
    throw ShapeError("design has " + std::to_string(a.rows()) + " rows but " +
                     std::to_string(y.size()) + " targets were given");
  if (!(rcond > 0.0 && rcond < 1.0)) throw PreconditionError("rcond must lie in (0, 1)");
  if (!a.allFinite() || !y.allFinite())
    throw PreconditionError("design matrix and targets must be finite");

  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(0) > 0.0)) throw NumericalError("AllZeroDesign", "design matrix is identically zero");

  const double cutoff = rcond * s(0);
  Eigen::Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;

  const Vector yc = y.template cast<Scalar>();
  Vector proj = svd.matrixU().leftCols(rank).adjoint() * yc;
  for (Eigen::Index i = 0; i < rank; ++i) proj(i) /= s(i);

  FitResult<Scalar> out;
  out.coefficients = svd.matrixV().leftCols(rank) * proj;
  out.residual_norm = (a * out.coefficients - yc).norm();
  out.rank = rank;
  out.singular_values = s;
  return out;
}

}  // namespace

FitResult<std::complex<double>> fit(const ComplexDesign& design, const Eigen::VectorXd& y,
                                    double rcond) {
  return svd_solve(design.entries, y, rcond);
}

FitResult<double> fit(const RealDesign& design, const Eigen::VectorXd& y, double rcond) {
  return svd_solve(design.entries, y, rcond);
}

Eigen::MatrixXd pseudoinverse(const Eigen::MatrixXd& a, double rcond) {
  if (a.size() == 0) throw PreconditionError("empty matrix");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  if (!(s(0) > 0.0)) throw NumericalError("AllZeroDesign", "matrix is identically zero");
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rcond * s(0)) inv(i) = 1.0 / s(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace qsurr::surrogate
