#include <Eigen/Eigenvalues>

#include "qsurr/data.hpp"
#include "qsurr/error.hpp"

namespace qsurr::data {

PcaResult pca(const Dataset& ds, int k) {
  ds.validate();
  const auto p = ds.cols();
  if (k < 1 || k > p)
    throw PreconditionError("pca: k=" + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  if (ds.rows() < 2) throw PreconditionError("pca needs at least two rows");

  PcaResult out;
  out.mean = ds.X.colwise().mean().transpose();
  const Eigen::MatrixXd centred = ds.X.rowwise() - out.mean.transpose();
  const Eigen::MatrixXd cov = (centred.transpose() * centred) / static_cast<double>(ds.rows() - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  if (es.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");
  // Eigen returns ascending order.
  out.eigenvalues = es.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd vecs = es.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, c) < 0.0) vecs.col(c) = -vecs.col(c);
  }
  out.components = vecs.leftCols(k);

  const double total = out.eigenvalues.sum();
  out.explained_ratio = total > 0.0 ? Eigen::VectorXd(out.eigenvalues.head(k) / total)
                                    : Eigen::VectorXd::Zero(k);
  out.scores = centred * out.components;

  Dataset reduced;
  reduced.X = out.scores;
  reduced.y = ds.y;
  reduced.target_name = ds.target_name;
  for (int c = 0; c < k; ++c) reduced.feature_names.push_back("pc" + std::to_string(c));
  reduced.provenance = ds.provenance;
  reduced.provenance.push_back(
      {{"op", "pca"},
       {"k", k},
       {"explained_ratio",
        std::vector<double>(out.explained_ratio.data(), out.explained_ratio.data() + k)}});
  // Renormalise the scores without recording a separate normalize step.
  for (Eigen::Index c = 0; c < k; ++c) {
    const double lo = reduced.X.col(c).minCoeff();
    const double span = reduced.X.col(c).maxCoeff() - lo;
    if (span > 0.0)
      reduced.X.col(c) = ((reduced.X.col(c).array() - lo) / span).matrix();
    else
      reduced.X.col(c).setZero();
  }
  out.data = std::move(reduced);
  return out;
}

}  // namespace qsurr::data
