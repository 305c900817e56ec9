#include <deque>

#include "qsurr/data.hpp"
#include "qsurr/error.hpp"
#include "qsurr/kernels.hpp"

namespace qsurr::data {

namespace {

constexpr int kUnvisited = -2;

// Indices within eps of row i (inclusive, i itself included).
void neighbours(const Eigen::MatrixXd& X, Eigen::Index i, double eps2, std::vector<double>& dist,
                std::vector<Eigen::Index>& out) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto& k = kernels::active();
  dist.assign(n, 0.0);
  for (Eigen::Index c = 0; c < X.cols(); ++c) k.accumulate_sq_diff(dist.data(), X.col(c).data(), X(i, c), n);
  out.clear();
  for (std::size_t j = 0; j < n; ++j)
    if (dist[j] <= eps2) out.push_back(static_cast<Eigen::Index>(j));
}

}  // namespace

std::vector<int> dbscan_labels(const Eigen::MatrixXd& X, double eps, int min_pts) {
  if (!(eps > 0.0)) throw PreconditionError("dbscan eps must be positive");
  if (min_pts < 1) throw PreconditionError("dbscan min_pts must be at least 1");
  const Eigen::Index n = X.rows();
  const double eps2 = eps * eps;
  std::vector<int> labels(static_cast<std::size_t>(n), kUnvisited);
  std::vector<double> dist;
  std::vector<Eigen::Index> nb, nb2;
  int cluster = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (labels[i] != kUnvisited) continue;
    neighbours(X, i, eps2, dist, nb);
    if (static_cast<int>(nb.size()) < min_pts) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    std::deque<Eigen::Index> queue(nb.begin(), nb.end());
    while (!queue.empty()) {
      const Eigen::Index j = queue.front();
      queue.pop_front();
      if (labels[j] == kNoise) labels[j] = cluster;  // border point
      if (labels[j] != kUnvisited) continue;
      labels[j] = cluster;
      neighbours(X, j, eps2, dist, nb2);
      if (static_cast<int>(nb2.size()) >= min_pts)
        for (Eigen::Index q : nb2)
          if (labels[q] == kUnvisited || labels[q] == kNoise) queue.push_back(q);
    }
    ++cluster;
  }
  return labels;
}

DbscanResult dbscan(const Dataset& ds, double eps, int min_pts) {
  ds.validate();
  DbscanResult out;
  out.labels = dbscan_labels(ds.X, eps, min_pts);
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < out.labels.size(); ++i) {
    if (out.labels[i] == kNoise)
      ++out.n_noise;
    else
      keep.push_back(static_cast<Eigen::Index>(i));
    out.n_clusters = std::max(out.n_clusters, out.labels[i] + 1);
  }
  out.filtered = ds.select(keep);
  out.filtered.provenance.push_back({{"op", "dbscan"},
                                     {"eps", eps},
                                     {"min_pts", min_pts},
                                     {"clusters", out.n_clusters},
                                     {"removed", out.n_noise}});
  return out;
}

}  // namespace qsurr::data
