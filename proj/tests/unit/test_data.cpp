#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qsurr/data.hpp"
#include "qsurr/error.hpp"

using namespace qsurr;
using namespace qsurr::data;

namespace {

Dataset make(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  Dataset ds;
  ds.X = X;
  ds.y = y;
  for (Eigen::Index c = 0; c < X.cols(); ++c) ds.feature_names.push_back("f" + std::to_string(c));
  return ds;
}

Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXd X(n, d);
  for (auto& v : X.reshaped()) v = g(rng);
  return X;
}

}  // namespace

TEST(Csv, ParsesColumns) {
  std::istringstream in("f0,f1,target\n1,2,3\n4,5,6\n7,8,9\n");
  const auto r = read_csv(in, "target");
  EXPECT_EQ(r.data.rows(), 3);
  EXPECT_EQ(r.data.cols(), 2);
  EXPECT_EQ(r.data.y(2), 9.0);
  EXPECT_EQ(r.data.X(1, 1), 5.0);
  EXPECT_EQ(r.data.feature_names, (std::vector<std::string>{"f0", "f1"}));
  EXPECT_EQ(r.rejected_rows, 0u);
}

TEST(Csv, TargetInMiddle) {
  std::istringstream in("a,y,b\n1,2,3\n");
  const auto r = read_csv(in, "y");
  EXPECT_EQ(r.data.y(0), 2.0);
  EXPECT_EQ(r.data.X(0, 1), 3.0);
}

TEST(Csv, MissingColumnNamed) {
  std::istringstream in("f0,f1\n1,2\n");
  try {
    read_csv(in, "target");
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("target"), std::string::npos);
  }
}

TEST(Csv, ParseErrorLocation) {
  std::istringstream in("f0,target\n1,2\n3,abc\n");
  try {
    read_csv(in, "target");
    FAIL();
  } catch (const IoError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
  }
}

TEST(Csv, RejectsNonFiniteRows) {
  std::istringstream in("f0,target\n1,2\nnan,2\n3,inf\n4,5\n");
  const auto r = read_csv(in, "target");
  EXPECT_EQ(r.data.rows(), 2);
  EXPECT_EQ(r.rejected_rows, 2u);
}

TEST(Csv, WriteReadRoundTrip) {
  const auto ds = synth_generate(3, 20, SynthKind::TrigPoly, 4, 0.1);
  std::stringstream buf;
  write_csv(buf, ds);
  const auto back = read_csv(buf, ds.target_name).data;
  EXPECT_EQ(back.X, ds.X);
  EXPECT_EQ(back.y, ds.y);
}

TEST(Normalize, Examples) {
  Eigen::MatrixXd X(3, 2);
  X << 2, 5, 4, 5, 6, 5;
  const auto out = normalize(make(X, Eigen::Vector3d(0, 0, 0)));
  EXPECT_EQ(out.X.col(0), Eigen::Vector3d(0, 0.5, 1));
  EXPECT_EQ(out.X.col(1), Eigen::Vector3d(0, 0, 0));
  EXPECT_THROW(normalize(make(Eigen::MatrixXd(0, 2), Eigen::VectorXd(0))), PreconditionError);
}

TEST(Normalize, PureAndBounded) {
  const auto ds = make(gaussian(50, 4, 1), Eigen::VectorXd::Zero(50));
  const auto copy = ds.X;
  const auto out = normalize(ds);
  EXPECT_EQ(ds.X, copy);
  EXPECT_GE(out.X.minCoeff(), 0.0);
  EXPECT_LE(out.X.maxCoeff(), 1.0);
  EXPECT_EQ(out.provenance.back().at("op"), "normalize");
}

TEST(Rescale, UnitIntervalToSymmetric) {
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(11, 0.0, 1.0);
  const auto out = rescale_targets(make(Eigen::MatrixXd::Zero(11, 1), y));
  EXPECT_LT((out.y - (y * 2.0 - Eigen::VectorXd::Ones(11))).cwiseAbs().maxCoeff(), 1e-15);
  const auto& rec = out.provenance.back();
  EXPECT_EQ(rec.at("source_min"), 0.0);
  EXPECT_EQ(rec.at("source_max"), 1.0);
}

TEST(Pca, RankOne) {
  Eigen::MatrixXd X(30, 2);
  X.col(0) = Eigen::VectorXd::LinSpaced(30, -1, 2);
  X.col(1) = 2 * X.col(0);
  const auto r = pca(make(X, Eigen::VectorXd::Zero(30)), 1);
  EXPECT_NEAR(r.explained_ratio(0), 1.0, 1e-12);
}

TEST(Pca, FullRankOrderingAndSum) {
  const auto ds = make(gaussian(200, 5, 2) * Eigen::VectorXd::LinSpaced(5, 1, 3).asDiagonal(),
                       Eigen::VectorXd::Zero(200));
  const auto r = pca(ds, 5);
  EXPECT_NEAR(r.explained_ratio.sum(), 1.0, 1e-10);
  for (Eigen::Index i = 1; i < 5; ++i) EXPECT_LE(r.explained_ratio(i), r.explained_ratio(i - 1));
  EXPECT_GE(r.data.X.minCoeff(), 0.0);
  EXPECT_LE(r.data.X.maxCoeff(), 1.0);
  // Orthogonal transform: centred inner products are preserved.
  const Eigen::MatrixXd centred = ds.X.rowwise() - ds.X.colwise().mean();
  EXPECT_LT((r.scores * r.scores.transpose() - centred * centred.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  // Sign convention.
  for (Eigen::Index c = 0; c < r.components.cols(); ++c) {
    Eigen::Index arg;
    r.components.col(c).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(r.components(arg, c), 0.0);
  }
}

TEST(Pca, IsotropicSample) {
  const int d = 4;
  const auto r = pca(make(gaussian(10000, d, 3), Eigen::VectorXd::Zero(10000)), 1);
  EXPECT_NEAR(r.explained_ratio(0), 1.0 / d, 0.05);
}

TEST(Pca, RangeChecked) {
  const auto ds = make(gaussian(10, 3, 4), Eigen::VectorXd::Zero(10));
  EXPECT_THROW(pca(ds, 0), PreconditionError);
  EXPECT_THROW(pca(ds, 4), PreconditionError);
}

TEST(Dbscan, TwoClusters) {
  Eigen::MatrixXd X(8, 2);
  X << 0, 0, 0.5, 0, 0, 0.5, 0.5, 0.5, 100, 100, 100.5, 100, 100, 100.5, 100.5, 100.5;
  const auto r = dbscan(make(X, Eigen::VectorXd::Zero(8)), 2.0, 3);
  EXPECT_EQ(r.n_clusters, 2);
  EXPECT_EQ(r.n_noise, 0u);
  EXPECT_EQ(r.labels, (std::vector<int>{0, 0, 0, 0, 1, 1, 1, 1}));
}

TEST(Dbscan, IsolatedPointIsNoise) {
  Eigen::MatrixXd X(5, 2);
  X << 0, 0, 0.1, 0, 0, 0.1, 0.1, 0.1, 50, 50;
  const auto r = dbscan(make(X, Eigen::VectorXd::Zero(5)), 1.0, 3);
  EXPECT_EQ(r.labels[4], kNoise);
  EXPECT_EQ(r.filtered.rows(), 4);
}

TEST(Dbscan, MatchesBruteForce) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0, 1);
  for (int inst = 0; inst < 20; ++inst) {
    Eigen::MatrixXd X(200, 2);
    for (auto& v : X.reshaped()) v = u(rng);
    const double eps = 0.04 + 0.03 * (inst % 4);
    const int min_pts = 3 + inst % 5;
    EXPECT_EQ(dbscan_labels(X, eps, min_pts), oracle::dbscan(X, eps, min_pts)) << inst;
  }
}

TEST(Dbscan, NoiseSetPermutationInvariant) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::MatrixXd X(150, 3);
  for (auto& v : X.reshaped()) v = u(rng);
  const auto base = dbscan_labels(X, 0.15, 4);
  std::vector<Eigen::Index> perm(150);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  Eigen::MatrixXd Y(150, 3);
  for (Eigen::Index i = 0; i < 150; ++i) Y.row(i) = X.row(perm[i]);
  const auto shuffled = dbscan_labels(Y, 0.15, 4);
  for (Eigen::Index i = 0; i < 150; ++i) EXPECT_EQ(shuffled[i] == kNoise, base[perm[i]] == kNoise);
}

TEST(Dbscan, Preconditions) {
  EXPECT_THROW(dbscan_labels(Eigen::MatrixXd::Zero(3, 1), 0.0, 2), PreconditionError);
  EXPECT_THROW(dbscan_labels(Eigen::MatrixXd::Zero(3, 1), 1.0, 0), PreconditionError);
}

TEST(Split, SizesDeterminismPartition) {
  auto ds = make(Eigen::VectorXd::LinSpaced(10, 0, 9), Eigen::VectorXd::LinSpaced(10, 0, 9));
  const auto [tr, te] = train_test_split(ds, 0.7, 5);
  EXPECT_EQ(tr.rows(), 7);
  EXPECT_EQ(te.rows(), 3);
  const auto again = train_test_split(ds, 0.7, 5);
  EXPECT_EQ(again.first.X, tr.X);
  std::set<double> all;
  for (Eigen::Index i = 0; i < 7; ++i) all.insert(tr.X(i, 0));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_TRUE(all.insert(te.X(i, 0)).second);
  EXPECT_EQ(all.size(), 10u);
  EXPECT_THROW(train_test_split(ds, 0.01, 1), PreconditionError);
  EXPECT_THROW(train_test_split(ds, 1.0, 1), PreconditionError);
}

TEST(Synth, TrigPolyReproducibleFromTruth) {
  const auto ds = synth_generate(3, 100, SynthKind::TrigPoly, 12, 0.0);
  const auto truth = ds.provenance.at(0).at("truth").get<TrigPoly>();
  for (Eigen::Index r = 0; r < ds.rows(); ++r) EXPECT_EQ(truth(ds.X.row(r)), ds.y(r));
  EXPECT_LE(ds.y.cwiseAbs().maxCoeff(), 1.0);
  const auto again = synth_generate(3, 100, SynthKind::TrigPoly, 12, 0.0);
  EXPECT_EQ(again.X, ds.X);
  EXPECT_EQ(again.y, ds.y);
}

TEST(Synth, SingleRowAndCircuitRange) {
  EXPECT_EQ(synth_generate(2, 1, SynthKind::TrigPoly, 0, 0.1).rows(), 1);
  const auto c = synth_generate(4, 50, SynthKind::Circuit, 3, 0.0);
  EXPECT_LE(c.y.cwiseAbs().maxCoeff(), 1.0);
  EXPECT_GE(c.X.minCoeff(), 0.0);
  EXPECT_LE(c.X.maxCoeff(), 1.0);
  EXPECT_THROW(synth_generate(0, 5, SynthKind::TrigPoly, 0, 0), PreconditionError);
}

TEST(Provenance, ReplayReproducesChain) {
  const auto raw = synth_generate(5, 300, SynthKind::TrigPoly, 8, 0.05);
  auto ds = normalize(raw);
  ds = pca(ds, 3).data;
  ds = dbscan(ds, 0.3, 4).filtered;
  ds = rescale_targets(ds);
  const auto [tr, te] = train_test_split(ds, 0.8, 2);
  const auto re_tr = replay(raw, tr.provenance);
  const auto re_te = replay(raw, te.provenance);
  EXPECT_EQ(re_tr.X, tr.X);
  EXPECT_EQ(re_tr.y, tr.y);
  EXPECT_EQ(re_te.X, te.X);
  EXPECT_EQ(re_te.y, te.y);
}

TEST(Dataset, JsonRoundTrip) {
  const auto ds = synth_generate(2, 15, SynthKind::TrigPoly, 1, 0.1);
  const nlohmann::json j = ds;
  const auto back = nlohmann::json::parse(j.dump()).get<Dataset>();
  EXPECT_EQ(back.X, ds.X);
  EXPECT_EQ(back.y, ds.y);
  EXPECT_EQ(back.provenance, ds.provenance);
  EXPECT_THROW(make(Eigen::MatrixXd::Zero(2, 1), Eigen::VectorXd::Zero(3)).validate(), ShapeError);
}
