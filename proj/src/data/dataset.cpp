#include <algorithm>
#include <cmath>
#include <numeric>

#include "qsurr/data.hpp"
#include "qsurr/error.hpp"
#include "qsurr/rng.hpp"

namespace qsurr::data {

void Dataset::validate() const {
  if (X.rows() != y.size())
    throw ShapeError("dataset has " + std::to_string(X.rows()) + " rows but " +
                     std::to_string(y.size()) + " targets");
  if (!feature_names.empty() && static_cast<Eigen::Index>(feature_names.size()) != X.cols())
    throw ShapeError("feature name count does not match column count");
}

Dataset Dataset::select(const std::vector<Eigen::Index>& rows) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    out.y(static_cast<Eigen::Index>(i)) = y(rows[i]);
  }
  out.feature_names = feature_names;
  out.target_name = target_name;
  out.provenance = provenance;
  return out;
}

void to_json(nlohmann::json& j, const Dataset& ds) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < ds.X.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < ds.X.cols(); ++c) row.push_back(ds.X(r, c));
    rows.push_back(std::move(row));
  }
  j = nlohmann::json{{"features", ds.feature_names},
                     {"target", ds.target_name},
                     {"n_rows", ds.X.rows()},
                     {"n_features", ds.X.cols()},
                     {"X", std::move(rows)},
                     {"y", std::vector<double>(ds.y.data(), ds.y.data() + ds.y.size())},
                     {"provenance", ds.provenance}};
}

void from_json(const nlohmann::json& j, Dataset& ds) {
  Dataset out;
  out.feature_names = j.at("features").get<std::vector<std::string>>();
  out.target_name = j.value("target", std::string("target"));
  const auto& rows = j.at("X");
  const auto y = j.at("y").get<std::vector<double>>();
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = j.contains("n_features") ? j.at("n_features").get<Eigen::Index>()
                                          : static_cast<Eigen::Index>(out.feature_names.size());
  out.X.resize(n, d);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != d)
      throw ShapeError("dataset row " + std::to_string(r) + " has the wrong width");
    for (Eigen::Index c = 0; c < d; ++c) out.X(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  out.y = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  out.provenance = j.value("provenance", nlohmann::json::array());
  out.validate();
  ds = std::move(out);
}

Dataset normalize(const Dataset& ds) {
  ds.validate();
  if (ds.rows() == 0) throw PreconditionError("cannot normalize an empty dataset");
  Dataset out = ds;
  std::vector<double> lo(ds.cols()), hi(ds.cols());
  for (Eigen::Index c = 0; c < ds.cols(); ++c) {
    lo[c] = ds.X.col(c).minCoeff();
    hi[c] = ds.X.col(c).maxCoeff();
    const double span = hi[c] - lo[c];
    if (span > 0.0)
      out.X.col(c) = ((ds.X.col(c).array() - lo[c]) / span).matrix();
    else
      out.X.col(c).setZero();
  }
  out.provenance.push_back({{"op", "normalize"}, {"min", lo}, {"max", hi}});
  return out;
}

Dataset rescale_targets(const Dataset& ds, double lo, double hi) {
  ds.validate();
  if (ds.rows() == 0) throw PreconditionError("cannot rescale an empty dataset");
  if (!(hi > lo)) throw PreconditionError("target range must have hi > lo");
  Dataset out = ds;
  const double ymin = ds.y.minCoeff();
  const double ymax = ds.y.maxCoeff();
  const double span = ymax - ymin;
  if (span > 0.0)
    out.y = (lo + (ds.y.array() - ymin) * ((hi - lo) / span)).matrix();
  else
    out.y.setConstant(0.5 * (lo + hi));
  out.provenance.push_back({{"op", "rescale_targets"},
                            {"source_min", ymin},
                            {"source_max", ymax},
                            {"lo", lo},
                            {"hi", hi}});
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double fraction,
                                             std::uint64_t seed) {
  ds.validate();
  if (!(fraction > 0.0 && fraction < 1.0))
    throw PreconditionError("split fraction must lie in (0, 1)");
  const auto n = static_cast<std::size_t>(ds.rows());
  const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_train == 0 || n_train == n)
    throw PreconditionError("split of " + std::to_string(n) + " rows at fraction " +
                            std::to_string(fraction) + " leaves one side empty");
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  Rng rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::vector<Eigen::Index> tr(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<Eigen::Index> te(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  auto a = ds.select(tr);
  auto b = ds.select(te);
  const nlohmann::json rec = {{"op", "split"}, {"fraction", fraction}, {"seed", seed}};
  a.provenance.push_back(rec);
  a.provenance.back()["part"] = "train";
  b.provenance.push_back(rec);
  b.provenance.back()["part"] = "test";
  return {std::move(a), std::move(b)};
}

Dataset replay(const Dataset& raw, const nlohmann::json& provenance) {
  if (!provenance.is_array()) throw PreconditionError("provenance must be a list");
  std::size_t start = 0;
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    const auto op = provenance[i].value("op", std::string());
    if (op == "synth" || op == "load_csv") {
      start = i + 1;
      break;
    }
  }
  Dataset cur = raw;
  for (std::size_t i = start; i < provenance.size(); ++i) {
    const auto& rec = provenance[i];
    const auto op = rec.at("op").get<std::string>();
    if (op == "normalize") {
      cur = normalize(cur);
    } else if (op == "rescale_targets") {
      cur = rescale_targets(cur, rec.at("lo").get<double>(), rec.at("hi").get<double>());
    } else if (op == "pca") {
      cur = pca(cur, rec.at("k").get<int>()).data;
    } else if (op == "dbscan") {
      cur = dbscan(cur, rec.at("eps").get<double>(), rec.at("min_pts").get<int>()).filtered;
    } else if (op == "split") {
      auto parts = train_test_split(cur, rec.at("fraction").get<double>(),
                                    rec.at("seed").get<std::uint64_t>());
      cur = rec.at("part").get<std::string>() == "train" ? std::move(parts.first)
                                                         : std::move(parts.second);
    } else {
      throw PreconditionError("cannot replay unknown transform '" + op + "'");
    }
  }
  return cur;
}

}  // namespace qsurr::data
