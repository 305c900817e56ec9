#pragma once

// Tabular datasets and the preprocessing chain (min-max normalisation, target
// rescaling, PCA, DBSCAN outlier removal), plus synthetic data generators.
// Every transform returns a new Dataset and appends a provenance record, so
// replay(raw, processed.provenance) rebuilds the processed data.

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace qsurr::data {

struct Dataset {
  Eigen::MatrixXd X;  // rows are samples
  Eigen::VectorXd y;
  std::vector<std::string> feature_names;
  std::string target_name = "target";
  nlohmann::json provenance = nlohmann::json::array();

  Eigen::Index rows() const { return X.rows(); }
  Eigen::Index cols() const { return X.cols(); }
  void validate() const;
  /// Rows in the given order; provenance is copied unchanged.
  Dataset select(const std::vector<Eigen::Index>& rows) const;
};

void to_json(nlohmann::json& j, const Dataset& ds);
void from_json(const nlohmann::json& j, Dataset& ds);

// ---------------------------------------------------------------------------
// CSV

struct CsvResult {
  Dataset data;
  std::size_t rejected_rows = 0;  // rows with NaN or infinite cells
};

/// Header row, comma separated, '.' decimals. Every column other than the
/// target becomes a feature.
CsvResult read_csv(std::istream& in, const std::string& target_column,
                   const std::string& source_name = "<stream>");
CsvResult load_csv(const std::string& path, const std::string& target_column);
void write_csv(std::ostream& out, const Dataset& ds);

// ---------------------------------------------------------------------------
// Transforms

/// Per-column min-max to [0,1]; constant columns map to 0.
Dataset normalize(const Dataset& ds);

/// Affine map of [min y, max y] onto [lo, hi]. A constant target maps to the midpoint.
Dataset rescale_targets(const Dataset& ds, double lo = -1.0, double hi = 1.0);

struct PcaResult {
  Dataset data;                       // scores renormalised to [0,1]
  Eigen::MatrixXd components;         // cols x k, unit columns
  Eigen::VectorXd eigenvalues;        // all, descending
  Eigen::VectorXd explained_ratio;    // first k
  Eigen::VectorXd mean;
  Eigen::MatrixXd scores;             // centred projections before renormalisation
};

PcaResult pca(const Dataset& ds, int k);

struct DbscanResult {
  std::vector<int> labels;  // cluster id >= 0, noise = -1
  int n_clusters = 0;
  std::size_t n_noise = 0;
  Dataset filtered;
};

inline constexpr int kNoise = -1;

std::vector<int> dbscan_labels(const Eigen::MatrixXd& X, double eps, int min_pts);
DbscanResult dbscan(const Dataset& ds, double eps, int min_pts);

std::pair<Dataset, Dataset> train_test_split(const Dataset& ds, double fraction,
                                             std::uint64_t seed);

/// Re-applies the transform records of `provenance` to `raw` in order.
/// Records before (and including) the first "source" entry are skipped.
Dataset replay(const Dataset& raw, const nlohmann::json& provenance);

// ---------------------------------------------------------------------------
// Synthetic data

enum class SynthKind { TrigPoly, Circuit };

std::string to_string(SynthKind k);
SynthKind synth_kind_from_string(const std::string& s);

/// Ground truth of the trig-poly generator:
///   y(x) = (c0 + sum_k a_k cos(w_k . x) + b_k sin(w_k . x)) / scale
struct TrigPoly {
  double c0 = 0.0;
  Eigen::MatrixXd freqs;  // rows are integer frequencies
  Eigen::VectorXd a, b;
  double scale = 1.0;

  double operator()(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;
};

void to_json(nlohmann::json& j, const TrigPoly& t);
void from_json(const nlohmann::json& j, TrigPoly& t);

/// X uniform in [0,1]^d. The ground truth (trig-poly coefficients or circuit
/// config + angles) is stored in the first provenance record.
Dataset synth_generate(int d, std::size_t size, SynthKind kind, std::uint64_t seed,
                       double noise_sd);

}  // namespace qsurr::data
