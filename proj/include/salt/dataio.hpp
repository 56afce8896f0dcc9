#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salt/rng.hpp"
#include "salt/types.hpp"

namespace salt {

// ---------------------------------------------------------------------------
// Synthetic scenarios
// ---------------------------------------------------------------------------

enum class ScenarioKind { ThreeClassOneEasy, TwoClassImbalanced };

std::string scenario_kind_name(ScenarioKind kind);
ScenarioKind scenario_kind_from_name(const std::string& name);

struct SyntheticScenario {
  ScenarioKind kind = ScenarioKind::ThreeClassOneEasy;
  long seed_size = 300;
  long stream_size = 3000;
  long test_size = 1000;
  std::uint64_t rng_seed = 0;
};

struct ScenarioData {
  MatrixXd seed_X;
  VectorXi seed_y;
  MatrixXd stream_X;
  VectorXi stream_y;
  MatrixXd test_X;
  VectorXi test_y;
  int num_classes = 0;
};

// Gaussian mixtures in 2-D. ThreeClassOneEasy: equal priors, classes at
// (-1.5, 0), (1.5, 0) and an easy, well-separated class 2 at (0, 5).
// TwoClassImbalanced: priors 0.2 / 0.8 with overlapping classes at (-1, 0)
// and (1.5, 0). Seed, stream, and test sets come from disjoint RNG
// substreams, so the output is reproducible bit for bit.
ScenarioData generate_scenario(const SyntheticScenario& scenario);

// ---------------------------------------------------------------------------
// CSV datasets
// ---------------------------------------------------------------------------

struct DatasetSchema {
  std::vector<std::string> numeric_columns;
  std::vector<std::string> categorical_columns;
  std::string target_column;
  std::vector<std::string> classes_to_drop;
  int features_to_drop_by_correlation = 0;

  void validate() const;
  static DatasetSchema from_json_text(const std::string& text);
  static DatasetSchema load(const std::string& path);
  std::string to_json_text() const;
};

// Typed columns straight out of the file; missing numeric cells ("", "?",
// "NA") are NaN.
struct RawTable {
  std::vector<std::string> numeric_names;
  std::vector<std::vector<double>> numeric;
  std::vector<std::string> categorical_names;
  std::vector<std::vector<std::string>> categorical;
  std::vector<std::string> target;
  long rows = 0;
};

RawTable load_csv(const std::string& path, const DatasetSchema& schema);

// Removes rows whose raw target value is listed; labels not present in the
// table are reported to stderr and ignored.
RawTable drop_minority_classes(const RawTable& table,
                               const std::vector<std::string>& labels_to_drop);

// Median imputation + standard scaling for numeric columns, one-hot for
// categorical (unseen categories encode to all zeros), labels mapped to the
// sorted vocabulary of the whole table. Statistics are fitted only on
// fit_rows and reused everywhere else.
struct FittedTransform {
  std::vector<double> medians;
  std::vector<double> means;
  std::vector<double> stds;
  std::vector<std::vector<std::string>> vocabularies;  // sorted, per column
  std::vector<std::string> label_vocab;                // sorted

  int feature_dim() const;
  int num_classes() const { return static_cast<int>(label_vocab.size()); }
  MatrixXd transform(const RawTable& table,
                     const std::vector<long>& rows) const;
  VectorXi encode_labels(const RawTable& table,
                         const std::vector<long>& rows) const;
};

FittedTransform fit_transform(const RawTable& table,
                              const std::vector<long>& fit_rows);

// |Pearson r| between each feature column and the integer-coded labels;
// constant columns count as 0. Returns the indices of the n most correlated
// features, ascending.
std::vector<int> most_correlated_features(const MatrixXd& X, const VectorXi& y,
                                          int n);
MatrixXd drop_columns(const MatrixXd& X, const std::vector<int>& columns);

// ---------------------------------------------------------------------------
// Helpers shared by the runner
// ---------------------------------------------------------------------------

// Rows -> stream samples carrying hidden true labels for the oracle.
std::vector<Sample> make_stream_samples(const MatrixXd& X, const VectorXi& y);

// Writes features + label to a CSV with header x0..x{d-1},label.
void write_csv(const std::string& path, const MatrixXd& X, const VectorXi& y);

}  // namespace salt
