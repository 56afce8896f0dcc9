#include "salt/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace salt {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Synthetic scenarios
// ---------------------------------------------------------------------------

std::string scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::ThreeClassOneEasy: return "three_class_easy";
    case ScenarioKind::TwoClassImbalanced: return "two_class_imbalanced";
  }
  throw std::logic_error("scenario_kind_name: unknown kind");
}

ScenarioKind scenario_kind_from_name(const std::string& name) {
  if (name == "three_class_easy") return ScenarioKind::ThreeClassOneEasy;
  if (name == "two_class_imbalanced") return ScenarioKind::TwoClassImbalanced;
  throw std::invalid_argument("unknown scenario: " + name +
                              " (expected three_class_easy or "
                              "two_class_imbalanced)");
}

namespace {

struct GaussianMixture {
  std::vector<double> priors;
  std::vector<Eigen::Vector2d> means;
};

GaussianMixture scenario_mixture(ScenarioKind kind) {
  if (kind == ScenarioKind::ThreeClassOneEasy) {
    return {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0},
            {{-1.5, 0.0}, {1.5, 0.0}, {0.0, 5.0}}};
  }
  return {{0.2, 0.8}, {{-1.0, 0.0}, {1.5, 0.0}}};
}

void sample_mixture(const GaussianMixture& mix, long n, Rng& rng, MatrixXd& X,
                    VectorXi& y) {
  std::discrete_distribution<int> pick(mix.priors.begin(), mix.priors.end());
  std::normal_distribution<double> unit(0.0, 1.0);
  X.resize(n, 2);
  y.resize(n);
  for (long i = 0; i < n; ++i) {
    const int c = pick(rng);
    y[i] = c;
    X(i, 0) = mix.means[static_cast<std::size_t>(c)][0] + unit(rng);
    X(i, 1) = mix.means[static_cast<std::size_t>(c)][1] + unit(rng);
  }
}

}  // namespace

ScenarioData generate_scenario(const SyntheticScenario& scenario) {
  if (scenario.seed_size <= 0 || scenario.stream_size <= 0 ||
      scenario.test_size <= 0)
    throw std::invalid_argument(
        "generate_scenario: seed, stream, and test sizes must be positive");

  const GaussianMixture mix = scenario_mixture(scenario.kind);
  ScenarioData data;
  data.num_classes = static_cast<int>(mix.priors.size());

  Rng seed_rng(derive_seed(scenario.rng_seed, 0));
  Rng stream_rng(derive_seed(scenario.rng_seed, 1));
  Rng test_rng(derive_seed(scenario.rng_seed, 2));
  sample_mixture(mix, scenario.seed_size, seed_rng, data.seed_X, data.seed_y);
  sample_mixture(mix, scenario.stream_size, stream_rng, data.stream_X,
                 data.stream_y);
  sample_mixture(mix, scenario.test_size, test_rng, data.test_X, data.test_y);
  return data;
}

// ---------------------------------------------------------------------------
// Schema
// ---------------------------------------------------------------------------

void DatasetSchema::validate() const {
  if (target_column.empty())
    throw std::invalid_argument("schema: target_column is required");
  std::set<std::string> seen;
  for (const auto& name : numeric_columns) {
    if (!seen.insert(name).second)
      throw std::invalid_argument("schema: duplicate column " + name);
  }
  for (const auto& name : categorical_columns) {
    if (!seen.insert(name).second)
      throw std::invalid_argument(
          "schema: column " + name +
          " appears in both numeric and categorical lists");
  }
  if (seen.count(target_column))
    throw std::invalid_argument("schema: target_column " + target_column +
                                " must not be a feature column");
  if (numeric_columns.empty() && categorical_columns.empty())
    throw std::invalid_argument("schema: no feature columns declared");
  if (features_to_drop_by_correlation < 0)
    throw std::invalid_argument(
        "schema: features_to_drop_by_correlation must be >= 0");
}

DatasetSchema DatasetSchema::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("schema: ") + e.what());
  }
  DatasetSchema schema;
  schema.numeric_columns =
      j.value("numeric_columns", std::vector<std::string>{});
  schema.categorical_columns =
      j.value("categorical_columns", std::vector<std::string>{});
  if (!j.contains("target_column"))
    throw std::invalid_argument("schema: target_column is required");
  schema.target_column = j.at("target_column").get<std::string>();
  schema.classes_to_drop =
      j.value("classes_to_drop", std::vector<std::string>{});
  schema.features_to_drop_by_correlation =
      j.value("features_to_drop_by_correlation", 0);
  schema.validate();
  return schema;
}

DatasetSchema DatasetSchema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("schema: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::string DatasetSchema::to_json_text() const {
  json j{{"numeric_columns", numeric_columns},
         {"categorical_columns", categorical_columns},
         {"target_column", target_column},
         {"classes_to_drop", classes_to_drop},
         {"features_to_drop_by_correlation", features_to_drop_by_correlation}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

// Comma splitter with double-quote support ("" escapes a quote).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(std::move(field));
  return fields;
}

bool is_missing_marker(const std::string& cell) {
  return cell.empty() || cell == "?" || cell == "NA";
}

double parse_numeric_cell(const std::string& cell, long row,
                          const std::string& column) {
  if (is_missing_marker(cell))
    return std::numeric_limits<double>::quiet_NaN();
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != cell.size())
    throw std::runtime_error("csv row " + std::to_string(row) + ", column '" +
                             column + "': cannot parse numeric value '" +
                             cell + "'");
  return value;
}

}  // namespace

RawTable load_csv(const std::string& path, const DatasetSchema& schema) {
  schema.validate();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("csv: " + path + " is empty (no header)");
  const std::vector<std::string> header = split_csv_line(line);

  auto column_index = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw std::runtime_error("csv: " + path + " is missing column '" +
                               name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };

  std::vector<std::size_t> numeric_idx, categorical_idx;
  for (const auto& name : schema.numeric_columns)
    numeric_idx.push_back(column_index(name));
  for (const auto& name : schema.categorical_columns)
    categorical_idx.push_back(column_index(name));
  const std::size_t target_idx = column_index(schema.target_column);

  RawTable table;
  table.numeric_names = schema.numeric_columns;
  table.categorical_names = schema.categorical_columns;
  table.numeric.resize(numeric_idx.size());
  table.categorical.resize(categorical_idx.size());

  long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::runtime_error("csv row " + std::to_string(row) + ": got " +
                               std::to_string(cells.size()) +
                               " fields, expected " +
                               std::to_string(header.size()));
    for (std::size_t c = 0; c < numeric_idx.size(); ++c)
      table.numeric[c].push_back(parse_numeric_cell(
          cells[numeric_idx[c]], row, schema.numeric_columns[c]));
    for (std::size_t c = 0; c < categorical_idx.size(); ++c)
      table.categorical[c].push_back(cells[categorical_idx[c]]);
    table.target.push_back(cells[target_idx]);
    ++table.rows;
  }
  if (table.rows == 0) throw std::runtime_error("csv: " + path + " has no data rows");
  return table;
}

RawTable drop_minority_classes(
    const RawTable& table, const std::vector<std::string>& labels_to_drop) {
  if (labels_to_drop.empty()) return table;

  const std::set<std::string> drop(labels_to_drop.begin(),
                                   labels_to_drop.end());
  const std::set<std::string> present(table.target.begin(),
                                      table.target.end());
  for (const auto& label : drop) {
    if (!present.count(label))
      std::cerr << "warning: class to drop '" << label
                << "' does not occur in the dataset\n";
  }

  std::set<std::string> remaining;
  for (const auto& label : present)
    if (!drop.count(label)) remaining.insert(label);
  if (remaining.size() < 2)
    throw std::invalid_argument(
        "drop_minority_classes: dropping would leave fewer than 2 classes");

  RawTable out;
  out.numeric_names = table.numeric_names;
  out.categorical_names = table.categorical_names;
  out.numeric.resize(table.numeric.size());
  out.categorical.resize(table.categorical.size());
  for (long i = 0; i < table.rows; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if (drop.count(table.target[idx])) continue;
    for (std::size_t c = 0; c < table.numeric.size(); ++c)
      out.numeric[c].push_back(table.numeric[c][idx]);
    for (std::size_t c = 0; c < table.categorical.size(); ++c)
      out.categorical[c].push_back(table.categorical[c][idx]);
    out.target.push_back(table.target[idx]);
    ++out.rows;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Preprocessing
// ---------------------------------------------------------------------------

namespace {

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

FittedTransform fit_transform(const RawTable& table,
                              const std::vector<long>& fit_rows) {
  if (fit_rows.empty())
    throw std::invalid_argument("fit_transform: no rows to fit on");
  for (long r : fit_rows)
    if (r < 0 || r >= table.rows)
      throw std::invalid_argument("fit_transform: row index out of range");

  FittedTransform t;
  for (std::size_t c = 0; c < table.numeric.size(); ++c) {
    std::vector<double> observed;
    for (long r : fit_rows) {
      const double v = table.numeric[c][static_cast<std::size_t>(r)];
      if (!std::isnan(v)) observed.push_back(v);
    }
    if (observed.empty())
      throw std::runtime_error("fit_transform: numeric column '" +
                               table.numeric_names[c] +
                               "' is entirely missing in the fit rows");
    const double median = median_of(observed);

    double mean = 0.0;
    for (long r : fit_rows) {
      const double v = table.numeric[c][static_cast<std::size_t>(r)];
      mean += std::isnan(v) ? median : v;
    }
    mean /= static_cast<double>(fit_rows.size());
    double var = 0.0;
    for (long r : fit_rows) {
      const double raw = table.numeric[c][static_cast<std::size_t>(r)];
      const double v = std::isnan(raw) ? median : raw;
      var += (v - mean) * (v - mean);
    }
    var /= static_cast<double>(fit_rows.size());

    t.medians.push_back(median);
    t.means.push_back(mean);
    t.stds.push_back(std::max(std::sqrt(var), 1e-12));
  }

  for (std::size_t c = 0; c < table.categorical.size(); ++c) {
    std::set<std::string> vocab;
    for (long r : fit_rows)
      vocab.insert(table.categorical[c][static_cast<std::size_t>(r)]);
    t.vocabularies.emplace_back(vocab.begin(), vocab.end());
  }

  // The class set is part of the task definition, so the label vocabulary
  // comes from the whole table, not just the fit rows.
  std::set<std::string> labels(table.target.begin(), table.target.end());
  if (labels.size() < 2)
    throw std::invalid_argument("fit_transform: need at least 2 classes");
  t.label_vocab.assign(labels.begin(), labels.end());
  return t;
}

int FittedTransform::feature_dim() const {
  int dim = static_cast<int>(medians.size());
  for (const auto& vocab : vocabularies) dim += static_cast<int>(vocab.size());
  return dim;
}

MatrixXd FittedTransform::transform(const RawTable& table,
                                    const std::vector<long>& rows) const {
  if (table.numeric.size() != medians.size() ||
      table.categorical.size() != vocabularies.size())
    throw std::invalid_argument("transform: table shape does not match fit");

  MatrixXd X = MatrixXd::Zero(static_cast<long>(rows.size()), feature_dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const long r = rows[i];
    if (r < 0 || r >= table.rows)
      throw std::invalid_argument("transform: row index out of range");
    long col = 0;
    for (std::size_t c = 0; c < medians.size(); ++c) {
      const double raw = table.numeric[c][static_cast<std::size_t>(r)];
      const double v = std::isnan(raw) ? medians[c] : raw;
      X(static_cast<long>(i), col++) = (v - means[c]) / stds[c];
    }
    for (std::size_t c = 0; c < vocabularies.size(); ++c) {
      const auto& vocab = vocabularies[c];
      const auto& value = table.categorical[c][static_cast<std::size_t>(r)];
      const auto it = std::lower_bound(vocab.begin(), vocab.end(), value);
      if (it != vocab.end() && *it == value)
        X(static_cast<long>(i), col + (it - vocab.begin())) = 1.0;
      col += static_cast<long>(vocab.size());
    }
  }
  return X;
}

VectorXi FittedTransform::encode_labels(const RawTable& table,
                                        const std::vector<long>& rows) const {
  VectorXi y(static_cast<long>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& value = table.target[static_cast<std::size_t>(rows[i])];
    const auto it =
        std::lower_bound(label_vocab.begin(), label_vocab.end(), value);
    if (it == label_vocab.end() || *it != value)
      throw std::invalid_argument("encode_labels: unknown class '" + value +
                                  "'");
    y[static_cast<long>(i)] = static_cast<int>(it - label_vocab.begin());
  }
  return y;
}

// ---------------------------------------------------------------------------
// Correlation-based feature dropping
// ---------------------------------------------------------------------------

std::vector<int> most_correlated_features(const MatrixXd& X, const VectorXi& y,
                                          int n) {
  if (n < 0) throw std::invalid_argument("most_correlated_features: n < 0");
  if (n >= X.cols())
    throw std::invalid_argument(
        "most_correlated_features: n must be below the feature count");
  if (X.rows() != y.size() || X.rows() < 2)
    throw std::invalid_argument(
        "most_correlated_features: need matching X and y with >= 2 rows");
  if (n == 0) return {};

  const double rows = static_cast<double>(X.rows());
  const VectorXd labels = y.cast<double>();
  const double ly = labels.mean();
  const VectorXd yc = labels.array() - ly;
  const double y_ss = yc.squaredNorm();

  std::vector<std::pair<double, int>> scored;  // (-|r|, column)
  for (int c = 0; c < X.cols(); ++c) {
    const VectorXd xc = X.col(c).array() - X.col(c).mean();
    const double x_ss = xc.squaredNorm();
    double r = 0.0;
    if (x_ss > 1e-24 * rows && y_ss > 1e-24 * rows)
      r = xc.dot(yc) / std::sqrt(x_ss * y_ss);
    scored.emplace_back(-std::abs(r), c);
  }
  std::sort(scored.begin(), scored.end());

  std::vector<int> drop;
  for (int i = 0; i < n; ++i) drop.push_back(scored[static_cast<std::size_t>(i)].second);
  std::sort(drop.begin(), drop.end());
  return drop;
}

MatrixXd drop_columns(const MatrixXd& X, const std::vector<int>& columns) {
  const std::set<int> gone(columns.begin(), columns.end());
  MatrixXd out(X.rows(), X.cols() - static_cast<long>(gone.size()));
  long keep = 0;
  for (long c = 0; c < X.cols(); ++c) {
    if (gone.count(static_cast<int>(c))) continue;
    out.col(keep++) = X.col(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runner helpers
// ---------------------------------------------------------------------------

std::vector<Sample> make_stream_samples(const MatrixXd& X, const VectorXi& y) {
  if (X.rows() != y.size())
    throw std::invalid_argument("make_stream_samples: size mismatch");
  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(X.rows()));
  for (long i = 0; i < X.rows(); ++i)
    samples.push_back({X.row(i).transpose(), y[i]});
  return samples;
}

void write_csv(const std::string& path, const MatrixXd& X, const VectorXi& y) {
  if (X.rows() != y.size())
    throw std::invalid_argument("write_csv: size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (long c = 0; c < X.cols(); ++c) out << 'x' << c << ',';
  out << "label\n";
  out.precision(17);
  for (long i = 0; i < X.rows(); ++i) {
    for (long c = 0; c < X.cols(); ++c) out << X(i, c) << ',';
    out << y[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace salt
