#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace salt {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Eigen::VectorXi;

enum class LabelSource { Seed, Oracle, SelfLabel };

const char* label_source_name(LabelSource source);

// One stream element. true_label is the held-back ground truth used only to
// simulate the oracle and to score label quality; learners never see it.
struct Sample {
  VectorXd features;
  std::optional<int> true_label;
};

struct LabeledRecord {
  VectorXd features;
  int label = 0;
  double lambda = 1.0;  // Poisson rate for bootstrap resampling
  LabelSource source = LabelSource::Seed;
};

// Append-only training set. The class count is fixed up front and the prior
// window relies on append order, so records are never reordered or removed.
class LabeledPool {
 public:
  explicit LabeledPool(int num_classes);

  void append(VectorXd features, int label, double lambda, LabelSource source);

  const std::vector<LabeledRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  int num_classes() const { return num_classes_; }
  const std::vector<int>& class_histogram() const { return class_histogram_; }
  int distinct_classes() const;
  int count(LabelSource source) const;
  std::vector<double> lambdas() const;

  // Training views: one row per record, labels as dense class indices.
  MatrixXd feature_matrix() const;
  VectorXi label_vector() const;

 private:
  int num_classes_;
  std::vector<LabeledRecord> records_;
  std::vector<int> class_histogram_;
  int source_counts_[3] = {0, 0, 0};
};

// Oracle query allowance. remaining decreases by exactly one per grant and
// never otherwise.
class Budget {
 public:
  Budget() = default;
  explicit Budget(long total);

  long total() const { return total_; }
  long remaining() const { return remaining_; }
  bool exhausted() const { return remaining_ == 0; }
  void grant();

 private:
  long total_ = 0;
  long remaining_ = 0;
};

// Single-pass sample source; there is deliberately no way to rewind.
class UnlabeledStream {
 public:
  UnlabeledStream() = default;
  explicit UnlabeledStream(std::vector<Sample> source);

  std::optional<Sample> next();
  std::size_t size() const { return source_.size(); }
  std::size_t position() const { return position_; }

 private:
  std::vector<Sample> source_;
  std::size_t position_ = 0;
};

// floor(fraction * stream_length), the count a fractional budget stands for.
long budget_fraction_to_count(double fraction, long stream_length);

}  // namespace salt
