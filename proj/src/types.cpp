#include "salt/types.hpp"

#include <cmath>
#include <utility>

namespace salt {

const char* label_source_name(LabelSource source) {
  switch (source) {
    case LabelSource::Seed: return "seed";
    case LabelSource::Oracle: return "oracle";
    case LabelSource::SelfLabel: return "self_label";
  }
  return "?";
}

LabeledPool::LabeledPool(int num_classes) : num_classes_(num_classes) {
  if (num_classes < 2) {
    throw std::invalid_argument("LabeledPool: need at least two classes");
  }
  class_histogram_.assign(static_cast<std::size_t>(num_classes), 0);
}

void LabeledPool::append(VectorXd features, int label, double lambda,
                         LabelSource source) {
  if (label < 0 || label >= num_classes_) {
    throw std::invalid_argument("LabeledPool::append: label out of range");
  }
  if (source != LabelSource::SelfLabel) {
    lambda = 1.0;  // seed and oracle records always resample at rate one
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("LabeledPool::append: lambda must be positive");
  }
  if (!records_.empty() &&
      features.size() != records_.front().features.size()) {
    throw std::invalid_argument(
        "LabeledPool::append: feature dimension mismatch");
  }
  class_histogram_[static_cast<std::size_t>(label)]++;
  source_counts_[static_cast<int>(source)]++;
  records_.push_back(LabeledRecord{std::move(features), label, lambda, source});
}

int LabeledPool::distinct_classes() const {
  int n = 0;
  for (int c : class_histogram_) {
    if (c > 0) ++n;
  }
  return n;
}

int LabeledPool::count(LabelSource source) const {
  return source_counts_[static_cast<int>(source)];
}

std::vector<double> LabeledPool::lambdas() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.lambda);
  return out;
}

MatrixXd LabeledPool::feature_matrix() const {
  if (records_.empty()) return MatrixXd(0, 0);
  const Eigen::Index dim = records_.front().features.size();
  MatrixXd X(static_cast<Eigen::Index>(records_.size()), dim);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X.row(i) = records_[static_cast<std::size_t>(i)].features.transpose();
  }
  return X;
}

VectorXi LabeledPool::label_vector() const {
  VectorXi y(static_cast<Eigen::Index>(records_.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    y(i) = records_[static_cast<std::size_t>(i)].label;
  }
  return y;
}

Budget::Budget(long total) : total_(total), remaining_(total) {
  if (total < 0) {
    throw std::invalid_argument("Budget: total must be non-negative");
  }
}

void Budget::grant() {
  if (remaining_ <= 0) {
    throw std::logic_error("Budget::grant: budget already exhausted");
  }
  --remaining_;
}

UnlabeledStream::UnlabeledStream(std::vector<Sample> source)
    : source_(std::move(source)) {}

std::optional<Sample> UnlabeledStream::next() {
  if (position_ >= source_.size()) return std::nullopt;
  return source_[position_++];
}

long budget_fraction_to_count(double fraction, long stream_length) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("budget fraction must be in [0, 1]");
  }
  if (stream_length < 0) {
    throw std::invalid_argument("stream length must be non-negative");
  }
  // Floor of the exact product; the slack absorbs binary rounding like
  // 0.29 * 100 = 28.999...96.
  return static_cast<long>(
      std::floor(fraction * static_cast<double>(stream_length) + 1e-9));
}

}  // namespace salt
