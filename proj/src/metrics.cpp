#include "salt/metrics.hpp"

#include <stdexcept>
#include <string>

namespace salt {

double balanced_accuracy(const VectorXi& y_true, const VectorXi& y_pred,
                         int num_classes) {
  if (y_true.size() == 0)
    throw std::invalid_argument("balanced_accuracy: empty inputs");
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("balanced_accuracy: length mismatch");
  if (num_classes < 2)
    throw std::invalid_argument("balanced_accuracy: need at least 2 classes");

  std::vector<long> support(static_cast<std::size_t>(num_classes), 0);
  std::vector<long> hits(static_cast<std::size_t>(num_classes), 0);
  for (long i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if (t < 0 || t >= num_classes || p < 0 || p >= num_classes)
      throw std::invalid_argument("balanced_accuracy: label out of range at " +
                                  std::to_string(i));
    ++support[static_cast<std::size_t>(t)];
    hits[static_cast<std::size_t>(t)] += (p == t);
  }

  double sum = 0.0;
  int present = 0;
  for (int c = 0; c < num_classes; ++c) {
    if (support[static_cast<std::size_t>(c)] == 0) continue;
    sum += static_cast<double>(hits[static_cast<std::size_t>(c)]) /
           static_cast<double>(support[static_cast<std::size_t>(c)]);
    ++present;
  }
  return sum / static_cast<double>(present);
}

double wrong_label_fraction(const LabeledPool& pool,
                            const std::vector<int>& ground_truth) {
  if (ground_truth.size() != static_cast<std::size_t>(pool.size()))
    throw std::invalid_argument(
        "wrong_label_fraction: ground truth length " +
        std::to_string(ground_truth.size()) + " does not match pool size " +
        std::to_string(pool.size()));
  if (pool.size() == 0) return 0.0;

  long wrong = 0;
  const auto& records = pool.records();
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].source == LabelSource::SelfLabel &&
        records[i].label != ground_truth[i])
      ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(pool.size());
}

}  // namespace salt
