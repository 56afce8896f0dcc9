#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace salt {

enum class Decision { Query, SelfLabel, Skip };

std::string decision_name(Decision d);
Decision decision_from_name(const std::string& name);

struct TraceRecord {
  long iteration = 0;  // 0-based stream position
  Decision decision = Decision::Skip;
  int chosen_label = -1;  // label appended to the pool; -1 when skipped
  int true_label = -1;    // hidden ground truth; -1 when unknown
  long budget_remaining = 0;
  std::vector<long> pool_class_histogram;
  long wrong_label_count = 0;  // cumulative self-label mistakes
};

struct Checkpoint {
  long iteration = 0;
  double test_balanced_accuracy = 0.0;
};

// Full per-run record: every stream decision plus periodic test-accuracy
// checkpoints. Serialized as JSON lines (meta line, then records, then
// checkpoints) with sorted keys and no timestamps, so identical runs produce
// byte-identical files.
struct ExperimentTrace {
  // metadata
  std::string method;
  std::string dataset;
  double threshold = 0.0;
  double budget_fraction = 0.0;
  long budget_total = 0;
  long seed_size = 0;
  std::uint64_t master_seed = 0;
  long repetition = 0;
  std::string config_hash;
  long budget_exhausted_iteration = -1;  // -1 when the budget never ran out

  std::vector<TraceRecord> records;
  std::vector<Checkpoint> checkpoints;

  long queries_used() const;
  long self_labels() const;
  long final_pool_size() const;  // seed_size when there are no records
  long final_wrong_count() const;
  double final_wrong_fraction() const;
  double final_test_balanced_accuracy() const;  // last checkpoint

  std::string to_jsonl() const;
  static ExperimentTrace from_jsonl(const std::string& text);
  void save(const std::string& path) const;
  static ExperimentTrace load(const std::string& path);
};

}  // namespace salt
