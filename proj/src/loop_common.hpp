#pragma once

// Shared bookkeeping for the stream loops in selective.cpp and sl2s.cpp:
// trace records, label buffering with batched retrains, and test-accuracy
// checkpoints.

#include <stdexcept>

#include "salt/committee.hpp"
#include "salt/metrics.hpp"
#include "salt/selective.hpp"
#include "salt/trace.hpp"
#include "salt/types.hpp"

namespace salt::detail {

class StreamLoop {
 public:
  StreamLoop(LabeledPool& pool, Committee& learner, Budget& budget,
             const LoopConfig& loop, const MatrixXd& test_X,
             const VectorXi& test_y)
      : pool_(pool),
        learner_(learner),
        budget_(budget),
        loop_(loop),
        test_X_(test_X),
        test_y_(test_y) {
    if (loop.batch_size < 1)
      throw std::invalid_argument("batch_size must be >= 1");
    if (loop.checkpoint_every < 1)
      throw std::invalid_argument("checkpoint_every must be >= 1");
    if (!learner.trained())
      throw std::invalid_argument("learner must be trained on the seed pool");
    trace_.seed_size = static_cast<long>(pool.size());
    checkpoint(0);
  }

  // Appends an oracle-labeled record and spends one budget unit. The caller
  // has already checked that budget remains.
  void append_oracle(const Sample& sample, long iteration) {
    if (!sample.true_label)
      throw std::invalid_argument("stream sample has no oracle label");
    budget_.grant();
    if (budget_.exhausted() && trace_.budget_exhausted_iteration < 0)
      trace_.budget_exhausted_iteration = iteration;
    pool_.append(sample.features, *sample.true_label, 1.0,
                 LabelSource::Oracle);
    ++buffer_;
    record(iteration, Decision::Query, *sample.true_label, sample.true_label);
    maybe_retrain();
  }

  void append_self_label(const Sample& sample, int label, double lambda,
                         long iteration) {
    pool_.append(sample.features, label, lambda, LabelSource::SelfLabel);
    if (sample.true_label && label != *sample.true_label) ++wrong_;
    ++buffer_;
    record(iteration, Decision::SelfLabel, label, sample.true_label);
    maybe_retrain();
  }

  void skip(const Sample& sample, long iteration) {
    record(iteration, Decision::Skip, -1, sample.true_label);
  }

  // Trains on whatever is still buffered and takes the closing checkpoint.
  ExperimentTrace finish(long stream_length) {
    if (buffer_ > 0) retrain();
    if (trace_.checkpoints.empty() ||
        trace_.checkpoints.back().iteration != stream_length)
      checkpoint(stream_length);
    return std::move(trace_);
  }

 private:
  void record(long iteration, Decision decision, int chosen,
              const std::optional<int>& truth) {
    TraceRecord r;
    r.iteration = iteration;
    r.decision = decision;
    r.chosen_label = chosen;
    r.true_label = truth ? *truth : -1;
    r.budget_remaining = budget_.remaining();
    const auto& hist = pool_.class_histogram();
    r.pool_class_histogram.assign(hist.begin(), hist.end());
    r.wrong_label_count = wrong_;
    trace_.records.push_back(std::move(r));
  }

  void maybe_retrain() {
    if (buffer_ < loop_.batch_size) return;
    retrain();
    if (retrains_ % loop_.checkpoint_every == 0)
      checkpoint(trace_.records.back().iteration + 1);
  }

  void retrain() {
    learner_.train(pool_);
    buffer_ = 0;
    ++retrains_;
  }

  void checkpoint(long iteration) {
    const VectorXi pred = learner_.predict_batch(test_X_);
    trace_.checkpoints.push_back(
        {iteration, balanced_accuracy(test_y_, pred, pool_.num_classes())});
  }

  LabeledPool& pool_;
  Committee& learner_;
  Budget& budget_;
  LoopConfig loop_;
  const MatrixXd& test_X_;
  const VectorXi& test_y_;
  ExperimentTrace trace_;
  long buffer_ = 0;
  long retrains_ = 0;
  long wrong_ = 0;
};

}  // namespace salt::detail
