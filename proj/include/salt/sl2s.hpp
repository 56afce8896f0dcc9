#pragma once

#include "salt/committee.hpp"
#include "salt/selective.hpp"
#include "salt/trace.hpp"
#include "salt/types.hpp"

namespace salt {

struct Sl2sConfig {
  double tau = 0.9;   // confident-prediction threshold, in (0, 1)
  int k = 50;         // prior window length
  bool disable_prior_filter = false;
  bool disable_lambda_reduction = false;
  bool disable_self_labeling = false;
  LoopConfig loop;

  void validate() const;
};

struct GateDecision {
  Decision outcome = Decision::Query;  // SelfLabel or Query, never Skip
  int label = -1;                      // chosen class when SelfLabel
  double max_support = 0.0;            // global max over members and classes
  int confident_count = 0;             // members whose own max exceeds tau
};

// Confidence/consistency gate: self-label only when more than half the
// members are confident (row max strictly above tau) and every confident
// member predicts the label of the globally most confident member.
GateDecision consistency_gate(const MemberSupports& ms, double tau);

// Poisson rate for a self-labeled record: max_support / tau, minus 1 once
// the budget is spent. Only meaningful on the self-label path, so
// max_support below tau is a contract violation.
double compute_lambda(double max_support, double tau, bool budget_empty);

// Fraction of the last min(k, pool size) pool labels equal to
// predicted_label.
double prior_estimate(const LabeledPool& pool, int k, int predicted_label);

// Allow self-labeled training only while the predicted class's recent
// frequency does not exceed the balanced prior 1/C. Never applied to oracle
// labels.
bool prior_filter(double p_hat, int num_classes);

// The full stream loop: gate every sample; self-label through the prior
// filter at rate compute_lambda, query the oracle while budget remains, and
// skip otherwise. The committee must already be trained on the seed pool.
ExperimentTrace sl2s_run(LabeledPool& pool, UnlabeledStream& stream,
                         Committee& committee, const Sl2sConfig& config,
                         Budget& budget, const MatrixXd& test_X,
                         const VectorXi& test_y);

// The preliminary single-model variant: self-label when the support exceeds
// self_label_threshold, query when it falls below query_threshold, discard
// in between. No lambda schedule (records resample at rate one).
struct PreliminaryConfig {
  double self_label_threshold = 0.95;
  double query_threshold = 0.7;
  bool use_prior_filter = false;
  int k = 50;
  LoopConfig loop;

  void validate() const;
};

ExperimentTrace preliminary_run(LabeledPool& pool, UnlabeledStream& stream,
                                Committee& model,
                                const PreliminaryConfig& config,
                                Budget& budget, const MatrixXd& test_X,
                                const VectorXi& test_y);

}  // namespace salt
