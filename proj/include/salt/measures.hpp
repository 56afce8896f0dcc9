#pragma once

#include <string>

#include "salt/committee.hpp"
#include "salt/types.hpp"

namespace salt {

enum class MeasureKind {
  Random,
  FixedUncertainty,
  VariableUncertainty,
  ClassificationMargin,
  VoteEntropy,
  ConsensusEntropy,
  MaxDisagreement,
  MinMargin,
};

enum class QueryDirection { QueryWhenLow, QueryWhenHigh };

std::string measure_kind_name(MeasureKind kind);
MeasureKind measure_kind_from_name(const std::string& name);
QueryDirection measure_direction(MeasureKind kind);
// True for measures that need per-member supports (at least 2 members).
bool measure_uses_committee(MeasureKind kind);

// Natural-log entropy of a probability vector; 0 * ln 0 = 0.
double entropy(const VectorXd& p);
// KL(p || q) with the convention that p_c = 0 terms contribute 0.
double kl_divergence(const VectorXd& p, const VectorXd& q);
// Largest minus second-largest entry.
double top_two_margin(const VectorXd& supports);

// Single-vector scores: FixedUncertainty / VariableUncertainty -> max
// support, ClassificationMargin -> top-two margin.
double score_single(MeasureKind kind, const VectorXd& supports);

// Committee scores: VoteEntropy, ConsensusEntropy (entropy of the mean row),
// MaxDisagreement (max_l KL(row_l || mean row)), MinMargin.
double score_committee(MeasureKind kind, const MemberSupports& ms);

// Variable-uncertainty threshold schedule: shrink on query, grow on skip,
// clamped to [0.01, 1.0].
double variable_uncertainty_update(double theta, bool queried,
                                   double step = 0.01);

// An informativeness measure with its decision threshold. The threshold is
// mutable state only for VariableUncertainty; for Random it is the per-sample
// query probability.
class Measure {
 public:
  Measure(MeasureKind kind, double threshold, double step = 0.01);

  MeasureKind kind() const { return kind_; }
  QueryDirection direction() const { return measure_direction(kind_); }
  double threshold() const { return threshold_; }
  double step() const { return step_; }

  // Scores one sample. Single-vector kinds score the mean of the member
  // rows; Random has no score and returns NaN.
  double score(const MemberSupports& ms) const;

  bool wants_query(double score) const;

  // Post-decision threshold update (VariableUncertainty only; no-op else).
  void notify_decision(bool queried);

 private:
  MeasureKind kind_;
  double threshold_;
  double step_;
};

}  // namespace salt
