#include "salt/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace salt {

std::string measure_kind_name(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::Random: return "random";
    case MeasureKind::FixedUncertainty: return "fixed_uncertainty";
    case MeasureKind::VariableUncertainty: return "variable_uncertainty";
    case MeasureKind::ClassificationMargin: return "classification_margin";
    case MeasureKind::VoteEntropy: return "vote_entropy";
    case MeasureKind::ConsensusEntropy: return "consensus_entropy";
    case MeasureKind::MaxDisagreement: return "max_disagreement";
    case MeasureKind::MinMargin: return "min_margin";
  }
  throw std::logic_error("measure_kind_name: unknown kind");
}

MeasureKind measure_kind_from_name(const std::string& name) {
  for (MeasureKind kind :
       {MeasureKind::Random, MeasureKind::FixedUncertainty,
        MeasureKind::VariableUncertainty, MeasureKind::ClassificationMargin,
        MeasureKind::VoteEntropy, MeasureKind::ConsensusEntropy,
        MeasureKind::MaxDisagreement, MeasureKind::MinMargin}) {
    if (measure_kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown measure kind: " + name);
}

QueryDirection measure_direction(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::VoteEntropy:
    case MeasureKind::ConsensusEntropy:
    case MeasureKind::MaxDisagreement:
      return QueryDirection::QueryWhenHigh;
    default:
      return QueryDirection::QueryWhenLow;
  }
}

bool measure_uses_committee(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::VoteEntropy:
    case MeasureKind::ConsensusEntropy:
    case MeasureKind::MaxDisagreement:
    case MeasureKind::MinMargin:
      return true;
    default:
      return false;
  }
}

double entropy(const VectorXd& p) {
  double h = 0.0;
  for (long c = 0; c < p.size(); ++c)
    if (p[c] > 0.0) h -= p[c] * std::log(p[c]);
  return h;
}

double kl_divergence(const VectorXd& p, const VectorXd& q) {
  if (p.size() != q.size())
    throw std::invalid_argument("kl_divergence: size mismatch");
  double d = 0.0;
  for (long c = 0; c < p.size(); ++c)
    if (p[c] > 0.0) d += p[c] * std::log(p[c] / q[c]);
  return d;
}

double top_two_margin(const VectorXd& supports) {
  if (supports.size() < 2)
    throw std::invalid_argument("top_two_margin: need at least 2 classes");
  double top = -std::numeric_limits<double>::infinity();
  double second = top;
  for (long c = 0; c < supports.size(); ++c) {
    if (supports[c] > top) {
      second = top;
      top = supports[c];
    } else if (supports[c] > second) {
      second = supports[c];
    }
  }
  return top - second;
}

double score_single(MeasureKind kind, const VectorXd& supports) {
  if (supports.size() < 2)
    throw std::invalid_argument("score_single: need at least 2 classes");
  switch (kind) {
    case MeasureKind::FixedUncertainty:
    case MeasureKind::VariableUncertainty:
      return supports.maxCoeff();
    case MeasureKind::ClassificationMargin:
      return top_two_margin(supports);
    default:
      throw std::invalid_argument("score_single: " + measure_kind_name(kind) +
                                  " is not a single-vector measure");
  }
}

double score_committee(MeasureKind kind, const MemberSupports& ms) {
  const int L = ms.members();
  const int C = ms.classes();
  if (L < 1)
    throw std::invalid_argument("score_committee: zero members");
  if (C < 2)
    throw std::invalid_argument("score_committee: need at least 2 classes");

  switch (kind) {
    case MeasureKind::VoteEntropy: {
      VectorXd votes = VectorXd::Zero(C);
      for (int l = 0; l < L; ++l) votes[ms.labels[l]] += 1.0;
      return entropy(votes / static_cast<double>(L));
    }
    case MeasureKind::ConsensusEntropy:
      return entropy(ms.supports.colwise().mean().transpose());
    case MeasureKind::MaxDisagreement: {
      const VectorXd mean = ms.supports.colwise().mean().transpose();
      double worst = 0.0;
      for (int l = 0; l < L; ++l)
        worst = std::max(worst,
                         kl_divergence(ms.supports.row(l).transpose(), mean));
      return worst;
    }
    case MeasureKind::MinMargin: {
      double best = std::numeric_limits<double>::infinity();
      for (int l = 0; l < L; ++l)
        best = std::min(best, top_two_margin(ms.supports.row(l).transpose()));
      return best;
    }
    default:
      throw std::invalid_argument("score_committee: " +
                                  measure_kind_name(kind) +
                                  " is not a committee measure");
  }
}

double variable_uncertainty_update(double theta, bool queried, double step) {
  const double next = queried ? theta * (1.0 - step) : theta * (1.0 + step);
  return std::clamp(next, 0.01, 1.0);
}

Measure::Measure(MeasureKind kind, double threshold, double step)
    : kind_(kind), threshold_(threshold), step_(step) {
  if (!std::isfinite(threshold) && kind == MeasureKind::Random)
    throw std::invalid_argument("Measure: random query rate must be finite");
  if (kind == MeasureKind::Random && (threshold < 0.0 || threshold > 1.0))
    throw std::invalid_argument(
        "Measure: random query rate must be in [0, 1], got " +
        std::to_string(threshold));
  if (step <= 0.0 || step >= 1.0)
    throw std::invalid_argument("Measure: step must be in (0, 1)");
}

double Measure::score(const MemberSupports& ms) const {
  if (kind_ == MeasureKind::Random)
    return std::numeric_limits<double>::quiet_NaN();
  if (measure_uses_committee(kind_)) return score_committee(kind_, ms);
  return score_single(kind_, ms.supports.colwise().mean().transpose());
}

bool Measure::wants_query(double score) const {
  if (kind_ == MeasureKind::Random)
    throw std::logic_error("Measure::wants_query: Random decides by draw");
  return direction() == QueryDirection::QueryWhenLow ? score <= threshold_
                                                     : score >= threshold_;
}

void Measure::notify_decision(bool queried) {
  if (kind_ != MeasureKind::VariableUncertainty) return;
  threshold_ = variable_uncertainty_update(threshold_, queried, step_);
}

}  // namespace salt
