#include "salt/sl2s.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "loop_common.hpp"

namespace salt {

void Sl2sConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("sl2s: tau must be in (0, 1), got " +
                                std::to_string(tau));
  if (k < 1)
    throw std::invalid_argument("sl2s: k must be >= 1, got " +
                                std::to_string(k));
}

void PreliminaryConfig::validate() const {
  if (!(self_label_threshold > 0.0 && self_label_threshold < 1.0))
    throw std::invalid_argument(
        "preliminary: self_label_threshold must be in (0, 1)");
  if (!(query_threshold > 0.0 && query_threshold <= self_label_threshold))
    throw std::invalid_argument(
        "preliminary: query_threshold must be in (0, self_label_threshold]");
  if (k < 1) throw std::invalid_argument("preliminary: k must be >= 1");
}

GateDecision consistency_gate(const MemberSupports& ms, double tau) {
  const int L = ms.members();
  if (L < 1) throw std::invalid_argument("consistency_gate: zero members");

  GateDecision d;
  int best_member = 0;
  for (int l = 0; l < L; ++l) {
    const double row_max = ms.supports.row(l).maxCoeff();
    if (row_max > tau) ++d.confident_count;
    if (row_max > d.max_support) {
      d.max_support = row_max;
      best_member = l;
    }
  }
  d.label = ms.labels[best_member];

  bool agree = d.confident_count > L / 2.0;
  if (agree) {
    for (int l = 0; l < L && agree; ++l) {
      if (ms.supports.row(l).maxCoeff() > tau && ms.labels[l] != d.label)
        agree = false;
    }
  }
  d.outcome = agree ? Decision::SelfLabel : Decision::Query;
  if (d.outcome != Decision::SelfLabel) d.label = -1;
  return d;
}

double compute_lambda(double max_support, double tau, bool budget_empty) {
  if (!(tau > 0.0 && tau < 1.0))
    throw std::invalid_argument("compute_lambda: tau must be in (0, 1)");
  if (max_support < tau)
    throw std::logic_error(
        "compute_lambda: max_support " + std::to_string(max_support) +
        " below tau " + std::to_string(tau) + "; the gate should have queried");
  return max_support / tau - (budget_empty ? 1.0 : 0.0);
}

double prior_estimate(const LabeledPool& pool, int k, int predicted_label) {
  if (pool.size() == 0)
    throw std::invalid_argument("prior_estimate: empty pool");
  if (k < 1) throw std::invalid_argument("prior_estimate: k must be >= 1");

  const long size = static_cast<long>(pool.size());
  const long window = std::min<long>(k, size);
  const auto& records = pool.records();
  long count = 0;
  for (long i = size - window; i < size; ++i)
    count += records[static_cast<std::size_t>(i)].label == predicted_label;
  return static_cast<double>(count) / static_cast<double>(window);
}

bool prior_filter(double p_hat, int num_classes) {
  if (num_classes < 2)
    throw std::invalid_argument("prior_filter: need at least 2 classes");
  return p_hat - 1.0 / static_cast<double>(num_classes) <= 0.0;
}

ExperimentTrace sl2s_run(LabeledPool& pool, UnlabeledStream& stream,
                         Committee& committee, const Sl2sConfig& config,
                         Budget& budget, const MatrixXd& test_X,
                         const VectorXi& test_y) {
  config.validate();
  detail::StreamLoop run(pool, committee, budget, config.loop, test_X, test_y);

  long iteration = 0;
  while (auto sample = stream.next()) {
    const MemberSupports ms = committee.member_supports(sample->features);
    const GateDecision gate = consistency_gate(ms, config.tau);

    if (gate.outcome == Decision::SelfLabel) {
      if (config.disable_self_labeling) {
        run.skip(*sample, iteration);
      } else {
        const bool allow =
            config.disable_prior_filter ||
            prior_filter(prior_estimate(pool, config.k, gate.label),
                         pool.num_classes());
        if (allow) {
          const double lambda =
              config.disable_lambda_reduction
                  ? compute_lambda(gate.max_support, config.tau, false)
                  : compute_lambda(gate.max_support, config.tau,
                                   budget.exhausted());
          run.append_self_label(*sample, gate.label, lambda, iteration);
        } else {
          run.skip(*sample, iteration);
        }
      }
    } else if (!budget.exhausted()) {
      run.append_oracle(*sample, iteration);
    } else {
      run.skip(*sample, iteration);
    }
    ++iteration;
  }

  ExperimentTrace trace = run.finish(iteration);
  trace.method = "sl2s";
  trace.threshold = config.tau;
  trace.budget_total = budget.total();
  return trace;
}

ExperimentTrace preliminary_run(LabeledPool& pool, UnlabeledStream& stream,
                                Committee& model,
                                const PreliminaryConfig& config,
                                Budget& budget, const MatrixXd& test_X,
                                const VectorXi& test_y) {
  config.validate();
  detail::StreamLoop run(pool, model, budget, config.loop, test_X, test_y);

  long iteration = 0;
  while (auto sample = stream.next()) {
    const auto [label, supports] = model.predict(sample->features);
    const double max_support = supports.maxCoeff();

    if (max_support > config.self_label_threshold) {
      const bool allow =
          !config.use_prior_filter ||
          prior_filter(prior_estimate(pool, config.k, label),
                       pool.num_classes());
      if (allow)
        run.append_self_label(*sample, label, 1.0, iteration);
      else
        run.skip(*sample, iteration);
    } else if (max_support < config.query_threshold && !budget.exhausted()) {
      run.append_oracle(*sample, iteration);
    } else {
      run.skip(*sample, iteration);
    }
    ++iteration;
  }

  ExperimentTrace trace = run.finish(iteration);
  trace.method = "preliminary";
  trace.threshold = config.self_label_threshold;
  trace.budget_total = budget.total();
  return trace;
}

}  // namespace salt
