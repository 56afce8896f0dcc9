#include "salt/selective.hpp"

#include <random>

#include "loop_common.hpp"

namespace salt {

ExperimentTrace selective_sampling_run(LabeledPool& pool,
                                       UnlabeledStream& stream,
                                       Committee& learner, Measure measure,
                                       Budget& budget, const LoopConfig& loop,
                                       const MatrixXd& test_X,
                                       const VectorXi& test_y, Rng& rng) {
  detail::StreamLoop run(pool, learner, budget, loop, test_X, test_y);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double configured_threshold = measure.threshold();

  long iteration = 0;
  while (auto sample = stream.next()) {
    bool query;
    if (measure.kind() == MeasureKind::Random) {
      // Draw unconditionally so the random stream does not depend on when
      // the budget runs out.
      const double u = unit(rng);
      query = !budget.exhausted() && u < measure.threshold();
    } else {
      const MemberSupports ms = learner.member_supports(sample->features);
      const double score = measure.score(ms);
      query = !budget.exhausted() && measure.wants_query(score);
    }

    if (query)
      run.append_oracle(*sample, iteration);
    else
      run.skip(*sample, iteration);
    measure.notify_decision(query);
    ++iteration;
  }

  ExperimentTrace trace = run.finish(iteration);
  trace.method = measure_kind_name(measure.kind());
  trace.threshold = configured_threshold;
  trace.budget_total = budget.total();
  return trace;
}

}  // namespace salt
