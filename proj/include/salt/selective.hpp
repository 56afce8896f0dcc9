#pragma once

#include <vector>

#include "salt/committee.hpp"
#include "salt/measures.hpp"
#include "salt/rng.hpp"
#include "salt/trace.hpp"
#include "salt/types.hpp"

namespace salt {

// Shared knobs for the stream loops: labels are buffered and the learner
// retrained once the buffer holds batch_size new records; test balanced
// accuracy is checkpointed before the stream, after every
// checkpoint_every-th retrain, and once more at the end.
struct LoopConfig {
  long batch_size = 1;
  long checkpoint_every = 50;
};

// Generic selective sampling: score each stream sample with the measure and
// query the oracle when the threshold says so (or by coin flip for Random)
// while budget remains. Skipped samples are discarded. The learner must
// already be trained on the seed pool; `pool` is that seed pool and grows
// with the oracle labels. `rng` drives only the Random measure.
ExperimentTrace selective_sampling_run(LabeledPool& pool,
                                       UnlabeledStream& stream,
                                       Committee& learner, Measure measure,
                                       Budget& budget, const LoopConfig& loop,
                                       const MatrixXd& test_X,
                                       const VectorXi& test_y, Rng& rng);

}  // namespace salt
