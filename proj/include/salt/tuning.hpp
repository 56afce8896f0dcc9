#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "salt/rng.hpp"

namespace salt {

struct TunerSpec {
  std::string method;  // method whose threshold is being tuned
  double lo = 0.0;
  double hi = 1.0;
  int num_samples = 20;
  int seeds_per_sample = 3;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Threshold search interval for each tunable method.
std::pair<double, double> default_tuning_interval(const std::string& method);

struct TuneEntry {
  double threshold = 0.0;
  std::vector<double> scores;  // one balanced accuracy per seed
  double mean_score() const;
};

struct TuneResult {
  double best_threshold = 0.0;
  double best_score = 0.0;
  std::vector<TuneEntry> table;
};

// Draws num_samples thresholds uniformly from [lo, hi] and scores each with
// seeds_per_sample runs of run_fn(threshold, run_seed). Highest mean wins;
// ties go to the lower threshold. on_progress (optional) sees the partial
// table after every completed threshold and is also called right before a
// run failure is rethrown, so callers can persist partial results.
TuneResult random_search(
    const TunerSpec& spec,
    const std::function<double(double, std::uint64_t)>& run_fn,
    const std::function<void(const std::vector<TuneEntry>&)>& on_progress =
        {});

}  // namespace salt
