#include "salt/tuning.hpp"

#include <numeric>
#include <random>
#include <stdexcept>

namespace salt {

void TunerSpec::validate() const {
  if (!(lo < hi))
    throw std::invalid_argument("tuner: interval lower bound must be below "
                                "the upper bound");
  if (num_samples < 1)
    throw std::invalid_argument("tuner: num_samples must be >= 1");
  if (seeds_per_sample < 1)
    throw std::invalid_argument("tuner: seeds_per_sample must be >= 1");
}

std::pair<double, double> default_tuning_interval(const std::string& method) {
  if (method == "fixed_uncertainty") return {0.5, 1.0};
  if (method == "variable_uncertainty") return {0.5, 1.0};
  if (method == "classification_margin") return {0.0, 0.8};
  if (method == "vote_entropy") return {1.0, 50.0};
  if (method == "consensus_entropy") return {0.1, 1.0};
  if (method == "max_disagreement") return {1.0, 20.0};
  if (method == "min_margin") return {0.0, 0.5};
  if (method == "sl2s") return {0.5, 1.0};
  throw std::invalid_argument("method '" + method +
                              "' has no tuning interval");
}

double TuneEntry::mean_score() const {
  if (scores.empty()) return 0.0;
  return std::accumulate(scores.begin(), scores.end(), 0.0) /
         static_cast<double>(scores.size());
}

TuneResult random_search(
    const TunerSpec& spec,
    const std::function<double(double, std::uint64_t)>& run_fn,
    const std::function<void(const std::vector<TuneEntry>&)>& on_progress) {
  spec.validate();
  if (!run_fn) throw std::invalid_argument("random_search: no run function");

  Rng rng(derive_seed(spec.rng_seed, 0));
  std::uniform_real_distribution<double> draw(spec.lo, spec.hi);

  TuneResult result;
  for (int i = 0; i < spec.num_samples; ++i) {
    TuneEntry entry;
    entry.threshold = draw(rng);
    for (int s = 0; s < spec.seeds_per_sample; ++s) {
      const std::uint64_t run_seed =
          derive_seed(spec.rng_seed, 1, static_cast<std::uint64_t>(i),
                      static_cast<std::uint64_t>(s));
      try {
        entry.scores.push_back(run_fn(entry.threshold, run_seed));
      } catch (const std::exception& e) {
        if (on_progress) on_progress(result.table);
        throw std::runtime_error(
            "random_search: run failed at threshold " +
            std::to_string(entry.threshold) + " (sample " +
            std::to_string(i) + ", seed index " + std::to_string(s) +
            "): " + e.what());
      }
    }
    result.table.push_back(std::move(entry));
    if (on_progress) on_progress(result.table);
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.table.size(); ++i) {
    const double score = result.table[i].mean_score();
    const double best_score = result.table[best].mean_score();
    if (score > best_score ||
        (score == best_score &&
         result.table[i].threshold < result.table[best].threshold))
      best = i;
  }
  result.best_threshold = result.table[best].threshold;
  result.best_score = result.table[best].mean_score();
  return result;
}

}  // namespace salt
