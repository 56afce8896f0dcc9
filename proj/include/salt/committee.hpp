#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "salt/mlp.hpp"
#include "salt/rng.hpp"
#include "salt/types.hpp"

namespace salt {

// Per-member class supports for one sample: one probability row per member.
struct MemberSupports {
  MatrixXd supports;  // L x C
  VectorXi labels;    // per-member argmax, ties to the lowest class index

  int members() const { return static_cast<int>(supports.rows()); }
  int classes() const { return static_cast<int>(supports.cols()); }
};

enum class Aggregation { MeanSupports, MajorityVote };

// Poisson repeat count per record, capped at 4. lambda <= 0 yields 0 repeats.
std::vector<int> bootstrap_counts(const std::vector<double>& lambdas, Rng& rng);

// Materialized bootstrap of the pool: record i repeated counts[i] times,
// then the first pool record of every class that would otherwise be absent.
std::pair<MatrixXd, VectorXi> bootstrap_dataset(
    const LabeledPool& pool, const std::vector<double>& lambdas, Rng& rng);

// Committee of identically configured classifiers. Each training pass draws
// an independent bootstrap per member; member RNG streams derive from
// (rng_seed, member index, update counter), so retraining replays exactly.
class Committee {
 public:
  Committee(int size, NetworkConfig member_config, std::uint64_t rng_seed,
            bool bootstrap = true);

  void train(const LabeledPool& pool);
  void train(const LabeledPool& pool, const std::vector<double>& lambdas);

  MemberSupports member_supports(const VectorXd& x) const;
  std::pair<int, VectorXd> predict(
      const VectorXd& x, Aggregation agg = Aggregation::MeanSupports) const;
  MatrixXd mean_supports_batch(const MatrixXd& X) const;
  VectorXi predict_batch(const MatrixXd& X,
                         Aggregation agg = Aggregation::MeanSupports) const;

  bool trained() const;
  int size() const { return static_cast<int>(members_.size()); }
  bool bootstrap_enabled() const { return bootstrap_; }
  long update_counter() const { return update_counter_; }
  const std::vector<MlpClassifier>& members() const { return members_; }

 private:
  std::vector<MlpClassifier> members_;
  NetworkConfig member_config_;
  std::uint64_t rng_seed_;
  bool bootstrap_;
  long update_counter_ = 0;
};

}  // namespace salt
