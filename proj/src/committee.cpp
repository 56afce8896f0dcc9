#include "salt/committee.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

namespace salt {

std::vector<int> bootstrap_counts(const std::vector<double>& lambdas, Rng& rng) {
  std::vector<int> counts(lambdas.size(), 0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double lam = lambdas[i];
    if (lam <= 0.0) continue;  // Poisson is undefined at 0; zero repeats.
    std::poisson_distribution<int> pois(lam);
    counts[i] = std::min(pois(rng), 4);
  }
  return counts;
}

std::pair<MatrixXd, VectorXi> bootstrap_dataset(
    const LabeledPool& pool, const std::vector<double>& lambdas, Rng& rng) {
  if (lambdas.size() != pool.size())
    throw std::invalid_argument("bootstrap_dataset: lambda count " +
                                std::to_string(lambdas.size()) +
                                " does not match pool size " +
                                std::to_string(pool.size()));
  if (pool.size() == 0)
    throw std::invalid_argument("bootstrap_dataset: empty pool");

  const std::vector<int> counts = bootstrap_counts(lambdas, rng);
  const auto& records = pool.records();
  const long size = static_cast<long>(pool.size());

  std::vector<long> rows;
  std::set<int> present;
  for (long i = 0; i < size; ++i) {
    for (int r = 0; r < counts[static_cast<std::size_t>(i)]; ++r)
      rows.push_back(i);
    if (counts[static_cast<std::size_t>(i)] > 0)
      present.insert(records[static_cast<std::size_t>(i)].label);
  }
  // Patch class coverage: first pool occurrence of each missing class, in
  // class order, appended after the sampled rows.
  for (int c = 0; c < pool.num_classes(); ++c) {
    if (present.count(c)) continue;
    for (long i = 0; i < size; ++i) {
      if (records[static_cast<std::size_t>(i)].label == c) {
        rows.push_back(i);
        present.insert(c);
        break;
      }
    }
  }

  const long dim = records.front().features.size();
  MatrixXd X(static_cast<long>(rows.size()), dim);
  VectorXi y(static_cast<long>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    X.row(static_cast<long>(r)) =
        records[static_cast<std::size_t>(rows[r])].features.transpose();
    y[static_cast<long>(r)] = records[static_cast<std::size_t>(rows[r])].label;
  }
  return {std::move(X), std::move(y)};
}

Committee::Committee(int size, NetworkConfig member_config,
                     std::uint64_t rng_seed, bool bootstrap)
    : member_config_(std::move(member_config)),
      rng_seed_(rng_seed),
      bootstrap_(bootstrap) {
  if (size < 1)
    throw std::invalid_argument("Committee: size must be >= 1, got " +
                                std::to_string(size));
  members_.reserve(static_cast<std::size_t>(size));
  for (int l = 0; l < size; ++l) members_.emplace_back(member_config_);
}

void Committee::train(const LabeledPool& pool) {
  train(pool, pool.lambdas());
}

void Committee::train(const LabeledPool& pool,
                      const std::vector<double>& lambdas) {
  if (pool.distinct_classes() < 2)
    throw std::invalid_argument(
        "Committee::train: pool must contain at least 2 distinct classes");

  for (std::size_t l = 0; l < members_.size(); ++l) {
    NetworkConfig cfg = member_config_;
    cfg.rng_seed = derive_seed(rng_seed_, l, static_cast<std::uint64_t>(update_counter_), 1);
    members_[l].mutable_config() = cfg;

    if (bootstrap_) {
      Rng boot_rng(derive_seed(rng_seed_, l,
                               static_cast<std::uint64_t>(update_counter_), 0));
      auto [X, y] = bootstrap_dataset(pool, lambdas, boot_rng);
      members_[l].fit(X, y, pool.num_classes());
    } else {
      members_[l].fit(pool.feature_matrix(), pool.label_vector(),
                      pool.num_classes());
    }
  }
  ++update_counter_;
}

MemberSupports Committee::member_supports(const VectorXd& x) const {
  if (!trained())
    throw std::logic_error("Committee::member_supports: committee not trained");
  MemberSupports out;
  out.supports.resize(size(), members_.front().num_classes());
  out.labels.resize(size());
  for (int l = 0; l < size(); ++l) {
    const VectorXd p = members_[static_cast<std::size_t>(l)].predict_supports(x);
    out.supports.row(l) = p.transpose();
    out.labels[l] = argmax_lowest(p);
  }
  return out;
}

std::pair<int, VectorXd> Committee::predict(const VectorXd& x,
                                            Aggregation agg) const {
  const MemberSupports ms = member_supports(x);
  const VectorXd mean = ms.supports.colwise().mean();
  if (agg == Aggregation::MeanSupports) return {argmax_lowest(mean), mean};
  VectorXd votes = VectorXd::Zero(ms.classes());
  for (int l = 0; l < ms.members(); ++l) votes[ms.labels[l]] += 1.0;
  return {argmax_lowest(votes), mean};
}

MatrixXd Committee::mean_supports_batch(const MatrixXd& X) const {
  if (!trained())
    throw std::logic_error("Committee::mean_supports_batch: not trained");
  MatrixXd mean = members_.front().predict_supports_batch(X);
  for (std::size_t l = 1; l < members_.size(); ++l)
    mean += members_[l].predict_supports_batch(X);
  mean /= static_cast<double>(members_.size());
  return mean;
}

VectorXi Committee::predict_batch(const MatrixXd& X, Aggregation agg) const {
  if (agg == Aggregation::MeanSupports) {
    const MatrixXd mean = mean_supports_batch(X);
    VectorXi labels(mean.rows());
    for (long i = 0; i < mean.rows(); ++i)
      labels[i] = argmax_lowest(mean.row(i).transpose());
    return labels;
  }
  VectorXi labels(X.rows());
  for (long i = 0; i < X.rows(); ++i)
    labels[i] = predict(X.row(i).transpose(), agg).first;
  return labels;
}

bool Committee::trained() const {
  for (const auto& m : members_)
    if (!m.trained()) return false;
  return true;
}

}  // namespace salt
