#pragma once

// Builders for the stream-loop tests: tiny Gaussian cluster tasks and
// committees that train in milliseconds.

#include <cstdint>
#include <random>
#include <vector>

#include "salt/committee.hpp"
#include "salt/mlp.hpp"
#include "salt/rng.hpp"
#include "salt/types.hpp"

namespace testutil {

inline salt::NetworkConfig tiny_net(std::uint64_t seed = 7, int iterations = 80,
                                    double learning_rate = 0.05) {
  salt::NetworkConfig cfg;
  cfg.hidden_layers = {4};
  cfg.learning_rate = learning_rate;
  cfg.max_iterations = iterations;
  cfg.rng_seed = seed;
  return cfg;
}

// 2-D cluster centers; `spread` scales the distance between them, so small
// values give overlapping (hard) classes and large values separable ones.
inline salt::VectorXd cluster_point(int label, double spread,
                                    salt::Rng& rng) {
  static const double cx[] = {-1.0, 1.0, 0.0};
  static const double cy[] = {0.0, 0.0, 1.5};
  std::normal_distribution<double> noise(0.0, 0.5);
  salt::VectorXd x(2);
  x << cx[label] * spread + noise(rng), cy[label] * spread + noise(rng);
  return x;
}

inline salt::LabeledPool cluster_pool(int per_class, int num_classes,
                                      std::uint64_t seed,
                                      double spread = 4.0) {
  salt::LabeledPool pool(num_classes);
  salt::Rng rng(seed);
  for (int i = 0; i < per_class; ++i)
    for (int c = 0; c < num_classes; ++c)
      pool.append(cluster_point(c, spread, rng), c, 1.0,
                  salt::LabelSource::Seed);
  return pool;
}

inline std::vector<salt::Sample> cluster_stream(int n, int num_classes,
                                                std::uint64_t seed,
                                                double spread = 4.0) {
  std::vector<salt::Sample> samples;
  salt::Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, num_classes - 1);
  for (int i = 0; i < n; ++i) {
    const int c = pick(rng);
    samples.push_back({cluster_point(c, spread, rng), c});
  }
  return samples;
}

inline void cluster_test_set(int n, int num_classes, std::uint64_t seed,
                             salt::MatrixXd& X, salt::VectorXi& y,
                             double spread = 4.0) {
  X.resize(n, 2);
  y.resize(n);
  salt::Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, num_classes - 1);
  for (int i = 0; i < n; ++i) {
    const int c = pick(rng);
    y[i] = c;
    X.row(i) = cluster_point(c, spread, rng).transpose();
  }
}

}  // namespace testutil
