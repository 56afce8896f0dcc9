#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "salt/types.hpp"

namespace salt {

enum class Activation { ReLU };

struct NetworkConfig {
  std::vector<int> hidden_layers{100, 100};
  double learning_rate = 1e-3;
  int max_iterations = 5000;
  Activation activation = Activation::ReLU;
  std::uint64_t rng_seed = 0;
  bool warm_start = false;  // reuse current parameters on refit

  // Adam constants and the loss-plateau stopping rule.
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double plateau_tolerance = 1e-6;
  int plateau_window = 10;
};

// One entry per layer, same shapes as the parameters they differentiate.
struct Gradients {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
};

// Numerically safe softmax of each column (max subtraction before exp).
MatrixXd softmax_columns(const MatrixXd& logits);

// Index of the largest entry; ties resolve to the lowest index.
int argmax_lowest(const VectorXd& v);

// Dense ReLU network with a softmax head, trained with full-batch Adam on
// mean cross-entropy. Deterministic given (data order, config, rng_seed).
class MlpClassifier {
 public:
  MlpClassifier() = default;
  explicit MlpClassifier(NetworkConfig config);

  // Glorot-uniform weights, zero biases. fit calls this itself; exposed so
  // gradient checks can run on an untrained network.
  void initialize(int input_dim, int num_classes);

  // X holds one sample per row; y holds class indices in [0, num_classes).
  void fit(const MatrixXd& X, const VectorXi& y, int num_classes);

  VectorXd predict_supports(const VectorXd& x) const;
  MatrixXd predict_supports_batch(const MatrixXd& X) const;
  int predict(const VectorXd& x) const;
  VectorXi predict_batch(const MatrixXd& X) const;

  double loss(const MatrixXd& X, const VectorXi& y) const;
  Gradients loss_gradient(const MatrixXd& X, const VectorXi& y) const;

  bool initialized() const { return initialized_; }
  bool trained() const { return trained_; }
  int input_dim() const;
  int num_classes() const;
  const NetworkConfig& config() const { return config_; }
  NetworkConfig& mutable_config() { return config_; }

  const std::vector<MatrixXd>& weights() const { return weights_; }
  const std::vector<VectorXd>& biases() const { return biases_; }
  void set_parameters(std::vector<MatrixXd> weights,
                      std::vector<VectorXd> biases);

  // Parameter dump for checkpointing: layer sizes plus row-major weights.
  std::string to_json() const;
  static MlpClassifier from_json(const std::string& text);
  void save(const std::string& path) const;
  static MlpClassifier load(const std::string& path);

 private:
  MatrixXd forward_columns(const MatrixXd& inputs,
                           std::vector<MatrixXd>* activations) const;
  void require_ready(Eigen::Index dim) const;

  NetworkConfig config_;
  std::vector<MatrixXd> weights_;  // weights_[l] is fan_out x fan_in
  std::vector<VectorXd> biases_;
  bool initialized_ = false;
  bool trained_ = false;
};

}  // namespace salt
