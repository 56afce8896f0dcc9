#include "salt/mlp.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include <json.hpp>
#include "salt/rng.hpp"

namespace salt {

namespace {

MatrixXd one_hot_columns(const VectorXi& y, int num_classes) {
  MatrixXd Y = MatrixXd::Zero(num_classes, y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Y(y(i), i) = 1.0;
  }
  return Y;
}

double mean_cross_entropy(const MatrixXd& probs, const VectorXi& y) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    total -= std::log(std::max(probs(y(i), i), 1e-300));
  }
  return total / static_cast<double>(y.size());
}

void check_labels(const VectorXi& y, int num_classes) {
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) < 0 || y(i) >= num_classes) {
      throw std::invalid_argument("label out of range [0, num_classes)");
    }
  }
}

}  // namespace

MatrixXd softmax_columns(const MatrixXd& logits) {
  MatrixXd shifted =
      logits.rowwise() - logits.colwise().maxCoeff();
  MatrixXd e = shifted.array().exp().matrix();
  Eigen::RowVectorXd sums = e.colwise().sum();
  return e.array().rowwise() / sums.array();
}

int argmax_lowest(const VectorXd& v) {
  Eigen::Index idx = 0;
  v.maxCoeff(&idx);  // Eigen returns the first maximum in traversal order
  return static_cast<int>(idx);
}

MlpClassifier::MlpClassifier(NetworkConfig config) : config_(std::move(config)) {
  if (!(config_.learning_rate > 0.0)) {
    throw std::invalid_argument("NetworkConfig: learning_rate must be > 0");
  }
  if (config_.max_iterations < 1) {
    throw std::invalid_argument("NetworkConfig: max_iterations must be >= 1");
  }
  for (int w : config_.hidden_layers) {
    if (w < 1) throw std::invalid_argument("NetworkConfig: layer width must be >= 1");
  }
}

void MlpClassifier::initialize(int input_dim, int num_classes) {
  if (input_dim < 1 || num_classes < 1) {
    throw std::invalid_argument("MlpClassifier: bad dimensions");
  }
  std::vector<int> sizes;
  sizes.push_back(input_dim);
  sizes.insert(sizes.end(), config_.hidden_layers.begin(),
               config_.hidden_layers.end());
  sizes.push_back(num_classes);

  Rng rng(config_.rng_seed);
  weights_.clear();
  biases_.clear();
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int fan_in = sizes[l];
    const int fan_out = sizes[l + 1];
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    MatrixXd W(fan_out, fan_in);
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      for (Eigen::Index c = 0; c < W.cols(); ++c) {
        W(r, c) = dist(rng);
      }
    }
    weights_.push_back(std::move(W));
    biases_.push_back(VectorXd::Zero(fan_out));
  }
  initialized_ = true;
  trained_ = false;
}

void MlpClassifier::require_ready(Eigen::Index dim) const {
  if (!initialized_) {
    throw std::logic_error("MlpClassifier: model has no parameters yet");
  }
  if (dim != weights_.front().cols()) {
    throw std::invalid_argument("MlpClassifier: feature dimension mismatch");
  }
}

MatrixXd MlpClassifier::forward_columns(const MatrixXd& inputs,
                                        std::vector<MatrixXd>* activations) const {
  if (activations) {
    activations->clear();
    activations->push_back(inputs);
  }
  MatrixXd a = inputs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    MatrixXd z = weights_[l] * a;
    z.colwise() += biases_[l];
    if (l + 1 < weights_.size()) {
      a = z.cwiseMax(0.0);  // ReLU
      if (activations) activations->push_back(a);
    } else {
      a = softmax_columns(z);
    }
  }
  return a;
}

void MlpClassifier::fit(const MatrixXd& X, const VectorXi& y, int num_classes) {
  if (X.rows() == 0) {
    throw std::invalid_argument("MlpClassifier::fit: empty dataset");
  }
  if (X.rows() != y.size()) {
    throw std::invalid_argument("MlpClassifier::fit: X/y size mismatch");
  }
  check_labels(y, num_classes);

  const bool reuse = config_.warm_start && initialized_ &&
                     weights_.front().cols() == X.cols() &&
                     weights_.back().rows() == num_classes;
  if (!reuse) {
    initialize(static_cast<int>(X.cols()), num_classes);
  }

  const MatrixXd inputs = X.transpose();
  const MatrixXd targets = one_hot_columns(y, num_classes);
  const double inv_n = 1.0 / static_cast<double>(X.rows());

  std::vector<MatrixXd> m_w, v_w;
  std::vector<VectorXd> m_b, v_b;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    m_w.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    v_w.push_back(MatrixXd::Zero(weights_[l].rows(), weights_[l].cols()));
    m_b.push_back(VectorXd::Zero(biases_[l].size()));
    v_b.push_back(VectorXd::Zero(biases_[l].size()));
  }

  std::vector<double> losses;
  losses.reserve(static_cast<std::size_t>(config_.max_iterations));
  std::vector<MatrixXd> acts;

  for (int step = 1; step <= config_.max_iterations; ++step) {
    const MatrixXd probs = forward_columns(inputs, &acts);
    losses.push_back(mean_cross_entropy(probs, y));

    // Plateau rule: stop once the window-sized improvement vanishes.
    const std::size_t t = losses.size() - 1;
    if (t >= static_cast<std::size_t>(config_.plateau_window) &&
        losses[t - config_.plateau_window] - losses[t] <
            config_.plateau_tolerance) {
      break;
    }

    MatrixXd delta = (probs - targets) * inv_n;
    for (std::size_t l = weights_.size(); l-- > 0;) {
      const MatrixXd grad_w = delta * acts[l].transpose();
      const VectorXd grad_b = delta.rowwise().sum();
      if (l > 0) {
        delta = (weights_[l].transpose() * delta).array() *
                (acts[l].array() > 0.0).cast<double>();
      }

      const double bc1 = 1.0 - std::pow(config_.beta1, step);
      const double bc2 = 1.0 - std::pow(config_.beta2, step);
      m_w[l] = config_.beta1 * m_w[l] + (1.0 - config_.beta1) * grad_w;
      v_w[l] = config_.beta2 * v_w[l] +
               (1.0 - config_.beta2) * grad_w.array().square().matrix();
      m_b[l] = config_.beta1 * m_b[l] + (1.0 - config_.beta1) * grad_b;
      v_b[l] = config_.beta2 * v_b[l] +
               (1.0 - config_.beta2) * grad_b.array().square().matrix();

      weights_[l].array() -=
          config_.learning_rate * (m_w[l].array() / bc1) /
          ((v_w[l].array() / bc2).sqrt() + config_.epsilon);
      biases_[l].array() -=
          config_.learning_rate * (m_b[l].array() / bc1) /
          ((v_b[l].array() / bc2).sqrt() + config_.epsilon);
    }
  }

  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (!weights_[l].allFinite() || !biases_[l].allFinite()) {
      throw std::runtime_error("MlpClassifier::fit: parameters diverged");
    }
  }
  trained_ = true;
}

VectorXd MlpClassifier::predict_supports(const VectorXd& x) const {
  require_ready(x.size());
  return forward_columns(x, nullptr).col(0);
}

MatrixXd MlpClassifier::predict_supports_batch(const MatrixXd& X) const {
  require_ready(X.cols());
  return forward_columns(X.transpose(), nullptr).transpose();
}

int MlpClassifier::predict(const VectorXd& x) const {
  return argmax_lowest(predict_supports(x));
}

VectorXi MlpClassifier::predict_batch(const MatrixXd& X) const {
  const MatrixXd supports = predict_supports_batch(X);
  VectorXi out(supports.rows());
  for (Eigen::Index i = 0; i < supports.rows(); ++i) {
    out(i) = argmax_lowest(supports.row(i).transpose());
  }
  return out;
}

double MlpClassifier::loss(const MatrixXd& X, const VectorXi& y) const {
  require_ready(X.cols());
  check_labels(y, num_classes());
  return mean_cross_entropy(forward_columns(X.transpose(), nullptr), y);
}

Gradients MlpClassifier::loss_gradient(const MatrixXd& X, const VectorXi& y) const {
  if (X.rows() == 0) {
    throw std::invalid_argument("MlpClassifier::loss_gradient: empty batch");
  }
  require_ready(X.cols());
  check_labels(y, num_classes());

  std::vector<MatrixXd> acts;
  const MatrixXd probs = forward_columns(X.transpose(), &acts);
  const MatrixXd targets = one_hot_columns(y, num_classes());
  const double inv_n = 1.0 / static_cast<double>(X.rows());

  Gradients g;
  g.weights.resize(weights_.size());
  g.biases.resize(weights_.size());
  MatrixXd delta = (probs - targets) * inv_n;
  for (std::size_t l = weights_.size(); l-- > 0;) {
    g.weights[l] = delta * acts[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (weights_[l].transpose() * delta).array() *
              (acts[l].array() > 0.0).cast<double>();
    }
  }
  return g;
}

int MlpClassifier::input_dim() const {
  if (!initialized_) throw std::logic_error("MlpClassifier: uninitialized");
  return static_cast<int>(weights_.front().cols());
}

int MlpClassifier::num_classes() const {
  if (!initialized_) throw std::logic_error("MlpClassifier: uninitialized");
  return static_cast<int>(weights_.back().rows());
}

void MlpClassifier::set_parameters(std::vector<MatrixXd> weights,
                                   std::vector<VectorXd> biases) {
  if (weights.empty() || weights.size() != biases.size()) {
    throw std::invalid_argument("set_parameters: inconsistent layer count");
  }
  weights_ = std::move(weights);
  biases_ = std::move(biases);
  initialized_ = true;
}

std::string MlpClassifier::to_json() const {
  if (!initialized_) throw std::logic_error("MlpClassifier: uninitialized");
  nlohmann::json j;
  std::vector<int> sizes{input_dim()};
  for (const auto& w : weights_) sizes.push_back(static_cast<int>(w.rows()));
  j["layer_sizes"] = sizes;
  j["learning_rate"] = config_.learning_rate;
  j["max_iterations"] = config_.max_iterations;
  j["rng_seed"] = config_.rng_seed;
  std::vector<std::vector<double>> ws, bs;
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(weights_[l].size()));
    for (Eigen::Index r = 0; r < weights_[l].rows(); ++r) {
      for (Eigen::Index c = 0; c < weights_[l].cols(); ++c) {
        flat.push_back(weights_[l](r, c));  // row-major
      }
    }
    ws.push_back(std::move(flat));
    bs.emplace_back(biases_[l].data(), biases_[l].data() + biases_[l].size());
  }
  j["weights"] = ws;
  j["biases"] = bs;
  return j.dump();
}

MlpClassifier MlpClassifier::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const auto sizes = j.at("layer_sizes").get<std::vector<int>>();
  if (sizes.size() < 2) {
    throw std::invalid_argument("model dump: need at least two layer sizes");
  }
  NetworkConfig cfg;
  cfg.hidden_layers.assign(sizes.begin() + 1, sizes.end() - 1);
  cfg.learning_rate = j.value("learning_rate", 1e-3);
  cfg.max_iterations = j.value("max_iterations", 5000);
  cfg.rng_seed = j.value("rng_seed", std::uint64_t{0});

  MlpClassifier model(cfg);
  const auto ws = j.at("weights").get<std::vector<std::vector<double>>>();
  const auto bs = j.at("biases").get<std::vector<std::vector<double>>>();
  if (ws.size() != sizes.size() - 1 || bs.size() != ws.size()) {
    throw std::invalid_argument("model dump: layer count mismatch");
  }
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int rows = sizes[l + 1];
    const int cols = sizes[l];
    if (ws[l].size() != static_cast<std::size_t>(rows) * cols ||
        bs[l].size() != static_cast<std::size_t>(rows)) {
      throw std::invalid_argument("model dump: parameter size mismatch");
    }
    MatrixXd W(rows, cols);
    std::size_t k = 0;
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) W(r, c) = ws[l][k++];
    }
    weights.push_back(std::move(W));
    biases.push_back(Eigen::Map<const VectorXd>(bs[l].data(), rows));
  }
  model.set_parameters(std::move(weights), std::move(biases));
  model.trained_ = true;
  return model;
}

void MlpClassifier::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out << to_json() << "\n";
}

MlpClassifier MlpClassifier::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace salt
