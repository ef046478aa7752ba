#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "asrl/environment.hpp"

namespace asrl {

/// Fully connected Q-network: ReLU hidden layers, linear output with one unit
/// per action. Samples are stored column-wise in batch matrices.
template <typename Scalar>
class QNetwork {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  QNetwork() = default;
  QNetwork(int input_dim, const std::vector<int>& hidden, int output_dim) {
    int fan_in = input_dim;
    for (int width : hidden) {
      weights_.push_back(Matrix::Zero(width, fan_in));
      biases_.push_back(Vector::Zero(width));
      fan_in = width;
    }
    weights_.push_back(Matrix::Zero(output_dim, fan_in));
    biases_.push_back(Vector::Zero(output_dim));
  }

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for weights and biases.
  void initialize(Rng& rng) {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const Scalar bound = Scalar(1) / std::sqrt(static_cast<Scalar>(weights_[l].cols()));
      std::uniform_real_distribution<Scalar> u(-bound, bound);
      for (Eigen::Index j = 0; j < weights_[l].cols(); ++j)
        for (Eigen::Index i = 0; i < weights_[l].rows(); ++i) weights_[l](i, j) = u(rng);
      for (Eigen::Index i = 0; i < biases_[l].size(); ++i) biases_[l][i] = u(rng);
    }
  }

  int input_dim() const { return static_cast<int>(weights_.front().cols()); }
  int output_dim() const { return static_cast<int>(weights_.back().rows()); }
  std::size_t layer_count() const { return weights_.size(); }

  std::vector<Matrix>& weights() { return weights_; }
  std::vector<Vector>& biases() { return biases_; }
  const std::vector<Matrix>& weights() const { return weights_; }
  const std::vector<Vector>& biases() const { return biases_; }

  bool same_shape(const QNetwork& o) const {
    if (weights_.size() != o.weights_.size()) return false;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      if (weights_[l].rows() != o.weights_[l].rows() || weights_[l].cols() != o.weights_[l].cols())
        return false;
    }
    return true;
  }

  Vector forward(const Vector& x) const {
    if (x.size() != input_dim()) throw UsageError("qnetwork: input dimension mismatch");
    Vector h = x;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
      h = ((weights_[l] * h) + biases_[l]).cwiseMax(Scalar(0));
    }
    return weights_.back() * h + biases_.back();
  }

  Matrix forward_batch(const Matrix& x) const {
    if (x.rows() != input_dim()) throw UsageError("qnetwork: input dimension mismatch");
    Matrix h = x;
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
      h = ((weights_[l] * h).colwise() + biases_[l]).cwiseMax(Scalar(0));
    }
    return (weights_.back() * h).colwise() + biases_.back();
  }

  struct Gradients {
    std::vector<Matrix> weights;
    std::vector<Vector> biases;
  };

  /// Mean over the batch of (Q(x_i, a_i) - y_i)^2 and, if `grads` is given,
  /// its gradient with respect to every parameter.
  Scalar regression_loss(const Matrix& x, const std::vector<int>& actions, const Vector& targets,
                         Gradients* grads) const {
    const Eigen::Index batch = x.cols();
    std::vector<Matrix> acts;  // post-activation per layer, acts[0] = input
    acts.reserve(weights_.size());
    acts.push_back(x);
    for (std::size_t l = 0; l + 1 < weights_.size(); ++l) {
      acts.push_back(((weights_[l] * acts.back()).colwise() + biases_[l]).cwiseMax(Scalar(0)));
    }
    const Matrix q = (weights_.back() * acts.back()).colwise() + biases_.back();

    Matrix dq = Matrix::Zero(q.rows(), batch);
    Scalar loss = 0;
    for (Eigen::Index i = 0; i < batch; ++i) {
      const Scalar err = q(actions[static_cast<std::size_t>(i)], i) - targets[i];
      loss += err * err;
      dq(actions[static_cast<std::size_t>(i)], i) = Scalar(2) * err / static_cast<Scalar>(batch);
    }
    loss /= static_cast<Scalar>(batch);
    if (!grads) return loss;

    grads->weights.resize(weights_.size());
    grads->biases.resize(weights_.size());
    Matrix delta = std::move(dq);
    for (std::size_t l = weights_.size(); l-- > 0;) {
      grads->weights[l].noalias() = delta * acts[l].transpose();
      grads->biases[l] = delta.rowwise().sum();
      if (l == 0) break;
      Matrix back = weights_[l].transpose() * delta;
      delta = back.cwiseProduct((acts[l].array() > Scalar(0)).matrix().template cast<Scalar>());
    }
    return loss;
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) n += weights_[l].size() + biases_[l].size();
    return n;
  }

  /// Flattened parameters: per layer, weights (column-major) then biases.
  Vector parameters() const {
    Vector p(static_cast<Eigen::Index>(parameter_count()));
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      p.segment(k, weights_[l].size()) = weights_[l].reshaped();
      k += weights_[l].size();
      p.segment(k, biases_[l].size()) = biases_[l];
      k += biases_[l].size();
    }
    return p;
  }

  void set_parameters(const Vector& p) {
    if (p.size() != static_cast<Eigen::Index>(parameter_count()))
      throw UsageError("qnetwork: parameter vector size mismatch");
    Eigen::Index k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      weights_[l].reshaped() = p.segment(k, weights_[l].size());
      k += weights_[l].size();
      biases_[l] = p.segment(k, biases_[l].size());
      k += biases_[l].size();
    }
  }

  bool all_finite() const {
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      if (!weights_[l].allFinite() || !biases_[l].allFinite()) return false;
    }
    return true;
  }

  /// Text tensor file:
  ///   qnetwork 1
  ///   layers <L>
  ///   dense <rows> <cols>        (per layer, followed by)
  ///   <rows*cols weights, row-major, whitespace separated>
  ///   <rows biases>
  void write(std::ostream& out) const {
    out.precision(std::numeric_limits<Scalar>::max_digits10);
    out << "qnetwork 1\nlayers " << weights_.size() << '\n';
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      const auto& w = weights_[l];
      out << "dense " << w.rows() << ' ' << w.cols() << '\n';
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.cols(); ++j) out << (j ? " " : "") << w(i, j);
        out << '\n';
      }
      for (Eigen::Index i = 0; i < biases_[l].size(); ++i) out << (i ? " " : "") << biases_[l][i];
      out << '\n';
    }
  }

  static QNetwork read(std::istream& in) {
    std::string tag;
    int version = 0;
    std::size_t layers = 0;
    if (!(in >> tag >> version) || tag != "qnetwork" || version != 1)
      throw ConfigError("qnetwork: bad header");
    if (!(in >> tag >> layers) || tag != "layers" || layers == 0)
      throw ConfigError("qnetwork: bad layer count");
    QNetwork net;
    for (std::size_t l = 0; l < layers; ++l) {
      Eigen::Index rows = 0, cols = 0;
      if (!(in >> tag >> rows >> cols) || tag != "dense" || rows < 1 || cols < 1)
        throw ConfigError("qnetwork: bad layer header");
      if (l > 0 && cols != net.weights_.back().rows())
        throw ConfigError("qnetwork: layer shapes do not chain");
      Matrix w(rows, cols);
      Vector b(rows);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j)
          if (!(in >> w(i, j))) throw ConfigError("qnetwork: truncated weights");
      for (Eigen::Index i = 0; i < rows; ++i)
        if (!(in >> b[i])) throw ConfigError("qnetwork: truncated biases");
      net.weights_.push_back(std::move(w));
      net.biases_.push_back(std::move(b));
    }
    return net;
  }

private:
  std::vector<Matrix> weights_;
  std::vector<Vector> biases_;
};

/// Adaptive-moment optimizer state for one network.
template <typename Scalar>
class Adam {
public:
  using Net = QNetwork<Scalar>;

  Adam() = default;
  Adam(const Net& net, Scalar learning_rate, Scalar beta1 = Scalar(0.9),
       Scalar beta2 = Scalar(0.999), Scalar epsilon = Scalar(1e-8))
      : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      mw_.push_back(Net::Matrix::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      vw_.push_back(mw_.back());
      mb_.push_back(Net::Vector::Zero(net.biases()[l].size()));
      vb_.push_back(mb_.back());
    }
  }

  Scalar learning_rate() const { return lr_; }
  void set_learning_rate(Scalar lr) { lr_ = lr; }
  std::int64_t steps() const { return t_; }

  void step(Net& net, const typename Net::Gradients& g) {
    ++t_;
    const Scalar c1 = Scalar(1) - std::pow(beta1_, static_cast<Scalar>(t_));
    const Scalar c2 = Scalar(1) - std::pow(beta2_, static_cast<Scalar>(t_));
    for (std::size_t l = 0; l < net.layer_count(); ++l) {
      update(net.weights()[l], g.weights[l], mw_[l], vw_[l], c1, c2);
      update(net.biases()[l], g.biases[l], mb_[l], vb_[l], c1, c2);
    }
  }

private:
  template <typename Param, typename Grad, typename Moment>
  void update(Param& p, const Grad& g, Moment& m, Moment& v, Scalar c1, Scalar c2) {
    m = beta1_ * m + (Scalar(1) - beta1_) * g;
    v = beta2_ * v + (Scalar(1) - beta2_) * g.cwiseAbs2();
    p.array() -= lr_ * (m.array() / c1) / ((v.array() / c2).sqrt() + eps_);
  }

  Scalar lr_ = Scalar(1e-3);
  Scalar beta1_ = Scalar(0.9);
  Scalar beta2_ = Scalar(0.999);
  Scalar eps_ = Scalar(1e-8);
  std::int64_t t_ = 0;
  std::vector<typename Net::Matrix> mw_, vw_;
  std::vector<typename Net::Vector> mb_, vb_;
};

/// target <- tau * online + (1 - tau) * target, parameter-wise.
template <typename Scalar>
void soft_update(QNetwork<Scalar>& target, const QNetwork<Scalar>& online, Scalar tau) {
  if (!target.same_shape(online)) throw UsageError("soft_update: architecture mismatch");
  for (std::size_t l = 0; l < online.layer_count(); ++l) {
    if (tau == Scalar(1)) {
      target.weights()[l] = online.weights()[l];
      target.biases()[l] = online.biases()[l];
    } else {
      target.weights()[l] = tau * online.weights()[l] + (Scalar(1) - tau) * target.weights()[l];
      target.biases()[l] = tau * online.biases()[l] + (Scalar(1) - tau) * target.biases()[l];
    }
  }
}

/// Column-wise minibatch of transitions; rewards are whatever the learner
/// consumes (ground or shaped total).
template <typename Scalar>
struct Batch {
  typename QNetwork<Scalar>::Matrix states;
  typename QNetwork<Scalar>::Matrix next_states;
  std::vector<int> actions;
  typename QNetwork<Scalar>::Vector rewards;
  std::vector<char> terminal;

  Eigen::Index size() const { return states.cols(); }
};

/// Bootstrapped targets r + gamma * max_a' Q_target(s', a'), or r when terminal.
template <typename Scalar>
typename QNetwork<Scalar>::Vector td_targets(const QNetwork<Scalar>& target_net,
                                             const Batch<Scalar>& batch, Scalar gamma) {
  const auto next_q = target_net.forward_batch(batch.next_states);
  typename QNetwork<Scalar>::Vector y(batch.size());
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    y[i] = batch.rewards[i];
    if (!batch.terminal[static_cast<std::size_t>(i)]) y[i] += gamma * next_q.col(i).maxCoeff();
  }
  return y;
}

class TrainingDivergence : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// One optimizer step on the TD regression loss. Returns the loss before the
/// step; a non-finite loss throws TrainingDivergence and leaves `net` untouched.
template <typename Scalar>
Scalar train_batch(QNetwork<Scalar>& net, const QNetwork<Scalar>& target_net, Adam<Scalar>& opt,
                   const Batch<Scalar>& batch, Scalar gamma) {
  if (batch.size() == 0) throw UsageError("train_batch: empty batch");
  const auto y = td_targets(target_net, batch, gamma);
  typename QNetwork<Scalar>::Gradients grads;
  const Scalar loss = net.regression_loss(batch.states, batch.actions, y, &grads);
  if (!std::isfinite(static_cast<double>(loss))) {
    throw TrainingDivergence("train_batch: non-finite loss");
  }
  opt.step(net, grads);
  return loss;
}

/// Greedy index with lowest-index tie break.
template <typename Derived>
int argmax(const Eigen::MatrixBase<Derived>& q) {
  int best = 0;
  for (int a = 1; a < q.size(); ++a) {
    if (q[a] > q[best]) best = a;
  }
  return best;
}

/// Epsilon-greedy over forward(net, s).
template <typename Scalar>
int select_action(const QNetwork<Scalar>& net, const typename QNetwork<Scalar>::Vector& s,
                  double epsilon, Rng& rng) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw UsageError("select_action: epsilon outside [0, 1]");
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) < epsilon) {
    return std::uniform_int_distribution<int>(0, net.output_dim() - 1)(rng);
  }
  return argmax(net.forward(s));
}

}  // namespace asrl
