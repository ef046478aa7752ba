#pragma once

#include <cstddef>
#include <random>

#include "asrl/qnetwork.hpp"

namespace asrl {

/// Fixed-capacity ring of transitions stored column-wise. Once full, each push
/// overwrites the oldest entry.
template <typename Scalar>
class ReplayBuffer {
public:
  using Matrix = typename QNetwork<Scalar>::Matrix;
  using Vector = typename QNetwork<Scalar>::Vector;

  ReplayBuffer(std::size_t capacity, int state_dim)
      : states_(state_dim, static_cast<Eigen::Index>(capacity)),
        next_states_(state_dim, static_cast<Eigen::Index>(capacity)),
        actions_(capacity),
        rewards_(static_cast<Eigen::Index>(capacity)),
        terminal_(capacity) {
    if (capacity == 0) throw UsageError("replay buffer: capacity must be positive");
  }

  std::size_t capacity() const { return actions_.size(); }
  std::size_t size() const { return size_; }
  std::size_t cursor() const { return cursor_; }

  template <typename S, typename N>
  void push(const Eigen::MatrixBase<S>& state, int action, Scalar reward,
            const Eigen::MatrixBase<N>& next_state, bool terminal) {
    const auto c = static_cast<Eigen::Index>(cursor_);
    states_.col(c) = state.template cast<Scalar>();
    next_states_.col(c) = next_state.template cast<Scalar>();
    actions_[cursor_] = action;
    rewards_[c] = reward;
    terminal_[cursor_] = terminal;
    cursor_ = (cursor_ + 1) % capacity();
    if (size_ < capacity()) ++size_;
  }

  /// Uniform sampling with replacement over the stored window.
  Batch<Scalar> sample(std::size_t batch_size, Rng& rng) const {
    if (batch_size == 0 || size_ < batch_size) {
      throw UsageError("replay buffer: cannot sample " + std::to_string(batch_size) + " from " +
                       std::to_string(size_) + " entries");
    }
    std::uniform_int_distribution<std::size_t> pick(0, size_ - 1);
    Batch<Scalar> b;
    const auto n = static_cast<Eigen::Index>(batch_size);
    b.states.resize(states_.rows(), n);
    b.next_states.resize(states_.rows(), n);
    b.rewards.resize(n);
    b.actions.resize(batch_size);
    b.terminal.resize(batch_size);
    for (std::size_t i = 0; i < batch_size; ++i) {
      const std::size_t k = pick(rng);
      const auto col = static_cast<Eigen::Index>(i);
      const auto src = static_cast<Eigen::Index>(k);
      b.states.col(col) = states_.col(src);
      b.next_states.col(col) = next_states_.col(src);
      b.actions[i] = actions_[k];
      b.rewards[col] = rewards_[src];
      b.terminal[i] = terminal_[k];
    }
    return b;
  }

  Scalar reward_at_slot(std::size_t slot) const { return rewards_[static_cast<Eigen::Index>(slot)]; }

private:
  Matrix states_;
  Matrix next_states_;
  std::vector<int> actions_;
  Vector rewards_;
  std::vector<char> terminal_;
  std::size_t cursor_ = 0;
  std::size_t size_ = 0;
};

}  // namespace asrl
