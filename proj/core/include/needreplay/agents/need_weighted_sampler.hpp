#ifndef NEEDREPLAY_AGENTS_NEED_WEIGHTED_SAMPLER_HPP
#define NEEDREPLAY_AGENTS_NEED_WEIGHTED_SAMPLER_HPP

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "needreplay/replay/proportional_sampler.hpp"
#include "needreplay/types.hpp"

namespace needreplay {

/// Literal full-buffer sweep of the need-weighted distribution
///   P(j) = (p_j * need(s_j))^alpha / sum_i (p_i * need(s_i))^alpha
/// with p_j floored at `min_priority`. `need_row` holds need(current, s) for
/// every state s. Throws NoMassError when every product is zero.
std::vector<double> need_weighted_probabilities(std::span<const double> priorities,
                                                std::span<const StateId> item_states,
                                                const Eigen::VectorXd& need_row, double alpha,
                                                double min_priority = 0.0);

/// Samples the need-weighted distribution without sweeping the buffer.
///
/// Since (p_j * need_j)^alpha = p_j^alpha * need_j^alpha and the need depends
/// only on the item's start state, items are grouped into one sum-tree per
/// state: a state k is drawn with weight need_k^alpha * mass_k, then an item
/// within it proportionally to p^alpha. The resulting law equals the literal
/// sweep above at O(|S| + log N) per draw.
class NeedWeightedSampler {
 public:
  NeedWeightedSampler(std::span<const StateId> item_states, int state_count, double alpha, double min_priority,
                      double initial_priority = 1.0);

  void update(std::size_t item, double priority);
  double priority(std::size_t item) const;

  /// If every need-weighted product is zero, falls back to need-free
  /// proportional sampling. Throws NoMassError when the buffer has no mass.
  std::size_t sample(const Eigen::VectorXd& need_row, Rng& rng) const;

  /// Exact probability of `item` under `need_row` (same fallback as sample()).
  double probability(std::size_t item, const Eigen::VectorXd& need_row) const;

  std::size_t size() const noexcept { return item_state_.size(); }
  double alpha() const noexcept { return alpha_; }

 private:
  std::vector<double> state_weights(const Eigen::VectorXd& need_row) const;

  double alpha_;
  std::vector<StateId> item_state_;
  std::vector<std::size_t> item_slot_;
  std::vector<std::vector<std::size_t>> slot_item_;
  std::vector<ProportionalSampler> trees_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_NEED_WEIGHTED_SAMPLER_HPP
