#ifndef NEEDREPLAY_REPLAY_PROPORTIONAL_SAMPLER_HPP
#define NEEDREPLAY_REPLAY_PROPORTIONAL_SAMPLER_HPP

#include <cstddef>
#include <vector>

#include "needreplay/types.hpp"

namespace needreplay {

/// Sum-tree over up to `capacity` leaves for proportional prioritized sampling.
///
/// Priorities are kept raw; leaf mass is max(priority, min_priority)^alpha.
/// Index i is drawn with probability mass_i / total(). New entries arrive with
/// the largest priority seen so far (1 before any update). Once full, `push`
/// overwrites the oldest slot.
class ProportionalSampler {
 public:
  ProportionalSampler(std::size_t capacity, double alpha, double min_priority = 0.0);

  /// Appends an entry with priority max_seen_priority(); returns its index.
  std::size_t push();
  /// Appends an entry with an explicit priority; returns its index.
  std::size_t push(double priority);

  /// Throws RangeError when index >= size(), ContractViolation when priority < 0.
  void update(std::size_t index, double priority);

  /// Throws NoMassError when total() == 0.
  std::size_t sample(Rng& rng) const;

  double total() const noexcept { return nodes_[1]; }
  double probability(std::size_t index) const;
  double priority(std::size_t index) const;
  double leaf_mass(std::size_t index) const;

  double alpha() const noexcept { return alpha_; }
  double min_priority() const noexcept { return min_priority_; }
  double max_seen_priority() const noexcept { return max_seen_priority_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return capacity_; }

  /// Smallest nonzero leaf mass (O(N) scan); 0 when every leaf is empty.
  double min_nonzero_leaf_mass() const;

  /// Largest |node - (left + right)| over internal nodes.
  double max_consistency_error() const;

 private:
  double mass_for(double priority) const;
  void write_leaf(std::size_t index, double priority);

  std::size_t capacity_;
  std::size_t leaf_base_;
  double alpha_;
  double min_priority_;
  double max_seen_priority_ = 1.0;
  std::size_t size_ = 0;
  std::size_t next_ = 0;
  std::vector<double> priorities_;
  std::vector<double> nodes_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_REPLAY_PROPORTIONAL_SAMPLER_HPP
