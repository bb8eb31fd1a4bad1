#ifndef NEEDREPLAY_REPLAY_MAX_PRIORITY_QUEUE_HPP
#define NEEDREPLAY_REPLAY_MAX_PRIORITY_QUEUE_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "needreplay/types.hpp"

namespace needreplay {

struct QueueEntry {
  StateId state = 0;
  ActionId action = 0;
  double priority = 0.0;

  friend bool operator==(const QueueEntry&, const QueueEntry&) = default;
};

/// Priority queue keyed by (state, action) used by prioritized sweeping.
///
/// A key is stored at most once; re-inserting keeps the larger priority.
/// Removal picks the entry maximizing a caller-supplied score, which lets the
/// plain planner (score = priority) and the need-weighted planner
/// (score = priority * need) share one structure. Selection is a linear scan
/// in key order, so ties resolve to the smallest state id, then action id.
class MaxPriorityQueue {
 public:
  using Scorer = std::function<double(const QueueEntry&)>;

  /// Throws ContractViolation for a negative or non-finite priority.
  void insert(StateId state, ActionId action, double priority);

  /// Removes and returns the entry of maximal priority.
  QueueEntry pop_best();

  /// Removes and returns the entry maximizing `scorer`. Throws EmptyQueueError.
  QueueEntry pop_best(const Scorer& scorer);

  std::optional<double> priority_of(StateId state, ActionId action) const;

  std::vector<QueueEntry> entries() const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  void clear() noexcept { entries_.clear(); }

 private:
  std::map<std::pair<StateId, ActionId>, double> entries_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_REPLAY_MAX_PRIORITY_QUEUE_HPP
