#include "needreplay/replay/max_priority_queue.hpp"

#include <cmath>
#include <string>

#include "needreplay/errors.hpp"

namespace needreplay {

void MaxPriorityQueue::insert(StateId state, ActionId action, double priority) {
  if (!(priority >= 0.0) || !std::isfinite(priority)) {
    throw ContractViolation("queue priority must be finite and >= 0, got " + std::to_string(priority));
  }
  auto [it, inserted] = entries_.try_emplace({state, action}, priority);
  if (!inserted && priority > it->second) it->second = priority;
}

QueueEntry MaxPriorityQueue::pop_best() {
  return pop_best([](const QueueEntry& e) { return e.priority; });
}

QueueEntry MaxPriorityQueue::pop_best(const Scorer& scorer) {
  if (entries_.empty()) throw EmptyQueueError();
  auto best = entries_.begin();
  double best_score = scorer(QueueEntry{best->first.first, best->first.second, best->second});
  for (auto it = std::next(entries_.begin()); it != entries_.end(); ++it) {
    const double score = scorer(QueueEntry{it->first.first, it->first.second, it->second});
    if (score > best_score) {
      best = it;
      best_score = score;
    }
  }
  QueueEntry out{best->first.first, best->first.second, best->second};
  entries_.erase(best);
  return out;
}

std::optional<double> MaxPriorityQueue::priority_of(StateId state, ActionId action) const {
  auto it = entries_.find({state, action});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::vector<QueueEntry> MaxPriorityQueue::entries() const {
  std::vector<QueueEntry> out;
  out.reserve(entries_.size());
  for (const auto& [key, priority] : entries_) out.push_back({key.first, key.second, priority});
  return out;
}

}  // namespace needreplay
