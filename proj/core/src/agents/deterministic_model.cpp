#include "needreplay/agents/deterministic_model.hpp"

#include "needreplay/errors.hpp"

namespace needreplay {

void DeterministicModel::record(StateId s, ActionId a, double reward, StateId next, bool terminal) {
  const Key key{s, a};
  auto it = forward_.find(key);
  if (it != forward_.end() && it->second.next_state != next) {
    auto& old = reverse_[it->second.next_state];
    old.erase(key);
    if (old.empty()) reverse_.erase(it->second.next_state);
  }
  forward_[key] = ModelOutcome{reward, next, terminal};
  reverse_[next].insert(key);
}

std::optional<ModelOutcome> DeterministicModel::lookup(StateId s, ActionId a) const {
  auto it = forward_.find({s, a});
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

const ModelOutcome& DeterministicModel::at(StateId s, ActionId a) const {
  auto it = forward_.find({s, a});
  if (it == forward_.end()) throw RangeError("model has no entry for this (state, action)");
  return it->second;
}

std::vector<Predecessor> DeterministicModel::predecessors(StateId next) const {
  std::vector<Predecessor> out;
  auto it = reverse_.find(next);
  if (it == reverse_.end()) return out;
  out.reserve(it->second.size());
  for (const Key& key : it->second) out.push_back({key.first, key.second, forward_.at(key).reward});
  return out;
}

bool DeterministicModel::consistent() const {
  std::size_t reverse_count = 0;
  for (const auto& [next, keys] : reverse_) {
    for (const Key& key : keys) {
      auto it = forward_.find(key);
      if (it == forward_.end() || it->second.next_state != next) return false;
      ++reverse_count;
    }
  }
  return reverse_count == forward_.size();
}

}  // namespace needreplay
