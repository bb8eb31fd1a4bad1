#ifndef NEEDREPLAY_AGENTS_DETERMINISTIC_MODEL_HPP
#define NEEDREPLAY_AGENTS_DETERMINISTIC_MODEL_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "needreplay/types.hpp"

namespace needreplay {

struct ModelOutcome {
  double reward = 0.0;
  StateId next_state = 0;
  bool terminal = false;
};

struct Predecessor {
  StateId state = 0;
  ActionId action = 0;
  double reward = 0.0;
};

/// Last-observed outcome per (state, action) plus a reverse index from each
/// next state to the pairs predicted to lead there.
class DeterministicModel {
 public:
  void record(StateId s, ActionId a, double reward, StateId next, bool terminal);

  std::optional<ModelOutcome> lookup(StateId s, ActionId a) const;
  /// Throws RangeError for an unseen pair.
  const ModelOutcome& at(StateId s, ActionId a) const;

  /// Pairs predicted to lead to `next`, in (state, action) order.
  std::vector<Predecessor> predecessors(StateId next) const;

  std::size_t size() const noexcept { return forward_.size(); }

  /// True when the reverse index mirrors the forward map exactly.
  bool consistent() const;

 private:
  using Key = std::pair<StateId, ActionId>;
  std::map<Key, ModelOutcome> forward_;
  std::map<StateId, std::set<Key>> reverse_;
};

}  // namespace needreplay

#endif  // NEEDREPLAY_AGENTS_DETERMINISTIC_MODEL_HPP
