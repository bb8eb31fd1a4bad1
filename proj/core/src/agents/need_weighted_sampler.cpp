#include "needreplay/agents/need_weighted_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "needreplay/errors.hpp"

namespace needreplay {

std::vector<double> need_weighted_probabilities(std::span<const double> priorities,
                                                std::span<const StateId> item_states,
                                                const Eigen::VectorXd& need_row, double alpha,
                                                double min_priority) {
  if (priorities.size() != item_states.size()) throw ShapeError("priorities and states differ in length");
  std::vector<double> out(priorities.size());
  double total = 0.0;
  for (std::size_t j = 0; j < priorities.size(); ++j) {
    const StateId s = item_states[j];
    if (s < 0 || s >= need_row.size()) throw RangeError("item state outside need row");
    const double need = std::max(0.0, need_row(s));
    out[j] = std::pow(std::max(priorities[j], min_priority) * need, alpha);
    total += out[j];
  }
  if (!(total > 0.0)) throw NoMassError();
  for (double& p : out) p /= total;
  return out;
}

NeedWeightedSampler::NeedWeightedSampler(std::span<const StateId> item_states, int state_count, double alpha,
                                         double min_priority, double initial_priority)
    : alpha_(alpha), item_state_(item_states.begin(), item_states.end()), item_slot_(item_states.size()) {
  if (state_count <= 0) throw ContractViolation("state_count must be positive");
  slot_item_.resize(static_cast<std::size_t>(state_count));
  for (std::size_t j = 0; j < item_state_.size(); ++j) {
    const StateId s = item_state_[j];
    if (s < 0 || s >= state_count) throw RangeError("item state out of range");
    item_slot_[j] = slot_item_[static_cast<std::size_t>(s)].size();
    slot_item_[static_cast<std::size_t>(s)].push_back(j);
  }
  trees_.reserve(slot_item_.size());
  for (const auto& items : slot_item_) {
    trees_.emplace_back(std::max<std::size_t>(items.size(), 1), alpha, min_priority);
    for (std::size_t k = 0; k < items.size(); ++k) trees_.back().push(initial_priority);
  }
}

void NeedWeightedSampler::update(std::size_t item, double priority) {
  if (item >= item_state_.size()) throw RangeError("need sampler item out of range");
  trees_[static_cast<std::size_t>(item_state_[item])].update(item_slot_[item], priority);
}

double NeedWeightedSampler::priority(std::size_t item) const {
  if (item >= item_state_.size()) throw RangeError("need sampler item out of range");
  return trees_[static_cast<std::size_t>(item_state_[item])].priority(item_slot_[item]);
}

std::vector<double> NeedWeightedSampler::state_weights(const Eigen::VectorXd& need_row) const {
  if (need_row.size() != static_cast<Eigen::Index>(trees_.size())) throw ShapeError("need row has wrong length");
  std::vector<double> weights(trees_.size());
  for (std::size_t k = 0; k < trees_.size(); ++k) {
    weights[k] = std::pow(std::max(0.0, need_row(static_cast<Eigen::Index>(k))), alpha_) * trees_[k].total();
  }
  if (std::accumulate(weights.begin(), weights.end(), 0.0) > 0.0) return weights;
  for (std::size_t k = 0; k < trees_.size(); ++k) weights[k] = trees_[k].total();
  return weights;
}

std::size_t NeedWeightedSampler::sample(const Eigen::VectorXd& need_row, Rng& rng) const {
  const std::vector<double> weights = state_weights(need_row);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw NoMassError();
  double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  std::size_t chosen = weights.size();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] <= 0.0) continue;
    chosen = k;
    if (u < weights[k]) break;
    u -= weights[k];
  }
  return slot_item_[chosen][trees_[chosen].sample(rng)];
}

double NeedWeightedSampler::probability(std::size_t item, const Eigen::VectorXd& need_row) const {
  if (item >= item_state_.size()) throw RangeError("need sampler item out of range");
  const std::vector<double> weights = state_weights(need_row);
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw NoMassError();
  const auto k = static_cast<std::size_t>(item_state_[item]);
  if (weights[k] == 0.0) return 0.0;
  return weights[k] / total * trees_[k].probability(item_slot_[item]);
}

}  // namespace needreplay
