#include "needreplay/replay/proportional_sampler.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <string>

#include "needreplay/errors.hpp"

namespace needreplay {

ProportionalSampler::ProportionalSampler(std::size_t capacity, double alpha, double min_priority)
    : capacity_(capacity), alpha_(alpha), min_priority_(min_priority) {
  if (capacity == 0) throw ContractViolation("sampler capacity must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ContractViolation("sampler exponent must lie in [0, 1]");
  if (!(min_priority >= 0.0)) throw ContractViolation("minimum priority must be >= 0");
  leaf_base_ = std::bit_ceil(capacity);
  priorities_.assign(capacity, 0.0);
  nodes_.assign(2 * leaf_base_, 0.0);
}

double ProportionalSampler::mass_for(double priority) const {
  return std::pow(std::max(priority, min_priority_), alpha_);
}

void ProportionalSampler::write_leaf(std::size_t index, double priority) {
  priorities_[index] = priority;
  std::size_t node = leaf_base_ + index;
  nodes_[node] = mass_for(priority);
  // Parents are recomputed from their children, not patched with deltas.
  for (node /= 2; node >= 1; node /= 2) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
}

std::size_t ProportionalSampler::push() { return push(max_seen_priority_); }

std::size_t ProportionalSampler::push(double priority) {
  if (!(priority >= 0.0) || !std::isfinite(priority)) {
    throw ContractViolation("priority must be finite and >= 0");
  }
  const std::size_t index = next_;
  next_ = (next_ + 1) % capacity_;
  size_ = std::min(size_ + 1, capacity_);
  max_seen_priority_ = std::max(max_seen_priority_, priority);
  write_leaf(index, priority);
  return index;
}

void ProportionalSampler::update(std::size_t index, double priority) {
  if (index >= size_) {
    throw RangeError("sampler index " + std::to_string(index) + " out of range (size " +
                     std::to_string(size_) + ")");
  }
  if (!(priority >= 0.0) || !std::isfinite(priority)) {
    throw ContractViolation("priority must be finite and >= 0, got " + std::to_string(priority));
  }
  max_seen_priority_ = std::max(max_seen_priority_, priority);
  write_leaf(index, priority);
}

std::size_t ProportionalSampler::sample(Rng& rng) const {
  const double mass = total();
  if (!(mass > 0.0)) throw NoMassError();
  double u = std::uniform_real_distribution<double>(0.0, mass)(rng);
  std::size_t node = 1;
  while (node < leaf_base_) {
    const std::size_t left = 2 * node;
    const double left_mass = nodes_[left];
    // Rounding can leave u marginally past the right subtree; never descend into zero mass.
    if (u < left_mass || nodes_[left + 1] <= 0.0) {
      node = left;
    } else {
      u -= left_mass;
      node = left + 1;
    }
  }
  return node - leaf_base_;
}

double ProportionalSampler::probability(std::size_t index) const {
  return leaf_mass(index) / total();
}

double ProportionalSampler::priority(std::size_t index) const {
  if (index >= size_) throw RangeError("sampler index out of range");
  return priorities_[index];
}

double ProportionalSampler::leaf_mass(std::size_t index) const {
  if (index >= size_) throw RangeError("sampler index out of range");
  return nodes_[leaf_base_ + index];
}

double ProportionalSampler::min_nonzero_leaf_mass() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size_; ++i) {
    const double m = nodes_[leaf_base_ + i];
    if (m > 0.0 && (best == 0.0 || m < best)) best = m;
  }
  return best;
}

double ProportionalSampler::max_consistency_error() const {
  double worst = 0.0;
  for (std::size_t node = 1; node < leaf_base_; ++node) {
    worst = std::max(worst, std::abs(nodes_[node] - (nodes_[2 * node] + nodes_[2 * node + 1])));
  }
  return worst;
}

}  // namespace needreplay
