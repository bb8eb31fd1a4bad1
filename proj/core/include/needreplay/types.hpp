#ifndef NEEDREPLAY_TYPES_HPP
#define NEEDREPLAY_TYPES_HPP

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace needreplay {

using StateId = std::int32_t;
using ActionId = std::int32_t;

/// Every stochastic component takes this generator by reference; a run is
/// reproducible from its seed alone.
using Rng = std::mt19937_64;

/// One stored experience. `State` is a tabular id or a raw observation vector.
/// A terminal record never bootstraps from `next_state`.
template <typename State>
struct BasicTransition {
  State state{};
  ActionId action = 0;
  double reward = 0.0;
  State next_state{};
  bool terminal = false;
  double priority = 0.0;
};

using Transition = BasicTransition<StateId>;
using VectorTransition = BasicTransition<Eigen::VectorXd>;

}  // namespace needreplay

#endif  // NEEDREPLAY_TYPES_HPP
