#ifndef NEEDREPLAY_HARNESS_STATS_HPP
#define NEEDREPLAY_HARNESS_STATS_HPP

#include <cstddef>
#include <span>

namespace needreplay {

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  /// Sample standard deviation over sqrt(count); 0 for a single value.
  double stderr_mean = 0.0;
};

/// Throws ContractViolation on an empty span.
Summary summarize(std::span<const double> values);

double median(std::span<const double> values);

}  // namespace needreplay

#endif  // NEEDREPLAY_HARNESS_STATS_HPP
