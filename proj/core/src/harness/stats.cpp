#include "needreplay/harness/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "needreplay/errors.hpp"

namespace needreplay {

double median(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("median of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return 0.5 * (sorted[mid - 1] + sorted[mid]);
}

Summary summarize(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("summary of an empty sample");
  Summary s;
  s.count = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.count);
  s.median = median(values);
  if (s.count > 1) {
    double squares = 0.0;
    for (double v : values) squares += (v - s.mean) * (v - s.mean);
    const double sd = std::sqrt(squares / static_cast<double>(s.count - 1));
    s.stderr_mean = sd / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

}  // namespace needreplay
