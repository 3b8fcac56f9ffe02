#include "kpunct/histogram.hpp"

#include <algorithm>
#include <cmath>

namespace kpunct {

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw DimensionError("histogram of an empty sample");
  for (double v : values)
    if (!std::isfinite(v)) throw DataError("non-finite histogram value");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front(), hi = sorted.back();
  const std::size_t n = sorted.size();

  if (bins == 0) {
    // Freedman-Diaconis, falling back to sqrt(n) for degenerate spreads.
    const double q1 = sorted[(n - 1) / 4];
    const double q3 = sorted[(3 * (n - 1)) / 4];
    const double w = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(n));
    if (w > 0.0 && hi > lo)
      bins = static_cast<std::size_t>(std::ceil((hi - lo) / w));
    else
      bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    bins = std::clamp<std::size_t>(bins, 1, 10000);
  }

  Histogram h;
  h.total = n;
  h.counts.assign(bins, 0.0);
  h.edges.resize(bins + 1);
  const double span = hi > lo ? hi - lo : 1.0;
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(bins);
  for (double v : sorted) {
    std::size_t b = static_cast<std::size_t>((v - lo) / span * static_cast<double>(bins));
    if (b >= bins) b = bins - 1;  // right edge closes the last bin
    h.counts[b] += 1.0;
  }
  return h;
}

}  // namespace kpunct
