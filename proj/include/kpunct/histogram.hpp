#pragma once

#include <cstddef>
#include <vector>

#include "kpunct/errors.hpp"

namespace kpunct {

// Equal-width histogram normalized as a probability density.
struct Histogram {
  std::vector<double> edges;   // bins + 1 ascending edges
  std::vector<double> counts;  // raw counts, right-closed last bin
  std::size_t total = 0;

  std::size_t bins() const { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double density(std::size_t i) const {
    return counts[i] / (static_cast<double>(total) * width(i));
  }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

// bins == 0 picks the Freedman-Diaconis count from the interquartile range.
Histogram make_histogram(const std::vector<double>& values,
                         std::size_t bins = 0);

}  // namespace kpunct
