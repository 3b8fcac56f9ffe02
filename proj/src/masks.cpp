#include "kpunct/masks.hpp"

#include <bit>
#include <limits>
#include <string>

#include "kpunct/parallel.hpp"
#include "kpunct/rng.hpp"

namespace kpunct {

void MaskConfig::validate() const {
  if (!(eps_s > 0.0) || eps_s > 1.0)
    throw ConfigError("eps_s must lie in (0, 1], got " + std::to_string(eps_s));
  if (!(eps_b > 0.0) || eps_b > 1.0)
    throw ConfigError("eps_b must lie in (0, 1], got " + std::to_string(eps_b));
  if (b_diag != 0 && b_diag != 1)
    throw ConfigError("b must be 0 or 1, got " + std::to_string(b_diag));
}

std::size_t DataMask::count() const {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += std::popcount(w);
  return c;
}

double DataMask::density() const {
  const std::size_t total = rows_ * cols_;
  return total == 0 ? 0.0 : static_cast<double>(count()) / total;
}

DataMask gen_data_mask(std::size_t p, std::size_t n, const MaskConfig& cfg) {
  cfg.validate();
  if (p == 0 || n == 0) throw DimensionError("data mask needs p >= 1 and n >= 1");
  DataMask m(p, n);
  const CounterRng rng(cfg.seed, CounterRng::kDataMask);
  auto& words = m.words();
  // One word per 64 consecutive row-major bits; whole words are independent,
  // so the fill is chunked freely.
  parallel_for(words.size(), [&](std::size_t lo, std::size_t hi) {
    const std::size_t total = p * n;
    for (std::size_t w = lo; w < hi; ++w) {
      std::uint64_t bitsv = 0;
      const std::size_t base = w << 6;
      const std::size_t top = std::min<std::size_t>(64, total - base);
      for (std::size_t k = 0; k < top; ++k)
        if (rng.bernoulli(base + k, cfg.eps_s)) bitsv |= 1ull << k;
      words[w] = bitsv;
    }
  });
  return m;
}

KernelMask gen_kernel_mask(std::size_t n, const MaskConfig& cfg) {
  cfg.validate();
  if (n == 0) throw DimensionError("kernel mask needs n >= 1");
  if (n > std::numeric_limits<std::uint32_t>::max())
    throw DimensionError("kernel mask index type caps n at 2^32-1");
  KernelMask m;
  m.n = n;
  m.diag = cfg.b_diag == 1;
  const CounterRng rng(cfg.seed, CounterRng::kKernelMask);
  // Counter = rank of (i, j) in the row-major strict upper triangle, so the
  // pattern is independent of how the loop is scheduled.
  m.pairs.reserve(static_cast<std::size_t>(
      cfg.eps_b * 0.5 * static_cast<double>(n) * static_cast<double>(n - 1) * 1.05 + 64));
  std::uint64_t q = 0;
  for (std::uint32_t i = 0; i + 1 < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j, ++q)
      if (rng.bernoulli(q, cfg.eps_b)) m.pairs.emplace_back(i, j);
  return m;
}

}  // namespace kpunct
