#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "kpunct/masks.hpp"
#include "kpunct/rng.hpp"
#include "oracles.hpp"

using namespace kpunct;

TEST_CASE("counter rng is a pure function of (seed, stream, counter)") {
  CounterRng a(42, CounterRng::kDataMask);
  CounterRng b(42, CounterRng::kDataMask);
  CounterRng c(43, CounterRng::kDataMask);
  CounterRng d(42, CounterRng::kKernelMask);
  for (std::uint64_t k = 0; k < 64; ++k) {
    CHECK(a.bits(k) == b.bits(k));
    CHECK(a.bits(k) != c.bits(k));  // different seed
    CHECK(a.bits(k) != d.bits(k));  // different stream
  }
}

TEST_CASE("counter rng uniforms live in [0,1) with the right mean") {
  CounterRng rng(7, CounterRng::kNoise);
  double sum = 0.0;
  const std::uint64_t n = 200000;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double u = rng.uniform(k);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // mean of U[0,1) has sd 1/sqrt(12 n); allow 4 sigma
  CHECK(std::abs(sum / n - 0.5) < 4.0 / std::sqrt(12.0 * n));
}

TEST_CASE("counter rng normals have unit variance and zero mean") {
  CounterRng rng(11, CounterRng::kNoise);
  double s1 = 0.0, s2 = 0.0;
  const std::uint64_t n = 200000;
  for (std::uint64_t k = 0; k < n; ++k) {
    auto [x, y] = rng.normal2(k);
    s1 += x + y;
    s2 += x * x + y * y;
  }
  const double m = s1 / (2.0 * n);
  const double v = s2 / (2.0 * n) - m * m;
  CHECK(std::abs(m) < 4.0 / std::sqrt(2.0 * n));
  CHECK(std::abs(v - 1.0) < 4.0 * std::sqrt(2.0 / (2.0 * n)));
}

TEST_CASE("eps_s = 1 fills the data mask completely") {
  MaskConfig cfg;
  cfg.eps_s = 1.0;
  cfg.seed = 5;
  const DataMask m = gen_data_mask(4, 4, cfg);
  CHECK(m.count() == 16);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) CHECK(m.test(i, j));
}

TEST_CASE("data mask density concentrates at eps_s") {
  MaskConfig cfg;
  cfg.eps_s = 0.2;
  cfg.seed = 7;
  const DataMask m = gen_data_mask(1000, 1000, cfg);
  // 3 sigma of a Binomial(1e6, 0.2) mean is ~1.2e-3, well inside 0.01.
  const double sigma = oracles::binom_sigma(1e6, 0.2) / 1e6;
  CHECK(std::abs(m.density() - 0.2) <= 3.0 * sigma);
  CHECK(std::abs(m.density() - 0.2) <= 0.01);
}

TEST_CASE("data mask density concentration holds across seeds") {
  MaskConfig cfg;
  cfg.eps_s = 0.35;
  const std::size_t p = 400, n = 500;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    cfg.seed = seed;
    const DataMask m = gen_data_mask(p, n, cfg);
    const double bound =
        4.0 * std::sqrt(cfg.eps_s * (1.0 - cfg.eps_s) / (p * n));
    CHECK(std::abs(m.density() - cfg.eps_s) <= bound);
  }
}

TEST_CASE("masks are reproducible from their seed") {
  MaskConfig cfg;
  cfg.eps_s = 0.3;
  cfg.eps_b = 0.5;
  cfg.seed = 123;
  CHECK(gen_data_mask(37, 53, cfg) == gen_data_mask(37, 53, cfg));
  CHECK(gen_kernel_mask(64, cfg) == gen_kernel_mask(64, cfg));
  cfg.seed = 124;
  CHECK(!(gen_data_mask(37, 53, cfg) == gen_data_mask(37, 53, [] {
            MaskConfig c;
            c.eps_s = 0.3;
            c.seed = 123;
            return c;
          }())));
}

TEST_CASE("kernel mask with eps_b = 1 and b = 0 stores the full triangle") {
  MaskConfig cfg;
  cfg.eps_b = 1.0;
  cfg.b_diag = 0;
  cfg.seed = 1;
  const KernelMask m = gen_kernel_mask(3, cfg);
  CHECK(!m.diag);
  REQUIRE(m.pairs.size() == 3);
  CHECK(m.pairs[0] == std::pair<std::uint32_t, std::uint32_t>{0, 1});
  CHECK(m.pairs[1] == std::pair<std::uint32_t, std::uint32_t>{0, 2});
  CHECK(m.pairs[2] == std::pair<std::uint32_t, std::uint32_t>{1, 2});
}

TEST_CASE("kernel mask stored count concentrates at eps_b n(n-1)/2") {
  MaskConfig cfg;
  cfg.eps_b = 0.04;
  cfg.seed = 11;
  const std::size_t n = 2000;
  const KernelMask m = gen_kernel_mask(n, cfg);
  const double trials = 0.5 * n * (n - 1.0);
  const double sigma = oracles::binom_sigma(trials, cfg.eps_b);
  CHECK(std::abs(static_cast<double>(m.stored_offdiag()) -
                 cfg.eps_b * trials) <= 3.0 * sigma);
}

TEST_CASE("kernel mask pairs are sorted, strict upper triangle, unique") {
  MaskConfig cfg;
  cfg.eps_b = 0.3;
  cfg.seed = 99;
  const KernelMask m = gen_kernel_mask(128, cfg);
  std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
  auto prev = std::pair<std::uint32_t, std::uint32_t>{0, 0};
  bool first = true;
  for (const auto& ij : m.pairs) {
    CHECK(ij.first < ij.second);
    CHECK(ij.second < 128);
    if (!first) CHECK(prev < ij);
    first = false;
    prev = ij;
    CHECK(seen.insert(ij).second);
  }
}

TEST_CASE("n = 1 kernel mask has no off-diagonal storage") {
  MaskConfig cfg;
  cfg.b_diag = 1;
  CHECK(gen_kernel_mask(1, cfg).pairs.empty());
  CHECK(gen_kernel_mask(1, cfg).diag);
  cfg.b_diag = 0;
  CHECK(!gen_kernel_mask(1, cfg).diag);
}

TEST_CASE("mask config rejects probabilities outside (0, 1]") {
  MaskConfig cfg;
  cfg.eps_s = 0.0;
  CHECK_THROWS_AS(gen_data_mask(4, 4, cfg), ConfigError);
  cfg.eps_s = 1.5;
  CHECK_THROWS_AS(gen_data_mask(4, 4, cfg), ConfigError);
  cfg.eps_s = 0.5;
  cfg.eps_b = -0.1;
  CHECK_THROWS_AS(gen_kernel_mask(4, cfg), ConfigError);
  cfg.eps_b = 0.5;
  cfg.b_diag = 2;
  CHECK_THROWS_AS(gen_kernel_mask(4, cfg), ConfigError);
  cfg.b_diag = 1;
  CHECK_THROWS_AS(gen_data_mask(0, 4, cfg), DimensionError);
}
