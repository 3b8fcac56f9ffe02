#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "kpunct/errors.hpp"

namespace kpunct {

// Bernoulli puncturing setup: an i.i.d. data mask S (p x n) applied to the
// data matrix entrywise, and a symmetric kernel mask B (n x n) applied to the
// Gram matrix.  B is i.i.d. above the diagonal and mirrored; its diagonal is
// the deterministic constant b.
struct MaskConfig {
  double eps_s = 1.0;      // P(S_ij = 1), must lie in (0, 1]
  double eps_b = 1.0;      // P(B_ij = 1) for i < j, must lie in (0, 1]
  int b_diag = 1;          // B_ii, either 0 or 1
  std::uint64_t seed = 0;

  void validate() const;
};

// Dense bit matrix, row-major, packed into 64-bit words.
class DataMask {
 public:
  DataMask() = default;
  DataMask(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), words_((rows * cols + 63) / 64, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool test(std::size_t i, std::size_t j) const {
    const std::size_t k = i * cols_ + j;
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }

  void set(std::size_t i, std::size_t j, bool v) {
    const std::size_t k = i * cols_ + j;
    const std::uint64_t bit = 1ull << (k & 63);
    if (v)
      words_[k >> 6] |= bit;
    else
      words_[k >> 6] &= ~bit;
  }

  std::size_t count() const;
  double density() const;

  std::vector<std::uint64_t>& words() { return words_; }
  const std::vector<std::uint64_t>& words() const { return words_; }

  bool operator==(const DataMask&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint64_t> words_;
};

// Symmetric kernel mask.  Only the strict upper triangle is stored, as a
// sorted list of (i, j) pairs with i < j; the mirror image is implied.  The
// diagonal is all-ones when diag is true and absent otherwise.
struct KernelMask {
  std::size_t n = 0;
  bool diag = true;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;

  std::size_t stored_offdiag() const { return pairs.size(); }
  bool operator==(const KernelMask&) const = default;
};

DataMask gen_data_mask(std::size_t p, std::size_t n, const MaskConfig& cfg);
KernelMask gen_kernel_mask(std::size_t n, const MaskConfig& cfg);

}  // namespace kpunct
