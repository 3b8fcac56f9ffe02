#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "kpunct/masks.hpp"

namespace kpunct {

template <class T>
struct is_complex : std::false_type {};
template <class U>
struct is_complex<std::complex<U>> : std::true_type {};

// Data matrix with features in rows and samples in columns.
template <class Scalar>
using DataMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Hermitian punctured kernel
//   K = { (1/p) (X .* S)^H (X .* S) } .* B
// stored as compressed sparse rows over the strict upper triangle plus an
// optional dense diagonal (present exactly when B keeps its diagonal).  The
// sparsity pattern is the one prescribed by B: entries whose masked inner
// product happens to vanish stay stored.
template <class Scalar>
struct PuncturedKernel {
  std::size_t n = 0;
  std::vector<std::uint64_t> row_ptr;  // n + 1 offsets into cols/vals
  std::vector<std::uint32_t> cols;     // column > row, ascending per row
  std::vector<Scalar> vals;
  std::vector<double> diag;            // real by Hermitian symmetry
  bool has_diag = false;
  // Scalar multiply-adds needed for every stored entry of the full matrix;
  // both mirror images of an off-diagonal entry are counted even though the
  // assembly computes each once.
  std::uint64_t flop_count = 0;

  std::size_t stored_offdiag() const { return cols.size(); }
  // Stored entries of the full symmetric matrix: each off-diagonal pair
  // counts once per stored triangle entry, the diagonal adds n when present.
  std::uint64_t stored_entries() const {
    return cols.size() + (has_diag ? n : 0);
  }
};

// Assembles the punctured kernel by intersecting per-column supports of S
// with 64-bit word ANDs; summation over features runs in ascending order so
// results do not depend on scheduling.
template <class Scalar>
PuncturedKernel<Scalar> build_kernel(const DataMatrix<Scalar>& x,
                                     const DataMask& s, const KernelMask& b);

// Reference construction through a dense masked Gram product.  Kept simple
// on purpose; guarded so nobody calls it at production sizes by accident.
template <class Scalar>
DataMatrix<Scalar> dense_kernel_oracle(const DataMatrix<Scalar>& x,
                                       const DataMask& s, const KernelMask& b,
                                       std::size_t max_n = 2000);

// y = K v without materializing the lower triangle.
template <class Scalar>
void matvec(const PuncturedKernel<Scalar>& k, const Scalar* v, Scalar* y);

template <class Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> matvec(
    const PuncturedKernel<Scalar>& k,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& v);

// Dense image of the sparse kernel, for oracles and full-spectrum runs.
template <class Scalar>
DataMatrix<Scalar> densify(const PuncturedKernel<Scalar>& k,
                           std::size_t max_n = 2000);

}  // namespace kpunct
