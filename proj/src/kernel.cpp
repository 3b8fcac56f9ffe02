#include "kpunct/kernel.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "kpunct/parallel.hpp"

namespace kpunct {

namespace {

template <class Scalar>
Scalar conj_of(Scalar v) {
  if constexpr (is_complex<Scalar>::value)
    return std::conj(v);
  else
    return v;
}

template <class Scalar>
double abs2_of(Scalar v) {
  if constexpr (is_complex<Scalar>::value)
    return std::norm(v);
  else
    return v * v;
}

template <class Scalar>
bool finite_entry(Scalar v) {
  if constexpr (is_complex<Scalar>::value)
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  else
    return std::isfinite(v);
}

template <class Scalar>
void check_inputs(const DataMatrix<Scalar>& x, const DataMask& s,
                  const KernelMask& b) {
  const std::size_t p = static_cast<std::size_t>(x.rows());
  const std::size_t n = static_cast<std::size_t>(x.cols());
  if (p == 0 || n == 0) throw DimensionError("data matrix must be non-empty");
  if (s.rows() != p || s.cols() != n)
    throw DimensionError("data mask is " + std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()) + ", data is " +
                         std::to_string(p) + "x" + std::to_string(n));
  if (b.n != n)
    throw DimensionError("kernel mask order " + std::to_string(b.n) +
                         " does not match sample count " + std::to_string(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < p; ++i)
      if (!finite_entry(x(i, j)))
        throw DataError("non-finite data entry at (" + std::to_string(i) +
                        ", " + std::to_string(j) + ")");
}

// Column-major repack of the data mask: one word block of ceil(p/64) per
// sample, so support intersections become word ANDs.
struct ColumnBits {
  std::size_t p = 0;
  std::size_t wpc = 0;  // words per column
  std::vector<std::uint64_t> w;

  ColumnBits(const DataMask& s) : p(s.rows()), wpc((s.rows() + 63) / 64) {
    w.assign(wpc * s.cols(), 0);
    for (std::size_t j = 0; j < s.cols(); ++j) {
      std::uint64_t* col = w.data() + j * wpc;
      for (std::size_t i = 0; i < p; ++i)
        if (s.test(i, j)) col[i >> 6] |= 1ull << (i & 63);
    }
  }

  const std::uint64_t* col(std::size_t j) const { return w.data() + j * wpc; }
};

}  // namespace

template <class Scalar>
PuncturedKernel<Scalar> build_kernel(const DataMatrix<Scalar>& x,
                                     const DataMask& s, const KernelMask& b) {
  check_inputs(x, s, b);
  const std::size_t p = static_cast<std::size_t>(x.rows());
  const std::size_t n = static_cast<std::size_t>(x.cols());
  const double invp = 1.0 / static_cast<double>(p);
  const ColumnBits bits(s);
  const std::size_t wpc = bits.wpc;

  PuncturedKernel<Scalar> k;
  k.n = n;
  k.has_diag = b.diag;
  k.cols.resize(b.pairs.size());
  k.vals.resize(b.pairs.size());
  k.row_ptr.assign(n + 1, 0);
  for (const auto& ij : b.pairs) ++k.row_ptr[ij.first + 1];
  for (std::size_t i = 0; i < n; ++i) k.row_ptr[i + 1] += k.row_ptr[i];

  // Stored pairs are already sorted row-major, so slot t of the pair list is
  // slot t of the CSR arrays; chunks write disjoint ranges.
  std::vector<std::uint64_t> chunk_flops(b.pairs.size() ? worker_count() : 0, 0);
  const std::size_t nchunks = chunk_flops.size();
  parallel_for(nchunks, [&](std::size_t clo, std::size_t chi) {
    for (std::size_t c = clo; c < chi; ++c) {
      const std::size_t t0 = b.pairs.size() * c / nchunks;
      const std::size_t t1 = b.pairs.size() * (c + 1) / nchunks;
      std::uint64_t flops = 0;
      for (std::size_t t = t0; t < t1; ++t) {
        const std::size_t i = b.pairs[t].first;
        const std::size_t j = b.pairs[t].second;
        const std::uint64_t* wi = bits.col(i);
        const std::uint64_t* wj = bits.col(j);
        const Scalar* xi = x.col(i).data();
        const Scalar* xj = x.col(j).data();
        Scalar acc{};
        for (std::size_t wk = 0; wk < wpc; ++wk) {
          std::uint64_t both = wi[wk] & wj[wk];
          flops += std::popcount(both);
          while (both) {
            const int bit = std::countr_zero(both);
            const std::size_t ell = (wk << 6) + static_cast<std::size_t>(bit);
            acc += conj_of(xi[ell]) * xj[ell];
            both &= both - 1;
          }
        }
        k.cols[t] = static_cast<std::uint32_t>(j);
        k.vals[t] = acc * Scalar(invp);
      }
      chunk_flops[c] = flops;
    }
  });

  std::uint64_t pair_flops = 0;
  for (std::uint64_t f : chunk_flops) pair_flops += f;
  k.flop_count = 2 * pair_flops;  // both mirror images of each stored pair

  if (b.diag) {
    k.diag.assign(n, 0.0);
    std::uint64_t diag_flops = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t* wi = bits.col(i);
      const Scalar* xi = x.col(i).data();
      double acc = 0.0;
      for (std::size_t wk = 0; wk < wpc; ++wk) {
        std::uint64_t word = wi[wk];
        diag_flops += std::popcount(word);
        while (word) {
          const int bit = std::countr_zero(word);
          acc += abs2_of(xi[(wk << 6) + static_cast<std::size_t>(bit)]);
          word &= word - 1;
        }
      }
      k.diag[i] = acc * invp;
    }
    k.flop_count += diag_flops;
  }
  return k;
}

template <class Scalar>
DataMatrix<Scalar> dense_kernel_oracle(const DataMatrix<Scalar>& x,
                                       const DataMask& s, const KernelMask& b,
                                       std::size_t max_n) {
  check_inputs(x, s, b);
  const std::size_t n = static_cast<std::size_t>(x.cols());
  if (n > max_n)
    throw SizeGuardError("dense kernel oracle guarded at n <= " +
                         std::to_string(max_n));
  DataMatrix<Scalar> xs = x;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < s.rows(); ++i)
      if (!s.test(i, j)) xs(i, j) = Scalar{};
  DataMatrix<Scalar> gram =
      (xs.adjoint() * xs) / static_cast<double>(x.rows());
  DataMatrix<Scalar> out = DataMatrix<Scalar>::Zero(n, n);
  for (const auto& ij : b.pairs) {
    out(ij.first, ij.second) = gram(ij.first, ij.second);
    out(ij.second, ij.first) = conj_of(gram(ij.first, ij.second));
  }
  if (b.diag)
    for (std::size_t i = 0; i < n; ++i) out(i, i) = gram(i, i);
  return out;
}

template <class Scalar>
void matvec(const PuncturedKernel<Scalar>& k, const Scalar* v, Scalar* y) {
  const std::size_t n = k.n;
  if (k.has_diag)
    for (std::size_t i = 0; i < n; ++i) y[i] = Scalar(k.diag[i]) * v[i];
  else
    for (std::size_t i = 0; i < n; ++i) y[i] = Scalar{};
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t lo = k.row_ptr[i], hi = k.row_ptr[i + 1];
    Scalar yi{};
    const Scalar vi = v[i];
    for (std::uint64_t t = lo; t < hi; ++t) {
      const std::uint32_t j = k.cols[t];
      const Scalar kij = k.vals[t];
      yi += kij * v[j];
      y[j] += conj_of(kij) * vi;
    }
    y[i] += yi;
  }
}

template <class Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> matvec(
    const PuncturedKernel<Scalar>& k,
    const Eigen::Vector<Scalar, Eigen::Dynamic>& v) {
  if (static_cast<std::size_t>(v.size()) != k.n)
    throw DimensionError("matvec length mismatch");
  Eigen::Vector<Scalar, Eigen::Dynamic> y(v.size());
  matvec(k, v.data(), y.data());
  return y;
}

template <class Scalar>
DataMatrix<Scalar> densify(const PuncturedKernel<Scalar>& k,
                           std::size_t max_n) {
  if (k.n > max_n)
    throw SizeGuardError("densify guarded at n <= " + std::to_string(max_n));
  DataMatrix<Scalar> out = DataMatrix<Scalar>::Zero(k.n, k.n);
  for (std::size_t i = 0; i < k.n; ++i) {
    for (std::uint64_t t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
      out(i, k.cols[t]) = k.vals[t];
      out(k.cols[t], i) = conj_of(k.vals[t]);
    }
    if (k.has_diag) out(i, i) = Scalar(k.diag[i]);
  }
  return out;
}

template PuncturedKernel<double> build_kernel(const DataMatrix<double>&,
                                              const DataMask&,
                                              const KernelMask&);
template PuncturedKernel<std::complex<double>> build_kernel(
    const DataMatrix<std::complex<double>>&, const DataMask&,
    const KernelMask&);
template DataMatrix<double> dense_kernel_oracle(const DataMatrix<double>&,
                                                const DataMask&,
                                                const KernelMask&,
                                                std::size_t);
template DataMatrix<std::complex<double>> dense_kernel_oracle(
    const DataMatrix<std::complex<double>>&, const DataMask&,
    const KernelMask&, std::size_t);
template void matvec(const PuncturedKernel<double>&, const double*, double*);
template void matvec(const PuncturedKernel<std::complex<double>>&,
                     const std::complex<double>*, std::complex<double>*);
template Eigen::Vector<double, Eigen::Dynamic> matvec(
    const PuncturedKernel<double>&,
    const Eigen::Vector<double, Eigen::Dynamic>&);
template Eigen::Vector<std::complex<double>, Eigen::Dynamic> matvec(
    const PuncturedKernel<std::complex<double>>&,
    const Eigen::Vector<std::complex<double>, Eigen::Dynamic>&);
template DataMatrix<double> densify(const PuncturedKernel<double>&,
                                    std::size_t);
template DataMatrix<std::complex<double>> densify(
    const PuncturedKernel<std::complex<double>>&, std::size_t);

}  // namespace kpunct
