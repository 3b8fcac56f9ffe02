#include "kpunct/eigs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "kpunct/rng.hpp"

namespace kpunct {

namespace {

template <class Scalar>
double abs_of(Scalar v) {
  return std::abs(v);
}

// Largest row sum of |K|: every eigenvalue of K lies in [-sigma, sigma], so
// K + sigma I is positive semidefinite and power iteration homes in on the
// algebraically largest eigenvalue.
template <class Scalar>
double gershgorin_shift(const PuncturedKernel<Scalar>& k) {
  std::vector<double> row(k.n, 0.0);
  if (k.has_diag)
    for (std::size_t i = 0; i < k.n; ++i) row[i] = std::abs(k.diag[i]);
  for (std::size_t i = 0; i < k.n; ++i)
    for (std::uint64_t t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) {
      const double a = abs_of(k.vals[t]);
      row[i] += a;
      row[k.cols[t]] += a;
    }
  double s = 0.0;
  for (double r : row) s = std::max(s, r);
  return s;
}

template <class Scalar>
Eigen::Vector<Scalar, Eigen::Dynamic> random_unit(std::size_t n,
                                                  const CounterRng& rng,
                                                  std::uint64_t base) {
  Eigen::Vector<Scalar, Eigen::Dynamic> v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto [a, b] = rng.normal2(base + i);
    if constexpr (is_complex<Scalar>::value)
      v[static_cast<Eigen::Index>(i)] = Scalar(a, b);
    else
      v[static_cast<Eigen::Index>(i)] = a;
  }
  const double nrm = v.norm();
  return v / nrm;
}

// Rotate so the largest-magnitude entry is real positive; ties by index.
template <class Scalar>
void fix_phase(Eigen::Vector<Scalar, Eigen::Dynamic>& v) {
  Eigen::Index at = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best + 1e-15) {
      best = a;
      at = i;
    }
  }
  if (best <= 0.0) return;
  if constexpr (is_complex<Scalar>::value) {
    v *= std::conj(v[at]) / std::abs(v[at]);
    // trim the rounding dust off the pivot's imaginary part
    v[at] = Scalar(std::abs(v[at]), 0.0);
  } else {
    if (v[at] < 0.0) v = -v;
  }
}

}  // namespace

template <class Scalar>
EigenBasis<Scalar> top_eigen(const PuncturedKernel<Scalar>& k,
                             std::size_t count, const PowerOptions& opts) {
  using Vec = Eigen::Vector<Scalar, Eigen::Dynamic>;
  if (count > k.n)
    throw DimensionError("requested " + std::to_string(count) +
                         " eigenpairs from an order-" + std::to_string(k.n) +
                         " kernel");
  if (!(opts.tol > 0.0)) throw ConfigError("tolerance must be positive");
  EigenBasis<Scalar> basis;
  if (count == 0) return basis;

  const double sigma = gershgorin_shift(k);
  const CounterRng rng(opts.seed, CounterRng::kEigInit);
  Vec w(static_cast<Eigen::Index>(k.n));

  for (std::size_t m = 0; m < count; ++m) {
    Vec v = random_unit<Scalar>(k.n, rng, (std::uint64_t(m) << 32));
    for (const auto& prev : basis.pairs)
      v -= prev.vector * prev.vector.dot(v);
    v.normalize();

    double lambda = 0.0, res = 0.0;
    double best_res = std::numeric_limits<double>::infinity();
    std::size_t it = 0;
    bool done = false;
    for (; it < opts.max_iter; ++it) {
      matvec(k, v.data(), w.data());
      w += Scalar(sigma) * v;
      for (const auto& prev : basis.pairs)
        w -= prev.vector * prev.vector.dot(w);
      const double rq = std::real(Scalar(v.dot(w)));
      lambda = rq - sigma;
      res = (w - Scalar(rq) * v).norm();
      best_res = std::min(best_res, res);
      if (res <= opts.tol * std::max(1.0, std::abs(lambda))) {
        done = true;
        break;
      }
      const double nrm = w.norm();
      if (nrm == 0.0) {
        // v is annihilated by the shifted operator: exact eigenvector of K
        // with eigenvalue -sigma.
        lambda = -sigma;
        res = 0.0;
        done = true;
        break;
      }
      v = w / nrm;
    }
    if (!done)
      throw ConvergenceError(
          "power iteration stalled at relative residual " +
              std::to_string(best_res / std::max(1.0, std::abs(lambda))) +
              " for eigenpair " + std::to_string(m),
          best_res, it);
    fix_phase(v);
    basis.pairs.push_back(EigenPair<Scalar>{lambda, v, res, it + 1});
  }

  std::stable_sort(basis.pairs.begin(), basis.pairs.end(),
                   [](const auto& a, const auto& b) { return a.value > b.value; });
  return basis;
}

template <class Scalar>
EigenBasis<Scalar> dense_eigen_oracle(const PuncturedKernel<Scalar>& k,
                                      std::size_t max_n) {
  using Mat = DataMatrix<Scalar>;
  const Mat dense = densify(k, max_n);
  Eigen::SelfAdjointEigenSolver<Mat> es(dense);
  if (es.info() != Eigen::Success)
    throw NumericError("dense eigensolver failed");
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  // true residuals in one block product
  const Mat resid = dense * vecs - vecs * vals.asDiagonal();
  EigenBasis<Scalar> basis;
  basis.pairs.resize(k.n);
  for (std::size_t m = 0; m < k.n; ++m) {
    const Eigen::Index src = static_cast<Eigen::Index>(k.n - 1 - m);
    EigenPair<Scalar>& pr = basis.pairs[m];
    pr.value = vals[src];
    pr.vector = vecs.col(src);
    fix_phase(pr.vector);
    pr.residual = resid.col(src).norm();
    pr.iterations = 0;
  }
  return basis;
}

template <class Scalar>
Eigen::VectorXd dense_eigenvalues(const PuncturedKernel<Scalar>& k,
                                  std::size_t max_n) {
  Eigen::SelfAdjointEigenSolver<DataMatrix<Scalar>> es(densify(k, max_n),
                                                       Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("dense eigensolver failed");
  return es.eigenvalues().reverse();
}

template <class Scalar>
double alignment(const EigenBasis<Scalar>& basis,
                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& v,
                 std::size_t start, std::size_t len) {
  if (len == 0) throw DimensionError("alignment needs a non-empty block");
  if (start + len > basis.pairs.size() ||
      start + len > static_cast<std::size_t>(v.cols()))
    throw DimensionError("alignment block out of range");
  if (basis.pairs[start].vector.size() != v.rows())
    throw DimensionError("population matrix has the wrong number of rows");
  const auto gram = (v.adjoint() * v).eval();
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(gram(i, j) - Scalar(want)) > 1e-8)
        throw ConfigError("population matrix must have orthonormal columns");
    }
  double acc = 0.0;
  for (std::size_t a = start; a < start + len; ++a)
    for (std::size_t b = start; b < start + len; ++b) {
      const Scalar ip = basis.pairs[a].vector.dot(
          v.col(static_cast<Eigen::Index>(b)));
      acc += std::norm(std::complex<double>(std::real(ip), std::imag(ip)));
    }
  return acc / static_cast<double>(len);
}

template EigenBasis<double> top_eigen(const PuncturedKernel<double>&,
                                      std::size_t, const PowerOptions&);
template EigenBasis<std::complex<double>> top_eigen(
    const PuncturedKernel<std::complex<double>>&, std::size_t,
    const PowerOptions&);
template EigenBasis<double> dense_eigen_oracle(const PuncturedKernel<double>&,
                                               std::size_t);
template EigenBasis<std::complex<double>> dense_eigen_oracle(
    const PuncturedKernel<std::complex<double>>&, std::size_t);
template Eigen::VectorXd dense_eigenvalues(const PuncturedKernel<double>&,
                                           std::size_t);
template Eigen::VectorXd dense_eigenvalues(
    const PuncturedKernel<std::complex<double>>&, std::size_t);
template double alignment(
    const EigenBasis<double>&,
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>&, std::size_t,
    std::size_t);
template double alignment(
    const EigenBasis<std::complex<double>>&,
    const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>&,
    std::size_t, std::size_t);

}  // namespace kpunct
