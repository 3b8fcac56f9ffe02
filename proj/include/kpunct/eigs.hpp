#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "kpunct/errors.hpp"
#include "kpunct/kernel.hpp"

namespace kpunct {

// Iterative extraction failed to reach the requested residual.
struct ConvergenceError : NumericError {
  ConvergenceError(const std::string& msg, double best, std::size_t iters)
      : NumericError(msg), best_residual(best), iterations(iters) {}
  double best_residual;
  std::size_t iterations;
};

template <class Scalar>
struct EigenPair {
  double value = 0.0;
  Eigen::Vector<Scalar, Eigen::Dynamic> vector;
  double residual = 0.0;   // ||K v - value v|| for the returned vector
  std::size_t iterations = 0;
};

// Eigenpairs sorted by descending value; vectors are unit length, mutually
// orthogonal, and phase-fixed so the largest-magnitude entry is real and
// positive.
template <class Scalar>
struct EigenBasis {
  std::vector<EigenPair<Scalar>> pairs;

  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors() const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v(
        pairs.empty() ? 0 : pairs.front().vector.size(),
        static_cast<Eigen::Index>(pairs.size()));
    for (std::size_t j = 0; j < pairs.size(); ++j)
      v.col(static_cast<Eigen::Index>(j)) = pairs[j].vector;
    return v;
  }
};

struct PowerOptions {
  double tol = 1e-9;           // relative residual target
  std::size_t max_iter = 5000; // per eigenpair
  std::uint64_t seed = 0;      // start vectors
};

// Top eigenpairs by algebraic value: power iteration on K + sigma I with a
// Gershgorin shift sigma, deflating by explicit orthogonalization against
// converged vectors every step.
template <class Scalar>
EigenBasis<Scalar> top_eigen(const PuncturedKernel<Scalar>& k,
                             std::size_t count,
                             const PowerOptions& opts = {});

// Full dense decomposition for cross-checks; guarded by max_n.
template <class Scalar>
EigenBasis<Scalar> dense_eigen_oracle(const PuncturedKernel<Scalar>& k,
                                      std::size_t max_n = 2000);

// Eigenvalues only (descending), cheap enough for full-spectrum histograms.
template <class Scalar>
Eigen::VectorXd dense_eigenvalues(const PuncturedKernel<Scalar>& k,
                                  std::size_t max_n = 2000);

// Squared subspace overlap (1/len) ||Vhat_block^H V_block||_F^2 between the
// sample eigenvectors in [start, start+len) and the matching columns of an
// isometric population matrix.
template <class Scalar>
double alignment(const EigenBasis<Scalar>& basis,
                 const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& v,
                 std::size_t start, std::size_t len);

}  // namespace kpunct
