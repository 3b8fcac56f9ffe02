#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "kpunct/errors.hpp"
#include "kpunct/kernel.hpp"

namespace kpunct {

// Realized spike spectrum: distinct values, descending, with multiplicities.
struct SpikeSpectrum {
  std::vector<double> values;
  std::vector<int> multiplicity;

  std::size_t blocks() const { return values.size(); }
  // offset of block i inside the expanded (with multiplicity) list
  std::size_t block_start(std::size_t i) const {
    std::size_t s = 0;
    for (std::size_t k = 0; k < i; ++k)
      s += static_cast<std::size_t>(multiplicity[k]);
    return s;
  }
};

// Population directions and realized spikes for a synthetic draw.  Columns
// of v are the population eigenvectors of the limiting rank-k perturbation,
// ordered to match spikes (descending, multiplicities expanded).
template <class Scalar>
struct GroundTruth {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v;  // n x k isometry
  SpikeSpectrum spikes;
  std::vector<int> labels;  // class index per sample; empty for PCA draws
  double delocalization = 0.0;  // max_ij sqrt(n) |v_ij|^2
};

template <class Scalar>
struct SynthSample {
  DataMatrix<Scalar> x;  // p x n
  GroundTruth<Scalar> truth;
};

// Gaussian mixture with fixed class means (features in rows of `means`).
struct GmmModel {
  Eigen::MatrixXd means;            // p x k
  std::vector<double> proportions;  // k entries, positive, summing to 1
  std::uint64_t seed = 0;
  bool multinomial_sizes = false;   // default: fixed rounding of n pi_a
};

// Low-rank spiked model X = Z + Ztilde A^H with i.i.d. factors.
struct SpikedPcaModel {
  Eigen::MatrixXd loadings;  // n x k, may be rank deficient
  std::uint64_t seed = 0;
};

template <class Scalar = double>
SynthSample<Scalar> sample_gmm(const GmmModel& model, std::size_t n);

template <class Scalar = double>
SynthSample<Scalar> sample_spiked_pca(const SpikedPcaModel& model,
                                      std::size_t p);

// Two-class sign readout: fraction of entries of v whose sign disagrees with
// the +-1 labels, minimized over the global orientation.
double classify_by_sign(const Eigen::VectorXd& v, const std::vector<int>& labels);

// Convenience: +-1 labels from binary class indices.
std::vector<int> pm_labels(const std::vector<int>& class_ids);

}  // namespace kpunct
