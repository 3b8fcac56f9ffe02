#include "kpunct/synth.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kpunct/rng.hpp"

namespace kpunct {

namespace {

template <class Scalar>
Scalar draw_noise(const CounterRng& rng, std::uint64_t counter) {
  if constexpr (is_complex<Scalar>::value) {
    auto [a, b] = rng.normal2(counter);
    return Scalar(a, b) * std::sqrt(0.5);  // unit total variance
  } else {
    return rng.normal(counter);
  }
}

// Distinct eigenvalues (descending) with multiplicities at relative
// tolerance 1e-9, and the matching population directions.
template <class Scalar>
void finish_truth(const Eigen::MatrixXd& lmat,
                  const Eigen::MatrixXd& directions,
                  GroundTruth<Scalar>& out) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lmat);
  if (es.info() != Eigen::Success)
    throw NumericError("spike spectrum eigensolve failed");
  const Eigen::Index k = lmat.rows();
  Eigen::VectorXd vals(k);
  Eigen::MatrixXd rot(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    vals[i] = std::max(0.0, es.eigenvalues()[k - 1 - i]);
    rot.col(i) = es.eigenvectors().col(k - 1 - i);
  }
  out.spikes.values.clear();
  out.spikes.multiplicity.clear();
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!out.spikes.values.empty() &&
        std::abs(out.spikes.values.back() - vals[i]) <=
            1e-9 * std::max(1.0, std::abs(out.spikes.values.back()))) {
      ++out.spikes.multiplicity.back();
    } else {
      out.spikes.values.push_back(vals[i]);
      out.spikes.multiplicity.push_back(1);
    }
  }
  const Eigen::MatrixXd v = directions * rot;
  out.v = v.template cast<Scalar>();
  const double n = static_cast<double>(v.rows());
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v.cols(); ++j)
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      worst = std::max(worst, std::sqrt(n) * v(i, j) * v(i, j));
  out.delocalization = worst;
}

}  // namespace

template <class Scalar>
SynthSample<Scalar> sample_gmm(const GmmModel& model, std::size_t n) {
  const Eigen::Index p = model.means.rows();
  const Eigen::Index k = model.means.cols();
  if (p < 1 || k < 1) throw DimensionError("means must be a p x k matrix");
  if (static_cast<Eigen::Index>(model.proportions.size()) != k)
    throw ConfigError("need one proportion per class");
  double sum = 0.0;
  for (double w : model.proportions) {
    if (!(w > 0.0)) throw ConfigError("class proportions must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ConfigError("class proportions must sum to 1");
  if (!model.means.allFinite()) throw DataError("non-finite class mean");
  if (n < static_cast<std::size_t>(k))
    throw DimensionError("need at least one sample per class");

  // class sizes: largest-remainder rounding of n pi_a, or multinomial draws
  std::vector<int> labels(n);
  std::vector<std::size_t> counts(k, 0);
  if (model.multinomial_sizes) {
    const CounterRng rng(model.seed, CounterRng::kSizes);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform(i);
      double acc = 0.0;
      int cls = static_cast<int>(k) - 1;
      for (Eigen::Index a = 0; a < k; ++a) {
        acc += model.proportions[static_cast<std::size_t>(a)];
        if (u < acc) {
          cls = static_cast<int>(a);
          break;
        }
      }
      labels[i] = cls;
      ++counts[static_cast<std::size_t>(cls)];
    }
  } else {
    std::vector<double> frac(k);
    std::size_t assigned = 0;
    for (Eigen::Index a = 0; a < k; ++a) {
      const double want = model.proportions[static_cast<std::size_t>(a)] *
                          static_cast<double>(n);
      counts[a] = static_cast<std::size_t>(std::floor(want));
      frac[a] = want - std::floor(want);
      assigned += counts[a];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t r = 0; assigned < n; ++r, ++assigned) ++counts[order[r % k]];
    std::size_t at = 0;
    for (Eigen::Index a = 0; a < k; ++a)
      for (std::size_t c = 0; c < counts[a]; ++c) labels[at++] = static_cast<int>(a);
  }
  for (Eigen::Index a = 0; a < k; ++a)
    if (counts[a] == 0)
      throw ConfigError("class " + std::to_string(a) + " received no samples");

  SynthSample<Scalar> out;
  out.x.resize(p, static_cast<Eigen::Index>(n));
  const CounterRng noise(model.seed, CounterRng::kNoise);
  for (std::size_t i = 0; i < n; ++i) {
    const auto mu = model.means.col(labels[i]);
    for (Eigen::Index l = 0; l < p; ++l)
      out.x(l, static_cast<Eigen::Index>(i)) =
          draw_noise<Scalar>(noise, i * static_cast<std::size_t>(p) +
                                        static_cast<std::size_t>(l)) +
          Scalar(mu[l]);
  }

  // indicator isometry J D_n^{-1/2} and realized spike matrix
  Eigen::MatrixXd vind = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
  for (std::size_t i = 0; i < n; ++i)
    vind(static_cast<Eigen::Index>(i), labels[i]) =
        1.0 / std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(labels[i])]));
  Eigen::VectorXd dsqrt(k);
  for (Eigen::Index a = 0; a < k; ++a)
    dsqrt[a] = std::sqrt(static_cast<double>(counts[static_cast<std::size_t>(a)]));
  const Eigen::MatrixXd lmat =
      dsqrt.asDiagonal() * (model.means.transpose() * model.means) *
      dsqrt.asDiagonal() / static_cast<double>(n);
  finish_truth(lmat, vind, out.truth);
  out.truth.labels = labels;
  return out;
}

template <class Scalar>
SynthSample<Scalar> sample_spiked_pca(const SpikedPcaModel& model,
                                      std::size_t p) {
  const Eigen::Index n = model.loadings.rows();
  const Eigen::Index k = model.loadings.cols();
  if (n < 1 || k < 1 || n < k)
    throw DimensionError("loadings must be n x k with n >= k");
  if (p < 1) throw DimensionError("need p >= 1 features");
  if (!model.loadings.allFinite()) throw DataError("non-finite loading");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      model.loadings, Eigen::ComputeThinU | Eigen::ComputeThinV);
  // X = Z + Ztilde A^T and A = U S W^T give the factored form
  // (Ztilde W S) U^T, so U carries the population directions.
  const Eigen::MatrixXd u = svd.matrixU();
  const Eigen::MatrixXd ws = svd.matrixV() * svd.singularValues().asDiagonal();

  SynthSample<Scalar> out;
  const CounterRng noise(model.seed, CounterRng::kNoise);
  const CounterRng factors(model.seed, CounterRng::kFactors);
  DataMatrix<Scalar> ztc(static_cast<Eigen::Index>(p), k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(p); ++l)
      ztc(l, j) = draw_noise<Scalar>(
          factors, static_cast<std::uint64_t>(j) * p + static_cast<std::uint64_t>(l));
  out.x.resize(static_cast<Eigen::Index>(p), n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index l = 0; l < static_cast<Eigen::Index>(p); ++l)
      out.x(l, i) = draw_noise<Scalar>(
          noise, static_cast<std::uint64_t>(i) * p + static_cast<std::uint64_t>(l));
  out.x += ztc * ws.cast<Scalar>() * u.cast<Scalar>().transpose();

  // realized spike matrix (1/n) (Ztilde W S)^H (Ztilde W S)
  const DataMatrix<Scalar> l = ztc * ws.cast<Scalar>();
  Eigen::MatrixXd lmat(k, k);
  const DataMatrix<Scalar> gram = l.adjoint() * l / static_cast<double>(n);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      lmat(i, j) = std::real(std::complex<double>(gram(i, j)));
  finish_truth(lmat, u, out.truth);
  return out;
}

double classify_by_sign(const Eigen::VectorXd& v,
                        const std::vector<int>& labels) {
  if (static_cast<std::size_t>(v.size()) != labels.size())
    throw DimensionError("vector and labels must have equal length");
  if (labels.empty()) throw DimensionError("empty labels");
  double plus_err = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1 && labels[i] != -1)
      throw ConfigError("labels must be +-1");
    const double s = v[static_cast<Eigen::Index>(i)] * labels[i];
    if (s < 0.0)
      plus_err += 1.0;
    else if (s == 0.0)
      plus_err += 0.5;  // undecided entries penalize both orientations
  }
  const double n = static_cast<double>(labels.size());
  return std::min(plus_err, n - plus_err) / n;
}

std::vector<int> pm_labels(const std::vector<int>& class_ids) {
  std::vector<int> out(class_ids.size());
  for (std::size_t i = 0; i < class_ids.size(); ++i) {
    if (class_ids[i] != 0 && class_ids[i] != 1)
      throw ConfigError("sign labels need exactly two classes (ids 0 and 1)");
    out[i] = class_ids[i] == 0 ? 1 : -1;
  }
  return out;
}

template SynthSample<double> sample_gmm(const GmmModel&, std::size_t);
template SynthSample<std::complex<double>> sample_gmm(const GmmModel&,
                                                      std::size_t);
template SynthSample<double> sample_spiked_pca(const SpikedPcaModel&,
                                               std::size_t);
template SynthSample<std::complex<double>> sample_spiked_pca(
    const SpikedPcaModel&, std::size_t);

}  // namespace kpunct
