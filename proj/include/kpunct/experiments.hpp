#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpunct/rmt.hpp"
#include "kpunct/synth.hpp"

namespace kpunct {

// theory: closed-form density and spike predictions, no simulation
struct TheoryConfig {
  std::size_t n = 400, p = 200;  // only the ratio c0 = p/n matters here
  double eps_s = 0.2, eps_b = 0.4;
  int b = 1;
  double grid_min = 0.0, grid_max = 0.0;  // auto-span when min >= max
  std::size_t grid_points = 512;
  double eta = 1e-4;
  std::vector<double> ells;
  std::string out = "out";
};

// spectrum: one synthetic two-class draw, full spectrum vs the theory curve
struct SpectrumConfig {
  std::size_t n = 400, p = 200;
  double eps_s = 0.2, eps_b = 0.4;
  int b = 1;
  std::uint64_t seed = 0;
  double tol = 1e-6;
  // class means drawn N(0, cov/p) per feature, two classes
  double mcov11 = 10.0, mcov12 = 5.5, mcov22 = 15.0;
  double pi1 = 0.4;
  double eta = 1e-4;
  std::size_t bins = 0;  // 0 = Freedman-Diaconis
  std::size_t dense_guard = 10000;
  std::string out = "out";
};

// sweep: theory curves along one axis, optionally validated by Monte Carlo
struct SweepConfig {
  enum class Axis { eps_b, eps_s, ell };
  Axis axis = Axis::eps_b;
  double from = 0.01, to = 1.0;
  std::size_t points = 25;
  bool log_scale = true;
  std::size_t n = 4000, p = 4000;
  double eps_s = 0.2, eps_b = 0.4;
  int b = 1;
  double ell = 50.0;              // fixed two-class spike ||mu||^2
  double constant_product = 0.0;  // > 0 pins eps_s^2 eps_b to this value
  std::size_t reps = 0;           // 0 = theory only
  std::uint64_t seed = 0;
  double tol = 1e-4;
  std::string out = "out";
};

// cluster: user-supplied data matrix through the punctured pipeline
struct ClusterConfig {
  std::string input;        // PNCX binary or CSV, features in rows
  std::string labels_path;  // optional +-1 labels, one per line
  double eps_s = 0.2, eps_b = 0.4;
  int b = 1;
  std::uint64_t seed = 0;
  std::size_t topk = 1;
  double tol = 1e-6;
  std::size_t max_iter = 5000;
  std::string save_masks, load_masks;  // path prefixes
  std::string save_kernel_path;
  std::string out = "out";
};

// masks: generate-and-save or load-and-describe
struct MasksConfig {
  std::size_t p = 200, n = 400;
  double eps_s = 0.2, eps_b = 0.4;
  int b = 1;
  std::uint64_t seed = 0;
  std::string load;  // path prefix; empty = generate
  std::string out = "out";
};

int cmd_theory(const TheoryConfig& cfg);
int cmd_spectrum(const SpectrumConfig& cfg);
int cmd_sweep(const SweepConfig& cfg);
int cmd_cluster(const ClusterConfig& cfg);
int cmd_masks(const MasksConfig& cfg);

// Even grids, shared by commands and tests.
std::vector<double> linspace(double lo, double hi, std::size_t points);
std::vector<double> logspace(double lo, double hi, std::size_t points);

// Two fixed class means +-mu with ||mu||^2 = ell spread over all features.
Eigen::MatrixXd pm_means(std::size_t p, double ell);

// Random class means: rows i.i.d. N(0, cov2 / p), two classes.
Eigen::MatrixXd gaussian_means2(std::size_t p, double c11, double c12,
                                double c22, std::uint64_t seed);

}  // namespace kpunct
