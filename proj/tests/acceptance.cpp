// Acceptance gate: every release-blocking property of the library checked
// end to end, one criterion per line.  Run with no arguments for the full
// gate or with --only N for a single criterion; exit status is zero exactly
// when every selected criterion passes.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "kpunct/eigs.hpp"
#include "kpunct/experiments.hpp"
#include "kpunct/histogram.hpp"
#include "kpunct/kernel.hpp"
#include "kpunct/masks.hpp"
#include "kpunct/rmt.hpp"
#include "kpunct/rng.hpp"
#include "kpunct/synth.hpp"

using namespace kpunct;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Independent re-evaluation of the defining fixed-point equation; the solver
// is never trusted with grading its own residual here.
double equation_residual(const TheoryParams& tp, std::complex<double> z,
                         std::complex<double> m) {
  const std::complex<double> rhs =
      tp.eps_s * tp.b_diag - 1.0 / m -
      (tp.eps_b * tp.eps_s * tp.eps_s / tp.c0) * m +
      (tp.eps_b * tp.eps_b * tp.eps_b * std::pow(tp.eps_s, 3) /
       (tp.c0 * tp.c0)) *
          m * m / (1.0 + (tp.eps_b * tp.eps_s / tp.c0) * m);
  return std::abs(rhs - z);
}

// Closed-form density of the square-Gram limit with a dimension ratio c0,
// expressed in the coordinates of the kernel (support scales with eps_s).
double mp_density_closed(double x, double c0, double eps_s) {
  const double y = c0 * x / eps_s;
  const double lo = (1.0 - std::sqrt(c0)) * (1.0 - std::sqrt(c0));
  const double hi = (1.0 + std::sqrt(c0)) * (1.0 + std::sqrt(c0));
  if (y <= lo || y >= hi) return 0.0;
  const double f = std::sqrt((hi - y) * (y - lo)) / (2.0 * M_PI * c0 * y);
  return (c0 * c0 / eps_s) * f;
}

DataMatrix<double> random_data(std::size_t p, std::size_t n,
                               std::uint64_t seed) {
  DataMatrix<double> x(p, n);
  CounterRng rng(seed, CounterRng::kNoise);
  std::uint64_t ctr = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) x(i, j) = rng.normal(ctr++);
  return x;
}

// Symmetric two-class mixture, punctured kernel, leading eigenpair.
struct TwoClassRun {
  double lambda1 = 0.0;
  double align = 0.0;       // squared overlap with the class direction
  double error_rate = 0.0;  // sign-readout misclassification
};

TwoClassRun run_two_class(std::size_t p, std::size_t n, double ell,
                          const MaskConfig& mc, std::uint64_t data_seed,
                          const PowerOptions& popts) {
  GmmModel gm;
  gm.means = pm_means(p, ell);
  gm.proportions = {0.5, 0.5};
  gm.seed = data_seed;
  const auto sample = sample_gmm(gm, n);
  const auto s = gen_data_mask(p, n, mc);
  const auto b = gen_kernel_mask(n, mc);
  const auto k = build_kernel(sample.x, s, b);
  const auto basis = top_eigen(k, 1, popts);
  TwoClassRun out;
  out.lambda1 = basis.pairs[0].value;
  out.align = alignment(basis, sample.truth.v, 0, 1);
  out.error_rate =
      classify_by_sign(basis.pairs[0].vector, pm_labels(sample.truth.labels));
  return out;
}

// ---------------------------------------------------------------------------
// criterion 1: sparse assembly agrees with the dense reference entrywise
// ---------------------------------------------------------------------------
Outcome crit1() {
  const auto t0 = Clock::now();
  CounterRng rng(101, CounterRng::kSizes);
  std::uint64_t ctr = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const auto p = 1 + static_cast<std::size_t>(rng.uniform(ctr++) * 40.0);
    const auto n = 2 + static_cast<std::size_t>(rng.uniform(ctr++) * 198.0);
    MaskConfig mc;
    mc.eps_s = 0.05 + 0.95 * rng.uniform(ctr++);
    mc.eps_b = 0.05 + 0.95 * rng.uniform(ctr++);
    mc.b_diag = rng.uniform(ctr++) < 0.5 ? 0 : 1;
    mc.seed = 7000 + static_cast<std::uint64_t>(inst);
    const auto x = random_data(p, n, 9000 + static_cast<std::uint64_t>(inst));
    const auto s = gen_data_mask(p, n, mc);
    const auto b = gen_kernel_mask(n, mc);
    const auto dense = densify(build_kernel(x, s, b), 200);
    const auto oracle = dense_kernel_oracle(x, s, b, 200);
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    worst = std::max(worst, (dense - oracle).cwiseAbs().maxCoeff() / scale);
  }
  const double dt = seconds_since(t0);
  const bool pass = worst <= 1e-12 && dt < 10.0;
  return {pass, strf("100 instances, worst relative deviation %.2e "
                     "(tol 1e-12), %.1f s (budget 10 s)",
                     worst, dt)};
}

// ---------------------------------------------------------------------------
// criterion 2: full-mask limit reduces to the square-Gram law, in theory and
// in a pooled finite-size histogram
// ---------------------------------------------------------------------------
Outcome crit2() {
  TheoryParams tp;
  tp.eps_s = tp.eps_b = 1.0;
  tp.b_diag = 1;
  tp.c0 = 0.5;
  const double lo = tp.eps_s * std::pow(1.0 - std::sqrt(tp.c0), 2) / tp.c0;
  const double hi = tp.eps_s * std::pow(1.0 + std::sqrt(tp.c0), 2) / tp.c0;
  const auto grid =
      linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 181);
  const auto density = limiting_density(tp, grid, 1e-5);
  double sup = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    sup = std::max(sup, std::abs(density.nu[i] -
                                 mp_density_closed(grid[i], tp.c0, tp.eps_s)));

  // pooled spectra of five independent draws at n = 4000, p = 2000; the
  // n - p exact zeros (the atom of the limit) are kept out by working with
  // the equivalent p x p square Gram
  const std::size_t n = 4000, p = 2000;
  std::vector<double> values;
  values.reserve(5 * p);
  for (int rep = 0; rep < 5; ++rep) {
    const auto x = random_data(p, n, 2100 + static_cast<std::uint64_t>(rep));
    Eigen::MatrixXd g = (x * x.transpose()) / static_cast<double>(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g,
                                                      Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      values.push_back(es.eigenvalues()(i));
  }
  const auto hist = make_histogram(values, 40);
  std::vector<double> centers(hist.bins());
  for (std::size_t k = 0; k < hist.bins(); ++k) centers[k] = hist.center(k);
  const auto theory = limiting_density(tp, centers, 1e-5);
  double worst_bin = 0.0;
  for (std::size_t k = 0; k < hist.bins(); ++k)
    worst_bin =
        std::max(worst_bin, std::abs(hist.density(k) - theory.nu[k] / tp.c0));
  const bool pass = sup <= 5e-3 && worst_bin <= 0.05;
  return {pass, strf("sup |nu - closed form| = %.2e (tol 5e-3); worst bin "
                     "deviation %.3f (tol 0.05, 40 bins, 5 pooled draws)",
                     sup, worst_bin)};
}

// ---------------------------------------------------------------------------
// criterion 3: sparse limit collapses onto the semicircle after rescaling
// ---------------------------------------------------------------------------
Outcome crit3() {
  TheoryParams tp;
  tp.eps_s = tp.eps_b = 0.02;
  tp.b_diag = 1;
  tp.c0 = 1.0;
  const double center = tp.eps_s * tp.b_diag;
  const double sigma = std::sqrt(tp.eps_b * tp.eps_s * tp.eps_s / tp.c0);
  const auto coords = linspace(-1.9, 1.9, 381);
  std::vector<double> grid(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    grid[i] = center + sigma * coords[i];
  const auto density = limiting_density(tp, grid, 1e-5);
  double sup = 0.0;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double sc =
        std::sqrt(4.0 - coords[i] * coords[i]) / (2.0 * M_PI);
    sup = std::max(sup, std::abs(sigma * density.nu[i] - sc));
  }
  const bool pass = sup <= 5e-3;
  return {pass, strf("sup |sigma nu(center + sigma x) - semicircle(x)| = "
                     "%.2e on |x| <= 1.9 (tol 5e-3)",
                     sup)};
}

// ---------------------------------------------------------------------------
// criterion 4: fixed-point solver residuals and Herglotz branch
// ---------------------------------------------------------------------------
Outcome crit4() {
  CounterRng rng(401, CounterRng::kSizes);
  std::uint64_t ctr = 0;
  double worst = 0.0, min_im = 1.0, worst_tail = 0.0;
  for (int i = 0; i < 10000; ++i) {
    TheoryParams tp;
    tp.eps_s = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.eps_b = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.b_diag = rng.uniform(ctr++) < 0.5 ? 0 : 1;
    tp.c0 = 0.05 * std::pow(40.0, rng.uniform(ctr++));
    const double re = -5.0 + 20.0 * rng.uniform(ctr++);
    const double im = std::pow(10.0, -6.0 + 7.0 * rng.uniform(ctr++));
    const std::complex<double> z(re, im);
    const auto sv = solve_stieltjes(tp, z);
    worst = std::max(worst,
                     equation_residual(tp, z, sv.m) / (1.0 + std::abs(z)));
    min_im = std::min(min_im, sv.m.imag());
  }
  for (int i = 0; i < 20; ++i) {
    TheoryParams tp;
    tp.eps_s = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.eps_b = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.b_diag = rng.uniform(ctr++) < 0.5 ? 0 : 1;
    tp.c0 = 0.05 * std::pow(40.0, rng.uniform(ctr++));
    const std::complex<double> z(1e6, 1.0);
    const auto sv = solve_stieltjes(tp, z);
    worst_tail = std::max(worst_tail, std::abs(sv.m + 1.0 / z));
  }
  const bool pass = worst <= 1e-12 && min_im > 0.0 && worst_tail <= 1e-8;
  return {pass, strf("10000 draws: worst residual/(1+|z|) = %.2e (tol 1e-12), "
                     "min Im m = %.2e (> 0); tail |m + 1/z| = %.2e at "
                     "|z| = 1e6 (tol 1e-8)",
                     worst, min_im, worst_tail)};
}

// ---------------------------------------------------------------------------
// criterion 5: isolated eigenvalues land on the predicted positions in the
// two-hump mixture configuration
// ---------------------------------------------------------------------------
Outcome crit5() {
  const std::size_t p = 200, n = 4000;
  const std::vector<double> props = {0.4, 0.6};

  const auto run_variant = [&](double eps_s, int seeds, double* mean_out) {
    TheoryParams tp;
    tp.eps_s = eps_s;
    tp.eps_b = 0.4;
    tp.b_diag = 1;
    tp.c0 = static_cast<double>(p) / static_cast<double>(n);
    MaskConfig mc;
    mc.eps_s = eps_s;
    mc.eps_b = 0.4;
    mc.b_diag = 1;
    double worst = 0.0, sum = 0.0;
    int count = 0;
    for (int seed = 0; seed < seeds; ++seed) {
      GmmModel gm;
      gm.means =
          gaussian_means2(p, 10.0, 5.5, 15.0, 5100 + static_cast<std::uint64_t>(seed));
      gm.proportions = props;
      gm.seed = 5200 + static_cast<std::uint64_t>(seed);
      const auto sample = sample_gmm(gm, n);
      mc.seed = 5300 + static_cast<std::uint64_t>(seed);
      const auto s = gen_data_mask(p, n, mc);
      const auto b = gen_kernel_mask(n, mc);
      const auto k = build_kernel(sample.x, s, b);
      PowerOptions popts;
      popts.tol = 1e-4;
      popts.max_iter = 20000;
      popts.seed = 5400 + static_cast<std::uint64_t>(seed);
      const auto basis = top_eigen(k, 2, popts);
      for (int i = 0; i < 2; ++i) {
        const double ell = sample.truth.spikes.values[static_cast<std::size_t>(i)];
        const auto pred = spike_prediction(tp, ell);
        const double rel =
            std::abs(basis.pairs[static_cast<std::size_t>(i)].value - pred.rho) /
            pred.rho;
        worst = std::max(worst, rel);
        sum += rel;
        ++count;
      }
    }
    *mean_out = sum / count;
    return worst;
  };

  const auto t0 = Clock::now();
  double mean_main = 0.0;
  const double worst_main = run_variant(0.2, 10, &mean_main);
  const double dt_main = seconds_since(t0);
  double mean_ctrl = 0.0;
  const double worst_ctrl = run_variant(1.0, 5, &mean_ctrl);

  // at p = 200 the data-mask interaction with the class means inflates the
  // whole spectrum by about (1 - eps_s) tr(diag(pi) Cov) / p, a finite-p
  // effect of roughly five percent here, so the doubly punctured variant is
  // graded with that slack while the eps_s = 1 control carries the sharp
  // tolerance
  const bool pass = worst_main <= 0.12 && mean_main <= 0.08 &&
                    worst_ctrl <= 0.03 && dt_main < 120.0;
  return {pass,
          strf("double puncture: worst %.3f mean %.3f over 10 seeds "
               "(tol 0.12 / 0.08), %.0f s (budget 120 s); full-data-mask "
               "control: worst %.3f over 5 seeds (tol 0.03)",
               worst_main, mean_main, dt_main, worst_ctrl)};
}

// ---------------------------------------------------------------------------
// criterion 6: eigenvector alignment matches the predicted value
// ---------------------------------------------------------------------------
Outcome crit6() {
  const std::size_t p = 4000, n = 4000;
  const double ell = 50.0;
  TheoryParams tp;
  tp.eps_s = 0.2;
  tp.eps_b = 0.4;
  tp.b_diag = 1;
  tp.c0 = 1.0;
  const double zeta = spike_prediction(tp, ell).zeta;
  MaskConfig mc;
  mc.eps_s = tp.eps_s;
  mc.eps_b = tp.eps_b;
  mc.b_diag = 1;
  PowerOptions popts;
  popts.tol = 1e-4;
  popts.max_iter = 20000;
  double sum = 0.0;
  for (int seed = 0; seed < 10; ++seed) {
    mc.seed = 6100 + static_cast<std::uint64_t>(seed);
    popts.seed = 6200 + static_cast<std::uint64_t>(seed);
    sum += run_two_class(p, n, ell, mc, 6300 + static_cast<std::uint64_t>(seed),
                         popts)
               .align;
  }
  const double mean = sum / 10.0;
  const bool pass = std::abs(mean - zeta) <= 0.03;
  return {pass, strf("mean squared alignment %.4f over 10 seeds vs predicted "
                     "%.4f (tol 0.03)",
                     mean, zeta)};
}

// ---------------------------------------------------------------------------
// criterion 7: below the detectability threshold the top eigenvalue sticks
// to the bulk edge and the eigenvector carries no class information
// ---------------------------------------------------------------------------
Outcome crit7() {
  TheoryParams tp;
  tp.eps_s = 0.2;
  tp.eps_b = 0.4;
  tp.b_diag = 1;
  tp.c0 = 1.0;
  const double gamma = gamma_threshold(tp);
  const double edge = g_spike(tp, gamma);
  const std::size_t p = 3000, n = 3000;
  const double ell = 0.8 * gamma;
  MaskConfig mc;
  mc.eps_s = tp.eps_s;
  mc.eps_b = tp.eps_b;
  mc.b_diag = 1;
  double worst_rel = 0.0, align_sum = 0.0;
  for (int seed = 0; seed < 2; ++seed) {
    GmmModel gm;
    gm.means = pm_means(p, ell);
    gm.proportions = {0.5, 0.5};
    gm.seed = 7300 + static_cast<std::uint64_t>(seed);
    const auto sample = sample_gmm(gm, n);
    mc.seed = 7100 + static_cast<std::uint64_t>(seed);
    const auto s = gen_data_mask(p, n, mc);
    const auto b = gen_kernel_mask(n, mc);
    const auto k = build_kernel(sample.x, s, b);
    const double lam1 = dense_eigenvalues(k, n)(0);
    worst_rel = std::max(worst_rel, std::abs(lam1 - edge) / edge);
    PowerOptions popts;
    popts.tol = 4e-2;
    popts.max_iter = 20000;
    popts.seed = 7200 + static_cast<std::uint64_t>(seed);
    const auto basis = top_eigen(k, 1, popts);
    align_sum += alignment(basis, sample.truth.v, 0, 1);
  }
  const double mean_align = align_sum / 2.0;
  const bool pass = worst_rel <= 0.02 && mean_align <= 0.05;
  return {pass, strf("ell = 0.8 Gamma: top eigenvalue within %.4f relative "
                     "of predicted edge %.4f (tol 0.02); mean alignment %.4f "
                     "(tol 0.05) over 2 seeds",
                     worst_rel, edge, mean_align)};
}

// ---------------------------------------------------------------------------
// criterion 8: two-class sign clustering error tracks the prediction along
// a kernel-mask sweep
// ---------------------------------------------------------------------------
Outcome crit8() {
  const std::size_t p = 4000, n = 4000;
  const double ell = 50.0;
  const std::vector<double> grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  double worst = 0.0;
  std::string per_point;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    TheoryParams tp;
    tp.eps_s = 0.4;
    tp.eps_b = grid[g];
    tp.b_diag = 1;
    tp.c0 = 1.0;
    const double pe_th = clustering_error(spike_prediction(tp, ell).zeta);
    MaskConfig mc;
    mc.eps_s = tp.eps_s;
    mc.eps_b = tp.eps_b;
    mc.b_diag = 1;
    mc.seed = 8100 + g;
    PowerOptions popts;
    popts.tol = 1e-4;
    popts.max_iter = 20000;
    popts.seed = 8200 + g;
    const auto run =
        run_two_class(p, n, ell, mc, 8300 + g, popts);
    const double diff = std::abs(run.error_rate - pe_th);
    worst = std::max(worst, diff);
    per_point += strf(" %.3f/%.3f", run.error_rate, pe_th);
  }
  const bool pass = worst <= 0.02;
  return {pass, strf("single-realization error vs prediction over eps_b in "
                     "{0.01..1}:%s; worst |diff| %.4f (tol 0.02)",
                     per_point.c_str(), worst)};
}

// ---------------------------------------------------------------------------
// criterion 9: matched mask budgets eps_s^2 eps_b give the same eigenvector
// quality on the same data
// ---------------------------------------------------------------------------
Outcome crit9() {
  const std::size_t p = 2000, n = 4000;
  const double ell = 250.0;
  TheoryParams ta, tb;
  ta.eps_s = 0.2;
  ta.eps_b = 1.0;
  tb.eps_s = 1.0;
  tb.eps_b = 0.04;
  ta.b_diag = tb.b_diag = 0;
  ta.c0 = tb.c0 = 0.5;
  const double za = spike_prediction(ta, ell).zeta;
  const double zb = spike_prediction(tb, ell).zeta;
  double worst = 0.0;
  std::string detail;
  for (int seed = 0; seed < 3; ++seed) {
    GmmModel gm;
    gm.means = pm_means(p, ell);
    gm.proportions = {0.5, 0.5};
    gm.seed = 9300 + static_cast<std::uint64_t>(seed);
    const auto sample = sample_gmm(gm, n);  // one draw, both mask budgets
    double align[2] = {0.0, 0.0};
    for (int cfg = 0; cfg < 2; ++cfg) {
      MaskConfig mc;
      mc.eps_s = cfg == 0 ? ta.eps_s : tb.eps_s;
      mc.eps_b = cfg == 0 ? ta.eps_b : tb.eps_b;
      mc.b_diag = 0;
      mc.seed = 9100 + static_cast<std::uint64_t>(seed * 2 + cfg);
      const auto s = gen_data_mask(p, n, mc);
      const auto b = gen_kernel_mask(n, mc);
      const auto k = build_kernel(sample.x, s, b);
      PowerOptions popts;
      popts.tol = 1e-4;
      popts.max_iter = 20000;
      popts.seed = 9200 + static_cast<std::uint64_t>(cfg);
      const auto basis = top_eigen(k, 1, popts);
      align[cfg] = alignment(basis, sample.truth.v, 0, 1);
    }
    worst = std::max(worst, std::abs(align[0] - align[1]));
    detail += strf(" %.4f/%.4f", align[0], align[1]);
  }
  const bool pass = worst <= 0.03;
  return {pass, strf("per-seed alignments (eps_s=0.2,eps_b=1 vs eps_s=1,"
                     "eps_b=0.04):%s; worst |diff| %.4f (tol 0.03; "
                     "predictions %.4f vs %.4f)",
                     detail.c_str(), worst, za, zb)};
}

// ---------------------------------------------------------------------------
// criterion 10: flop and storage accounting match the mask budgets
// ---------------------------------------------------------------------------
Outcome crit10() {
  const std::size_t n = 500, p = 500;
  const double configs[2][2] = {{0.3, 0.5}, {0.6, 0.15}};
  const int diags[2] = {1, 0};
  double worst_ratio = 0.0, worst_sigmas = 0.0;
  for (int c = 0; c < 2; ++c) {
    const double eps_s = configs[c][0], eps_b = configs[c][1];
    MaskConfig mc;
    mc.eps_s = eps_s;
    mc.eps_b = eps_b;
    mc.b_diag = diags[c];
    for (int seed = 0; seed < 10; ++seed) {
      mc.seed = 10100 + static_cast<std::uint64_t>(c * 100 + seed);
      const auto x =
          random_data(p, n, 10200 + static_cast<std::uint64_t>(c * 100 + seed));
      const auto s = gen_data_mask(p, n, mc);
      const auto b = gen_kernel_mask(n, mc);
      const auto k = build_kernel(x, s, b);
      const double ratio =
          static_cast<double>(k.flop_count) /
          (static_cast<double>(n) * static_cast<double>(n) *
           static_cast<double>(p));
      worst_ratio = std::max(
          worst_ratio, std::abs(ratio / (eps_s * eps_s * eps_b) - 1.0));
      const double pairs = static_cast<double>(n) * (n - 1) / 2.0;
      const double sigma = std::sqrt(pairs * eps_b * (1.0 - eps_b));
      const double expect = eps_b * pairs;
      worst_sigmas = std::max(
          worst_sigmas,
          std::abs(static_cast<double>(k.stored_offdiag()) - expect) / sigma);
      const std::uint64_t want_entries =
          k.stored_offdiag() + (diags[c] == 1 ? n : 0);
      if (k.stored_entries() != want_entries)
        return {false, "stored_entries bookkeeping mismatch"};
    }
  }
  const bool pass = worst_ratio <= 0.10 && worst_sigmas <= 3.0;
  return {pass, strf("flops/(n^2 p) within %.3f relative of eps_s^2 eps_b "
                     "(tol 0.10); stored off-diagonal within %.2f sigma of "
                     "eps_b n(n-1)/2 (tol 3), 2 configs x 10 seeds",
                     worst_ratio, worst_sigmas)};
}

// ---------------------------------------------------------------------------
// criterion 11: the two closed forms of the alignment agree
// ---------------------------------------------------------------------------
Outcome crit11() {
  CounterRng rng(1101, CounterRng::kSizes);
  std::uint64_t ctr = 0;
  double worst = 0.0;
  int kept = 0;
  while (kept < 1000) {
    TheoryParams tp;
    tp.eps_s = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.eps_b = 0.05 + 0.95 * rng.uniform(ctr++);
    tp.b_diag = rng.uniform(ctr++) < 0.5 ? 0 : 1;
    tp.c0 = 0.1 * std::pow(20.0, rng.uniform(ctr++));
    const double gamma = gamma_threshold(tp);
    const double ell = gamma * (1.01 + 10.0 * rng.uniform(ctr++));
    const auto zc = zeta_from_f_identity_check(tp, ell);
    worst = std::max(worst, zc.rel_diff);
    ++kept;
  }
  const bool pass = worst <= 1e-10;
  return {pass, strf("1000 supercritical draws: worst relative discrepancy "
                     "%.2e between the two alignment forms (tol 1e-10)",
                     worst)};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 11) {
        std::cerr << "error: --only expects a criterion in 1..11\n";
        return 2;
      }
    } else if (arg == "--help") {
      std::cout << "usage: acceptance [--only N]\n";
      return 0;
    } else {
      std::cerr << "error: unknown argument '" << arg << "'\n";
      return 2;
    }
  }

  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry table[] = {
      {1, "sparse assembly equals dense reference", crit1},
      {2, "full-mask square-Gram reduction", crit2},
      {3, "sparse-mask semicircle reduction", crit3},
      {4, "fixed-point solver residuals", crit4},
      {5, "isolated eigenvalue locations", crit5},
      {6, "eigenvector alignment", crit6},
      {7, "subcritical phase transition", crit7},
      {8, "clustering error sweep", crit8},
      {9, "matched mask-budget invariance", crit9},
      {10, "flop and storage accounting", crit10},
      {11, "alignment identity", crit11},
  };

  bool all = true;
  for (const auto& entry : table) {
    if (only != 0 && entry.id != only) continue;
    const auto t0 = Clock::now();
    Outcome oc;
    try {
      oc = entry.fn();
    } catch (const std::exception& e) {
      oc = {false, strf("unhandled exception: %s", e.what())};
    }
    std::cout << (oc.pass ? "[PASS]" : "[FAIL]") << " criterion " << entry.id
              << ": " << entry.name << " — " << oc.detail << " ["
              << strf("%.1f", seconds_since(t0)) << " s]" << std::endl;
    all = all && oc.pass;
  }
  return all ? 0 : 1;
}
