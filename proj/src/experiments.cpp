#include "kpunct/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "kpunct/eigs.hpp"
#include "kpunct/histogram.hpp"
#include "kpunct/io.hpp"
#include "kpunct/kernel.hpp"
#include "kpunct/masks.hpp"
#include "kpunct/rng.hpp"
#include "kpunct/svg.hpp"

namespace kpunct {

namespace fs = std::filesystem;

namespace {

fs::path ensure_outdir(const std::string& out) {
  fs::path dir(out.empty() ? std::string(".") : out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + out + "'");
  return dir;
}

std::string join(const fs::path& dir, const std::string& name) {
  return (dir / name).string();
}

double ratio_c0(std::size_t p, std::size_t n) {
  if (p == 0 || n == 0) throw DimensionError("p and n must be positive");
  return static_cast<double>(p) / static_cast<double>(n);
}

// One deterministic seed per (grid point, repetition).
std::uint64_t rep_seed(std::uint64_t base, std::size_t point, std::size_t rep) {
  return CounterRng::mix(base ^ (point * 1000003ull + rep + 1));
}

struct TwoClassRun {
  double lambda1 = 0.0;
  double align = std::numeric_limits<double>::quiet_NaN();
  double pe = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
};

// Shared Monte-Carlo step: symmetric two-class mixture with ||mu||^2 = ell,
// punctured kernel, leading eigenvector, sign readout.
TwoClassRun run_two_class(std::size_t p, std::size_t n, double ell,
                          const MaskConfig& mc, double tol) {
  GmmModel model;
  model.means = pm_means(p, ell);
  model.proportions = {0.5, 0.5};
  model.seed = mc.seed;
  const SynthSample<double> sample = sample_gmm<double>(model, n);

  const DataMask s = gen_data_mask(p, n, mc);
  const KernelMask b = gen_kernel_mask(n, mc);
  const PuncturedKernel<double> k = build_kernel(sample.x, s, b);

  PowerOptions opts;
  opts.tol = tol;
  opts.max_iter = 20000;
  opts.seed = mc.seed;

  TwoClassRun r;
  try {
    const EigenBasis<double> basis = top_eigen(k, 1, opts);
    r.lambda1 = basis.pairs[0].value;
    r.align = alignment(basis, sample.truth.v, 0, 1);
    r.pe = classify_by_sign(basis.pairs[0].vector,
                            pm_labels(sample.truth.labels));
    r.converged = true;
  } catch (const ConvergenceError&) {
    // No isolated eigenvalue to converge to; leave the empirical columns
    // as NaN rather than report a vector that never settled.
  }
  return r;
}

std::string axis_name(SweepConfig::Axis a) {
  switch (a) {
    case SweepConfig::Axis::eps_b: return "eps_b";
    case SweepConfig::Axis::eps_s: return "eps_s";
    default: return "ell";
  }
}

}  // namespace

std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw ConfigError("grid needs at least one point");
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

std::vector<double> logspace(double lo, double hi, std::size_t points) {
  if (lo <= 0.0 || hi <= 0.0)
    throw ConfigError("log grid endpoints must be positive");
  std::vector<double> g = linspace(std::log(lo), std::log(hi), points);
  for (double& v : g) v = std::exp(v);
  if (points >= 2) g.back() = hi;
  return g;
}

Eigen::MatrixXd pm_means(std::size_t p, double ell) {
  if (p == 0) throw DimensionError("p must be positive");
  if (!(ell > 0.0)) throw ConfigError("spike ell must be positive");
  Eigen::MatrixXd means(static_cast<Eigen::Index>(p), 2);
  const double v = std::sqrt(ell / static_cast<double>(p));
  means.col(0).setConstant(v);
  means.col(1).setConstant(-v);
  return means;
}

Eigen::MatrixXd gaussian_means2(std::size_t p, double c11, double c12,
                                double c22, std::uint64_t seed) {
  if (p == 0) throw DimensionError("p must be positive");
  const double a = c11 / static_cast<double>(p);
  const double o = c12 / static_cast<double>(p);
  const double d = c22 / static_cast<double>(p);
  if (!(a > 0.0) || !(d - o * o / a > 0.0))
    throw ConfigError("mean covariance must be positive definite");
  // Cholesky factor of the 2x2 covariance.
  const double l11 = std::sqrt(a);
  const double l21 = o / l11;
  const double l22 = std::sqrt(d - l21 * l21);

  CounterRng rng(seed, CounterRng::kMeans);
  Eigen::MatrixXd means(static_cast<Eigen::Index>(p), 2);
  for (std::size_t i = 0; i < p; ++i) {
    const auto [g1, g2] = rng.normal2(i);
    means(static_cast<Eigen::Index>(i), 0) = l11 * g1;
    means(static_cast<Eigen::Index>(i), 1) = l21 * g1 + l22 * g2;
  }
  return means;
}

int cmd_theory(const TheoryConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg.out);
  TheoryParams tp{cfg.eps_s, cfg.eps_b, cfg.b, ratio_c0(cfg.p, cfg.n)};
  tp.validate();

  const double gamma = gamma_threshold(tp);
  const double edge = g_spike(tp, gamma);
  const double sb = cfg.eps_s * cfg.b;

  SvgPlot plot;
  plot.set_title("limiting spectrum");
  plot.set_xlabel("x");
  plot.set_ylabel("density");

  if (cfg.grid_points > 0) {
    double lo = cfg.grid_min, hi = cfg.grid_max;
    if (!(lo < hi)) {
      const double half = 1.15 * (edge - sb);
      lo = sb - half;
      hi = sb + half;
    }
    const std::vector<double> grid = linspace(lo, hi, cfg.grid_points);
    const SpectralDensity den = limiting_density(tp, grid, cfg.eta);
    CsvWriter csv({"x", "nu"});
    for (std::size_t i = 0; i < den.x.size(); ++i)
      csv.add_row({den.x[i], den.nu[i]});
    csv.save(join(dir, "density.csv"));
    plot.add_curve(den.x, den.nu);
    std::printf("wrote %s\n", join(dir, "density.csv").c_str());
  }

  if (!cfg.ells.empty()) {
    CsvWriter csv({"ell", "gamma", "rho", "zeta", "pe", "isolated"});
    for (double ell : cfg.ells) {
      const SpikePrediction sp = spike_prediction(tp, ell);
      csv.add_row({sp.ell, sp.gamma, sp.rho, sp.zeta, clustering_error(sp.zeta),
                   sp.isolated ? 1.0 : 0.0});
      if (sp.isolated) plot.add_vline(sp.rho, "#2ca02c");
    }
    csv.save(join(dir, "spikes.csv"));
    std::printf("wrote %s\n", join(dir, "spikes.csv").c_str());
  }

  plot.save(join(dir, "theory.svg"));
  std::printf("wrote %s\n", join(dir, "theory.svg").c_str());
  std::printf("c0=%g eps_s=%g eps_b=%g b=%d gamma=%.6g right_edge=%.6g\n",
              tp.c0, tp.eps_s, tp.eps_b, tp.b_diag, gamma, edge);
  return 0;
}

int cmd_spectrum(const SpectrumConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg.out);
  TheoryParams tp{cfg.eps_s, cfg.eps_b, cfg.b, ratio_c0(cfg.p, cfg.n)};
  tp.validate();
  if (!(cfg.pi1 > 0.0 && cfg.pi1 < 1.0))
    throw ConfigError("pi1 must lie strictly between 0 and 1");

  GmmModel model;
  model.means = gaussian_means2(cfg.p, cfg.mcov11, cfg.mcov12, cfg.mcov22,
                                cfg.seed);
  model.proportions = {cfg.pi1, 1.0 - cfg.pi1};
  model.seed = cfg.seed;
  const SynthSample<double> sample = sample_gmm<double>(model, cfg.n);

  MaskConfig mc{cfg.eps_s, cfg.eps_b, cfg.b, cfg.seed};
  const DataMask s = gen_data_mask(cfg.p, cfg.n, mc);
  const KernelMask b = gen_kernel_mask(cfg.n, mc);
  const PuncturedKernel<double> k = build_kernel(sample.x, s, b);

  const Eigen::VectorXd lambda = dense_eigenvalues(k, cfg.dense_guard);
  std::vector<double> lam(lambda.data(), lambda.data() + lambda.size());
  {
    CsvWriter csv({"lambda"});
    for (double v : lam) csv.add_row(std::vector<double>{v});
    csv.save(join(dir, "spectrum.csv"));
  }

  const double lmin = lam.back(), lmax = lam.front();
  const double pad = 0.05 * (lmax - lmin);
  const std::vector<double> grid = linspace(lmin - pad, lmax + pad, 512);
  const SpectralDensity den = limiting_density(tp, grid, cfg.eta);
  {
    CsvWriter csv({"x", "nu"});
    for (std::size_t i = 0; i < den.x.size(); ++i)
      csv.add_row({den.x[i], den.nu[i]});
    csv.save(join(dir, "density.csv"));
  }

  // Spike-by-spike comparison against the realized population values.
  const SpikeSpectrum& spikes = sample.truth.spikes;
  std::size_t iso_count = 0;
  std::vector<SpikePrediction> preds(spikes.blocks());
  for (std::size_t i = 0; i < spikes.blocks(); ++i) {
    if (spikes.values[i] > 0.0) {
      preds[i] = spike_prediction(tp, spikes.values[i]);
      if (preds[i].isolated)
        iso_count += static_cast<std::size_t>(spikes.multiplicity[i]);
    }
  }
  EigenBasis<double> basis;
  if (iso_count > 0) {
    PowerOptions opts;
    opts.tol = cfg.tol;
    opts.max_iter = 20000;
    opts.seed = cfg.seed;
    basis = top_eigen(k, iso_count, opts);
  }
  std::vector<double> emp_x, emp_y;
  {
    CsvWriter csv({"block", "ell", "multiplicity", "rho_pred", "lambda_emp",
                   "zeta_pred", "align_emp"});
    for (std::size_t i = 0; i < spikes.blocks(); ++i) {
      if (!(spikes.values[i] > 0.0)) continue;
      const std::size_t start = spikes.block_start(i);
      const auto mult = static_cast<std::size_t>(spikes.multiplicity[i]);
      double lemp = 0.0;
      for (std::size_t t = 0; t < mult; ++t)
        lemp += lam[start + t];
      lemp /= static_cast<double>(mult);
      double al = std::numeric_limits<double>::quiet_NaN();
      if (preds[i].isolated && start + mult <= basis.pairs.size())
        al = alignment(basis, sample.truth.v, start, mult);
      csv.add_row({static_cast<double>(i), spikes.values[i],
                   static_cast<double>(mult), preds[i].rho, lemp,
                   preds[i].zeta, al});
      emp_x.push_back(lemp);
      emp_y.push_back(0.0);
      std::printf("spike %zu: ell=%.6g rho=%.6g lambda=%.6g zeta=%.4g\n", i,
                  spikes.values[i], preds[i].rho, lemp, preds[i].zeta);
    }
    csv.save(join(dir, "spikes.csv"));
  }

  SvgPlot plot;
  plot.set_title("punctured-kernel spectrum");
  plot.set_xlabel("lambda");
  plot.set_ylabel("density");
  plot.add_bars(make_histogram(lam, cfg.bins));
  plot.add_curve(den.x, den.nu);
  if (!emp_x.empty()) plot.add_markers(emp_x, emp_y);
  for (const SpikePrediction& sp : preds)
    if (sp.isolated) plot.add_vline(sp.rho, "#2ca02c");
  plot.save(join(dir, "spectrum.svg"));

  std::printf("wrote %s, density.csv, spikes.csv, spectrum.svg\n",
              join(dir, "spectrum.csv").c_str());
  return 0;
}

int cmd_sweep(const SweepConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg.out);
  const double c0 = ratio_c0(cfg.p, cfg.n);
  if (cfg.points == 0) throw ConfigError("sweep needs at least one point");
  const std::vector<double> grid =
      cfg.log_scale ? logspace(cfg.from, cfg.to, cfg.points)
                    : linspace(cfg.from, cfg.to, cfg.points);

  std::vector<std::string> header = {"param", "eps_s", "eps_b", "ell",
                                     "gamma", "rho",   "zeta",  "pe_theory"};
  const bool mc = cfg.reps > 0;
  if (mc) {
    header.push_back("pe_emp");
    header.push_back("align_emp");
  }
  CsvWriter csv(header);

  std::vector<double> px, theory_y, emp_x, emp_y;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double eps_s = cfg.eps_s, eps_b = cfg.eps_b, ell = cfg.ell;
    switch (cfg.axis) {
      case SweepConfig::Axis::eps_b: eps_b = grid[g]; break;
      case SweepConfig::Axis::eps_s: eps_s = grid[g]; break;
      case SweepConfig::Axis::ell: ell = grid[g]; break;
    }
    if (cfg.constant_product > 0.0) {
      // Hold the variance proxy eps_s^2 eps_b fixed along the sweep.
      if (cfg.axis == SweepConfig::Axis::eps_b)
        eps_s = std::sqrt(cfg.constant_product / eps_b);
      else if (cfg.axis == SweepConfig::Axis::eps_s)
        eps_b = cfg.constant_product / (eps_s * eps_s);
    }
    TheoryParams tp{eps_s, eps_b, cfg.b, c0};
    tp.validate();
    const SpikePrediction sp = spike_prediction(tp, ell);
    const double pe = clustering_error(sp.zeta);

    std::vector<double> row = {grid[g], eps_s, eps_b, ell,
                               sp.gamma, sp.rho, sp.zeta, pe};
    if (mc) {
      double pe_sum = 0.0, al_sum = 0.0;
      std::size_t ok = 0;
      for (std::size_t r = 0; r < cfg.reps; ++r) {
        MaskConfig rmc{eps_s, eps_b, cfg.b, rep_seed(cfg.seed, g, r)};
        const TwoClassRun run =
            run_two_class(cfg.p, cfg.n, ell, rmc, cfg.tol);
        if (run.converged) {
          pe_sum += run.pe;
          al_sum += run.align;
          ++ok;
        }
      }
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.push_back(ok ? pe_sum / static_cast<double>(ok) : nan);
      row.push_back(ok ? al_sum / static_cast<double>(ok) : nan);
      if (ok) {
        emp_x.push_back(cfg.log_scale ? std::log10(grid[g]) : grid[g]);
        emp_y.push_back(row[8]);
      }
    }
    csv.add_row(row);
    px.push_back(cfg.log_scale ? std::log10(grid[g]) : grid[g]);
    theory_y.push_back(pe);
    std::printf("%s=%.6g gamma=%.6g zeta=%.4g pe=%.4g\n",
                axis_name(cfg.axis).c_str(), grid[g], sp.gamma, sp.zeta, pe);
  }
  csv.save(join(dir, "sweep.csv"));

  SvgPlot plot;
  plot.set_title("clustering error sweep");
  plot.set_xlabel(cfg.log_scale ? "log10 " + axis_name(cfg.axis)
                                : axis_name(cfg.axis));
  plot.set_ylabel("error probability");
  plot.add_curve(px, theory_y);
  if (!emp_x.empty()) plot.add_markers(emp_x, emp_y);
  plot.save(join(dir, "sweep.svg"));
  std::printf("wrote %s and sweep.svg\n", join(dir, "sweep.csv").c_str());
  return 0;
}

int cmd_cluster(const ClusterConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg.out);
  if (cfg.input.empty()) throw ConfigError("cluster needs an input matrix");

  // Sniff the container: binary matrices start with the PNCX magic.
  Eigen::MatrixXd x;
  {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) throw ConfigError("cannot open input '" + cfg.input + "'");
    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    const bool binary = in.gcount() == 4 && std::string(magic, 4) == "PNCX";
    in.close();
    x = binary ? load_matrix<double>(cfg.input) : load_matrix_csv(cfg.input);
  }
  const auto p = static_cast<std::size_t>(x.rows());
  const auto n = static_cast<std::size_t>(x.cols());
  if (p == 0 || n == 0) throw DataError("input matrix is empty");

  std::vector<int> labels;
  if (!cfg.labels_path.empty()) {
    std::ifstream in(cfg.labels_path);
    if (!in) throw ConfigError("cannot open labels '" + cfg.labels_path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        labels.push_back(std::stoi(line));
      } catch (const std::exception&) {
        throw DataError("labels must be integers, got '" + line + "'");
      }
    }
    if (labels.size() != n)
      throw DimensionError("labels count does not match sample count");
  }

  MaskConfig mc{cfg.eps_s, cfg.eps_b, cfg.b, cfg.seed};
  DataMask s;
  KernelMask b;
  if (!cfg.load_masks.empty()) {
    s = load_data_mask(cfg.load_masks + ".s.pncm");
    b = load_kernel_mask(cfg.load_masks + ".b.pncm");
    if (s.rows() != p || s.cols() != n || b.n != n)
      throw DimensionError("loaded masks do not match the input matrix");
  } else {
    mc.validate();
    s = gen_data_mask(p, n, mc);
    b = gen_kernel_mask(n, mc);
  }
  if (!cfg.save_masks.empty()) {
    save_data_mask(cfg.save_masks + ".s.pncm", s);
    save_kernel_mask(cfg.save_masks + ".b.pncm", b);
  }

  const PuncturedKernel<double> k = build_kernel(x, s, b);
  if (!cfg.save_kernel_path.empty()) save_kernel(cfg.save_kernel_path, k);

  PowerOptions opts;
  opts.tol = cfg.tol;
  opts.max_iter = cfg.max_iter;
  opts.seed = cfg.seed;
  const EigenBasis<double> basis = top_eigen(k, cfg.topk, opts);

  const double n2p = static_cast<double>(n) * static_cast<double>(n) *
                     static_cast<double>(p);
  CsvWriter csv({"key", "value"});
  auto put = [&csv](const std::string& key, double v) {
    csv.add_row({key, fmt17(v)});
  };
  put("n", static_cast<double>(n));
  put("p", static_cast<double>(p));
  put("eps_s", cfg.eps_s);
  put("eps_b", cfg.eps_b);
  put("b", cfg.b);
  put("seed", static_cast<double>(cfg.seed));
  put("stored_offdiag", static_cast<double>(k.stored_offdiag()));
  put("stored_entries", static_cast<double>(k.stored_entries()));
  put("flop_count", static_cast<double>(k.flop_count));
  put("flops_per_n2p", static_cast<double>(k.flop_count) / n2p);
  for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
    const std::string tag = std::to_string(i + 1);
    put("lambda_" + tag, basis.pairs[i].value);
    put("residual_" + tag, basis.pairs[i].residual);
    put("iterations_" + tag, static_cast<double>(basis.pairs[i].iterations));
  }
  if (!labels.empty()) {
    const double pe = classify_by_sign(basis.pairs[0].vector, labels);
    Eigen::VectorXd u(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      u[static_cast<Eigen::Index>(i)] = labels[i] > 0 ? 1.0 : -1.0;
    u /= std::sqrt(static_cast<double>(n));
    const double al = std::pow(basis.pairs[0].vector.dot(u), 2);
    put("pe_hat", pe);
    put("align_labels", al);
    std::printf("pe_hat=%.6g align_labels=%.6g\n", pe, al);
  }
  csv.save(join(dir, "result.csv"));

  {
    std::vector<std::string> header;
    for (std::size_t j = 0; j < basis.pairs.size(); ++j)
      header.push_back("v" + std::to_string(j + 1));
    CsvWriter vecs(header);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row;
      for (const auto& pair : basis.pairs)
        row.push_back(pair.vector[static_cast<Eigen::Index>(i)]);
      vecs.add_row(row);
    }
    vecs.save(join(dir, "vectors.csv"));
  }

  std::printf("lambda_1=%.8g stored=%llu flops=%llu\n",
              basis.pairs.empty() ? 0.0 : basis.pairs[0].value,
              static_cast<unsigned long long>(k.stored_entries()),
              static_cast<unsigned long long>(k.flop_count));
  std::printf("wrote %s and vectors.csv\n", join(dir, "result.csv").c_str());
  return 0;
}

int cmd_masks(const MasksConfig& cfg) {
  const fs::path dir = ensure_outdir(cfg.out);
  DataMask s;
  KernelMask b;
  if (cfg.load.empty()) {
    MaskConfig mc{cfg.eps_s, cfg.eps_b, cfg.b, cfg.seed};
    mc.validate();
    s = gen_data_mask(cfg.p, cfg.n, mc);
    b = gen_kernel_mask(cfg.n, mc);
    // same dot-prefix convention that --load and cluster --save-masks use,
    // so a generated pair reloads as --load <out>/masks
    save_data_mask(join(dir, "masks.s.pncm"), s);
    save_kernel_mask(join(dir, "masks.b.pncm"), b);
    std::printf("wrote %s and masks.b.pncm\n",
                join(dir, "masks.s.pncm").c_str());
  } else {
    s = load_data_mask(cfg.load + ".s.pncm");
    b = load_kernel_mask(cfg.load + ".b.pncm");
  }

  const double nn = static_cast<double>(b.n) * static_cast<double>(b.n);
  const double b_stored =
      static_cast<double>(b.stored_offdiag()) + (b.diag ? b.n : 0.0);
  const double b_density =
      (2.0 * static_cast<double>(b.stored_offdiag()) + (b.diag ? b.n : 0.0)) /
      nn;
  CsvWriter csv({"kind", "rows", "cols", "stored", "density"});
  csv.add_row({"s", fmt17(static_cast<double>(s.rows())),
               fmt17(static_cast<double>(s.cols())),
               fmt17(static_cast<double>(s.count())), fmt17(s.density())});
  csv.add_row({"b", fmt17(static_cast<double>(b.n)),
               fmt17(static_cast<double>(b.n)), fmt17(b_stored),
               fmt17(b_density)});
  csv.save(join(dir, "masks.csv"));
  std::printf("s: %zux%zu density=%.6g; b: %zux%zu density=%.6g\n", s.rows(),
              s.cols(), s.density(), b.n, b.n, b_density);
  std::printf("wrote %s\n", join(dir, "masks.csv").c_str());
  return 0;
}

}  // namespace kpunct
