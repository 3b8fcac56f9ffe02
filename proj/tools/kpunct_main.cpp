// kpunct: two-way Bernoulli puncturing of sample kernel matrices.
//
// Subcommands:
//   theory    closed-form limiting density, threshold and spike predictions
//   spectrum  one synthetic draw, full spectrum against the theory curve
//   sweep     threshold/error curves along one parameter axis (+ Monte Carlo)
//   cluster   run a user-supplied data matrix through the punctured pipeline
//   masks     generate or inspect mask files

#include <cstdio>
#include <exception>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "kpunct/errors.hpp"
#include "kpunct/experiments.hpp"

namespace {

void add_mask_rates(CLI::App* cmd, double& eps_s, double& eps_b, int& b) {
  cmd->add_option("--eps-s", eps_s, "data-mask keep rate in (0,1]")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--eps-b", eps_b, "kernel-mask keep rate in (0,1]")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--b", b, "kernel-mask diagonal value")
      ->check(CLI::Range(0, 1));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"punctured sample kernels: assembly, spectra and predictions"};
  app.require_subcommand(1);

  kpunct::TheoryConfig tc;
  CLI::App* theory = app.add_subcommand("theory", "closed-form predictions");
  theory->add_option("--n", tc.n, "sample count (sets c0 = p/n)");
  theory->add_option("--p", tc.p, "feature count (sets c0 = p/n)");
  add_mask_rates(theory, tc.eps_s, tc.eps_b, tc.b);
  theory->add_option("--grid-min", tc.grid_min, "density grid lower end");
  theory->add_option("--grid-max", tc.grid_max, "density grid upper end");
  theory->add_option("--grid-points", tc.grid_points,
                     "density grid size (0 skips the density)");
  theory->add_option("--eta", tc.eta, "imaginary offset for the density");
  theory->add_option("--ell", tc.ells,
                     "population spike(s) to predict (repeatable)");
  theory->add_option("--out", tc.out, "output directory");

  kpunct::SpectrumConfig sc;
  CLI::App* spectrum =
      app.add_subcommand("spectrum", "synthetic draw vs theory");
  spectrum->add_option("--n", sc.n, "sample count");
  spectrum->add_option("--p", sc.p, "feature count");
  add_mask_rates(spectrum, sc.eps_s, sc.eps_b, sc.b);
  spectrum->add_option("--seed", sc.seed, "random seed");
  spectrum->add_option("--tol", sc.tol, "eigensolver residual tolerance");
  spectrum->add_option("--mcov11", sc.mcov11, "class-mean covariance (1,1)");
  spectrum->add_option("--mcov12", sc.mcov12, "class-mean covariance (1,2)");
  spectrum->add_option("--mcov22", sc.mcov22, "class-mean covariance (2,2)");
  spectrum->add_option("--pi1", sc.pi1, "first class proportion");
  spectrum->add_option("--eta", sc.eta, "imaginary offset for the density");
  spectrum->add_option("--bins", sc.bins, "histogram bins (0 = automatic)");
  spectrum->add_option("--dense-guard", sc.dense_guard,
                       "largest n the dense eigensolver will accept");
  spectrum->add_option("--out", sc.out, "output directory");

  kpunct::SweepConfig wc;
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep");
  const std::map<std::string, kpunct::SweepConfig::Axis> axes{
      {"eps_b", kpunct::SweepConfig::Axis::eps_b},
      {"eps_s", kpunct::SweepConfig::Axis::eps_s},
      {"ell", kpunct::SweepConfig::Axis::ell}};
  sweep->add_option("--axis", wc.axis, "swept parameter")
      ->transform(CLI::CheckedTransformer(axes, CLI::ignore_case));
  sweep->add_option("--from", wc.from, "first grid value");
  sweep->add_option("--to", wc.to, "last grid value");
  sweep->add_option("--points", wc.points, "grid size");
  sweep->add_flag("--linear", [&wc](std::int64_t) { wc.log_scale = false; },
                  "linear instead of logarithmic grid");
  sweep->add_option("--n", wc.n, "sample count");
  sweep->add_option("--p", wc.p, "feature count");
  add_mask_rates(sweep, wc.eps_s, wc.eps_b, wc.b);
  sweep->add_option("--ell", wc.ell, "population spike");
  sweep->add_option("--constant-product", wc.constant_product,
                    "hold eps_s^2 eps_b at this value along the sweep");
  sweep->add_option("--reps", wc.reps,
                    "Monte-Carlo repetitions per point (0 = theory only)");
  sweep->add_option("--seed", wc.seed, "random seed");
  sweep->add_option("--tol", wc.tol, "eigensolver residual tolerance");
  sweep->add_option("--out", wc.out, "output directory");

  kpunct::ClusterConfig cc;
  CLI::App* cluster = app.add_subcommand("cluster", "cluster a data matrix");
  cluster->add_option("--input", cc.input, "data matrix (CSV or PNCX)")
      ->required();
  cluster->add_option("--labels", cc.labels_path,
                      "ground-truth +-1 labels, one per line");
  add_mask_rates(cluster, cc.eps_s, cc.eps_b, cc.b);
  cluster->add_option("--seed", cc.seed, "random seed");
  cluster->add_option("--topk", cc.topk, "eigenpairs to extract");
  cluster->add_option("--tol", cc.tol, "eigensolver residual tolerance");
  cluster->add_option("--max-iter", cc.max_iter, "iteration cap per pair");
  cluster->add_option("--save-masks", cc.save_masks,
                      "write .s.pncm/.b.pncm with this prefix");
  cluster->add_option("--load-masks", cc.load_masks,
                      "read .s.pncm/.b.pncm with this prefix");
  cluster->add_option("--save-kernel", cc.save_kernel_path,
                      "write the assembled kernel (PNCK)");
  cluster->add_option("--out", cc.out, "output directory");

  kpunct::MasksConfig kc;
  CLI::App* masks = app.add_subcommand("masks", "generate or inspect masks");
  masks->add_option("--p", kc.p, "data-mask rows");
  masks->add_option("--n", kc.n, "data-mask columns / kernel-mask size");
  add_mask_rates(masks, kc.eps_s, kc.eps_b, kc.b);
  masks->add_option("--seed", kc.seed, "random seed");
  masks->add_option("--load", kc.load,
                    "inspect masks under this prefix instead of generating");
  masks->add_option("--out", kc.out, "output directory");

  try {
    app.parse(argc, argv);
    if (theory->parsed()) return kpunct::cmd_theory(tc);
    if (spectrum->parsed()) return kpunct::cmd_spectrum(sc);
    if (sweep->parsed()) return kpunct::cmd_sweep(wc);
    if (cluster->parsed()) return kpunct::cmd_cluster(cc);
    if (masks->parsed()) return kpunct::cmd_masks(kc);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const kpunct::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const kpunct::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return 1;
  }
  return 0;
}
