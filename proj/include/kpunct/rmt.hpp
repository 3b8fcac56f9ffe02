#pragma once

#include <complex>
#include <vector>

#include "kpunct/errors.hpp"

namespace kpunct {

// Limiting-spectrum parameters: data-mask rate eps_s, kernel-mask rate eps_b,
// kernel diagonal b, and dimension ratio c0 = p / n.
struct TheoryParams {
  double eps_s = 1.0;
  double eps_b = 1.0;
  int b_diag = 1;
  double c0 = 1.0;

  void validate() const;
};

struct StieltjesValue {
  std::complex<double> z;
  std::complex<double> m;
  double residual = 0.0;  // |defining equation| at the returned m
};

struct SpectralDensity {
  std::vector<double> x;
  std::vector<double> nu;
  double eta = 1e-4;  // imaginary offset used to read the density off m
};

struct SpikePrediction {
  double ell = 0.0;    // population spike
  double gamma = 0.0;  // detectability threshold
  double rho = 0.0;    // predicted isolated eigenvalue (bulk edge if not)
  double zeta = 0.0;   // predicted squared alignment (0 if not isolated)
  bool isolated = false;
};

struct ZetaCheck {
  double zeta_f = 0.0;      // route through the threshold polynomial
  double zeta_terms = 0.0;  // expanded four-term closed form
  double rel_diff = 0.0;
};

struct SmallEpsSummary {
  double center = 0.0;        // bulk center eps_s * b
  double radius = 0.0;        // bulk radius 2 sqrt(eps_b eps_s^2 / c0)
  double gamma_approx = 0.0;  // sqrt(c0 / (eps_b eps_s^2))
  double ell_prime = 0.0;     // ell / gamma_approx
  double rho_approx = 0.0;    // center + (radius/2) (ell' + 1/ell')
  double zeta_approx = 0.0;   // max(0, 1 - 1/ell'^2)
};

// Solves the deterministic-equivalent equation for the Stieltjes transform
// of the limiting spectrum at z.  Im z > 0 is solved directly (closed-form
// cubic, Herglotz branch); real z is reached by analytic continuation along
// a vertical descent, which is only meaningful outside the bulk support or
// as the boundary density value.
StieltjesValue solve_stieltjes(const TheoryParams& tp, std::complex<double> z);

// Density grid read off Im m(x + i eta) / pi; values below 1e-12 are
// clamped to zero.
SpectralDensity limiting_density(const TheoryParams& tp,
                                 const std::vector<double>& grid,
                                 double eta = 1e-4);

// Quartic whose largest real root is the spike-detectability threshold.
double f_poly(const TheoryParams& tp, double t);

// Isolated-eigenvalue map ell -> rho; at the threshold it gives the right
// bulk edge.
double g_spike(const TheoryParams& tp, double t);

double gamma_threshold(const TheoryParams& tp);

SpikePrediction spike_prediction(const TheoryParams& tp, double ell);

// Evaluates the alignment two independent ways and reports the discrepancy.
ZetaCheck zeta_from_f_identity_check(const TheoryParams& tp, double ell);

// Limiting two-class sign-clustering error Q(sqrt(zeta / (1 - zeta))).
double clustering_error(double zeta);

SmallEpsSummary small_eps_summary(const TheoryParams& tp, double ell);

}  // namespace kpunct
