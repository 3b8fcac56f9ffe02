#include "kpunct/rmt.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kpunct {

namespace {

using cd = std::complex<double>;

struct EqCoeffs {
  double alpha;  // eps_b eps_s / c0
  double beta;   // eps_b eps_s^2 / c0
  double gamma;  // eps_b^3 eps_s^3 / c0^2
  double sb;     // eps_s b

  explicit EqCoeffs(const TheoryParams& tp)
      : alpha(tp.eps_b * tp.eps_s / tp.c0),
        beta(tp.eps_b * tp.eps_s * tp.eps_s / tp.c0),
        gamma(tp.eps_b * tp.eps_b * tp.eps_b * tp.eps_s * tp.eps_s * tp.eps_s /
              (tp.c0 * tp.c0)),
        sb(tp.eps_s * tp.b_diag) {}

  // Defining equation rearranged to R(m; z) = 0.
  cd residual(cd m, cd z) const {
    return sb - 1.0 / m - beta * m + gamma * m * m / (1.0 + alpha * m) - z;
  }

  cd dresidual(cd m) const {
    const cd d = 1.0 + alpha * m;
    return 1.0 / (m * m) - beta + gamma * m * (2.0 + alpha * m) / (d * d);
  }

  // Multiplying the equation by m (1 + alpha m) clears both denominators and
  // leaves a cubic in m; the Herglotz solution is one of its roots.
  void cubic(cd z, cd out[4]) const {
    out[3] = cd(gamma - alpha * beta);
    out[2] = alpha * (sb - z) - beta;
    out[1] = sb - alpha - z;
    out[0] = -1.0;
  }
};

// Roots of a polynomial with complex coefficients (degree <= 3) via the
// companion matrix; degree drops are handled explicitly because the cubic
// coefficient vanishes identically at eps_b = 1.
void poly_roots(const cd c[4], std::vector<cd>& roots) {
  roots.clear();
  const double scale =
      std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
  if (scale == 0.0) return;
  const double tiny = 1e-14 * scale;
  if (std::abs(c[3]) > tiny) {
    Eigen::Matrix3cd comp = Eigen::Matrix3cd::Zero();
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    comp(0, 2) = -c[0] / c[3];
    comp(1, 2) = -c[1] / c[3];
    comp(2, 2) = -c[2] / c[3];
    Eigen::ComplexEigenSolver<Eigen::Matrix3cd> es(comp, false);
    for (int i = 0; i < 3; ++i) roots.push_back(es.eigenvalues()[i]);
  } else if (std::abs(c[2]) > tiny) {
    const cd disc = std::sqrt(c[1] * c[1] - 4.0 * c[2] * c[0]);
    roots.push_back((-c[1] + disc) / (2.0 * c[2]));
    roots.push_back((-c[1] - disc) / (2.0 * c[2]));
  } else if (std::abs(c[1]) > tiny) {
    roots.push_back(-c[0] / c[1]);
  }
}

cd newton_polish(const EqCoeffs& eq, cd m, cd z, int steps = 8) {
  for (int k = 0; k < steps; ++k) {
    const cd r = eq.residual(m, z);
    const cd d = eq.dresidual(m);
    if (std::abs(d) == 0.0) break;
    const cd next = m - r / d;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
    if (std::abs(next - m) <= 1e-16 * (1.0 + std::abs(next))) {
      m = next;
      break;
    }
    m = next;
  }
  return m;
}

double res_tol(cd z) { return 1e-12 * (1.0 + std::abs(z)); }

// Damped fixed point m <- 1 / (sb - z - beta m + gamma m^2/(1 + alpha m)),
// the fallback when root selection is ambiguous.
bool fixed_point(const EqCoeffs& eq, cd z, cd& m_out) {
  cd m = -1.0 / z;
  const double damp = 0.5;
  for (int k = 0; k < 20000; ++k) {
    const cd denom =
        eq.sb - z - eq.beta * m + eq.gamma * m * m / (1.0 + eq.alpha * m);
    if (std::abs(denom) == 0.0) return false;
    const cd next = (1.0 - damp) * m + damp / denom;
    if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
      return false;
    if (std::abs(next - m) <= 1e-15 * (1.0 + std::abs(next))) {
      m = next;
      break;
    }
    m = next;
  }
  m = newton_polish(eq, m, z);
  m_out = m;
  return std::abs(eq.residual(m, z)) <= res_tol(z);
}

// Closed-form solve at Im z > 0: polish every cleared-cubic root against the
// original equation, then keep the admissible (Im m > 0) root with the
// smallest residual.  Spurious roots introduced by clearing denominators
// fail the residual test and drop out.
cd solve_upper(const EqCoeffs& eq, cd z) {
  cd c[4];
  eq.cubic(z, c);
  std::vector<cd> roots;
  poly_roots(c, roots);
  cd best{};
  double best_res = std::numeric_limits<double>::infinity();
  for (cd r : roots) {
    if (std::abs(r) == 0.0) continue;
    const cd m = newton_polish(eq, r, z);
    if (m.imag() <= -1e-13 * (1.0 + std::abs(m))) continue;
    const double res = std::abs(eq.residual(m, z));
    if (res < best_res) {
      best_res = res;
      best = m;
    }
  }
  if (best_res <= res_tol(z)) return best;
  cd m;
  if (fixed_point(eq, z, m)) return m;
  throw BranchError("no admissible Stieltjes branch at z = (" +
                    std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                    ")");
}

// Real z: descend a vertical path from Im = 1, tracking the branch by
// nearest-root continuation, then polish on the real axis.
cd solve_real_axis(const EqCoeffs& eq, double x) {
  double eta = 1.0;
  cd m = solve_upper(eq, cd(x, eta));
  std::vector<cd> roots;
  while (eta > 1e-13) {
    eta *= 0.5;
    const cd z(x, eta);
    cd c[4];
    eq.cubic(z, c);
    poly_roots(c, roots);
    cd nearest = m;
    double best = std::numeric_limits<double>::infinity();
    for (cd r : roots) {
      const double d = std::abs(r - m);
      if (d < best) {
        best = d;
        nearest = r;
      }
    }
    m = newton_polish(eq, nearest, z);
  }
  m = newton_polish(eq, m, cd(x, 0.0), 16);
  if (std::abs(eq.residual(m, cd(x, 0.0))) > res_tol(cd(x, 0.0)))
    throw BranchError("analytic continuation failed at z = " +
                      std::to_string(x));
  return m;
}

}  // namespace

void TheoryParams::validate() const {
  if (!(eps_s > 0.0) || eps_s > 1.0)
    throw ConfigError("eps_s must lie in (0, 1]");
  if (!(eps_b > 0.0) || eps_b > 1.0)
    throw ConfigError("eps_b must lie in (0, 1]");
  if (b_diag != 0 && b_diag != 1) throw ConfigError("b must be 0 or 1");
  if (!(c0 > 0.0) || !std::isfinite(c0))
    throw ConfigError("c0 = p/n must be positive and finite");
}

StieltjesValue solve_stieltjes(const TheoryParams& tp, std::complex<double> z) {
  tp.validate();
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw ConfigError("z must be finite");
  if (z.imag() < 0.0)
    throw ConfigError("z must lie in the closed upper half-plane");
  const EqCoeffs eq(tp);
  StieltjesValue out;
  out.z = z;
  out.m = z.imag() > 0.0 ? solve_upper(eq, z) : solve_real_axis(eq, z.real());
  out.residual = std::abs(eq.residual(out.m, z));
  return out;
}

SpectralDensity limiting_density(const TheoryParams& tp,
                                 const std::vector<double>& grid, double eta) {
  tp.validate();
  if (!(eta > 1e-6) || eta > 1e-2)
    throw ConfigError("eta must lie in (1e-6, 1e-2]");
  const EqCoeffs eq(tp);
  SpectralDensity d;
  d.eta = eta;
  d.x = grid;
  d.nu.resize(grid.size());
  const double inv_pi = 1.0 / 3.14159265358979323846;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cd m = solve_upper(eq, cd(grid[i], eta));
    double v = std::max(0.0, m.imag() * inv_pi);
    if (v < 1e-12) v = 0.0;
    d.nu[i] = v;
  }
  return d;
}

double f_poly(const TheoryParams& tp, double t) {
  const double es = tp.eps_s;
  return ((t + 2.0 / es) * t + (1.0 - tp.c0 / tp.eps_b) / (es * es)) * t * t -
         2.0 * tp.c0 / (es * es * es) * t - tp.c0 / (es * es * es * es);
}

double g_spike(const TheoryParams& tp, double t) {
  const double es = tp.eps_s;
  const double u = 1.0 + es * t;
  return es * tp.b_diag + tp.eps_b * es * u / tp.c0 + es / u +
         tp.eps_b / (t * u);
}

double gamma_threshold(const TheoryParams& tp) {
  tp.validate();
  // Leading-order scale of the threshold; the quartic is positive for all
  // t beyond its largest real root, so bracket from the far right.
  const double approx = std::sqrt(tp.c0 / (tp.eps_b * tp.eps_s * tp.eps_s));
  double hi = 10.0 * approx;
  int grow = 0;
  while (f_poly(tp, hi) <= 0.0) {
    hi *= 2.0;
    if (++grow > 200) throw BranchError("threshold bracket failed to grow");
  }
  // Walk down to the first sign change, then bisect.
  const int steps = 4096;
  double lo = 0.0;
  bool found = false;
  double prev = hi;
  for (int k = 1; k <= steps; ++k) {
    const double t = hi * (1.0 - static_cast<double>(k) / steps);
    if (t <= 0.0 || f_poly(tp, t) <= 0.0) {
      lo = std::max(t, std::numeric_limits<double>::min());
      found = true;
      break;
    }
    prev = t;
  }
  if (!found) throw BranchError("threshold sign change not found");
  double a = lo, b = prev;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (a + b);
    if (mid == a || mid == b) break;
    if (f_poly(tp, mid) <= 0.0)
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

SpikePrediction spike_prediction(const TheoryParams& tp, double ell) {
  tp.validate();
  if (!(ell > 0.0) || !std::isfinite(ell))
    throw ConfigError("spike ell must be positive and finite");
  SpikePrediction sp;
  sp.ell = ell;
  sp.gamma = gamma_threshold(tp);
  sp.isolated = ell > sp.gamma;
  if (sp.isolated) {
    sp.rho = g_spike(tp, ell);
    const double u = 1.0 + tp.eps_s * ell;
    sp.zeta = f_poly(tp, ell) * tp.eps_s * tp.eps_s * tp.eps_s / (ell * u * u * u);
  } else {
    sp.rho = g_spike(tp, sp.gamma);
    sp.zeta = 0.0;
  }
  return sp;
}

ZetaCheck zeta_from_f_identity_check(const TheoryParams& tp, double ell) {
  tp.validate();
  if (!(ell > 0.0)) throw ConfigError("spike ell must be positive");
  const double es = tp.eps_s;
  const double u = es * ell;
  const double q = 1.0 + u;
  const double cb = tp.eps_b / tp.c0;  // c0^{-1} eps_b
  ZetaCheck zc;
  zc.zeta_f = f_poly(tp, ell) * es * es * es / (ell * q * q * q);
  zc.zeta_terms = u / q - u / (cb * q * q * q) - tp.c0 / (q * q * q) -
                  tp.c0 / (u * q * q);
  const double scale = std::max({std::abs(zc.zeta_f), std::abs(zc.zeta_terms),
                                 std::numeric_limits<double>::min()});
  zc.rel_diff = std::abs(zc.zeta_f - zc.zeta_terms) / scale;
  return zc;
}

double clustering_error(double zeta) {
  if (!(zeta >= 0.0) || zeta >= 1.0)
    throw ConfigError("zeta must lie in [0, 1)");
  const double t = std::sqrt(zeta / (1.0 - zeta));
  return 0.5 * std::erfc(t / std::sqrt(2.0));
}

SmallEpsSummary small_eps_summary(const TheoryParams& tp, double ell) {
  tp.validate();
  if (!(ell > 0.0)) throw ConfigError("spike ell must be positive");
  SmallEpsSummary s;
  s.center = tp.eps_s * tp.b_diag;
  s.radius = 2.0 * std::sqrt(tp.eps_b * tp.eps_s * tp.eps_s / tp.c0);
  s.gamma_approx = std::sqrt(tp.c0 / (tp.eps_b * tp.eps_s * tp.eps_s));
  s.ell_prime = ell / s.gamma_approx;
  s.rho_approx = s.ell_prime > 1.0
                     ? s.center + 0.5 * s.radius * (s.ell_prime + 1.0 / s.ell_prime)
                     : s.center + s.radius;
  s.zeta_approx =
      s.ell_prime > 1.0 ? 1.0 - 1.0 / (s.ell_prime * s.ell_prime) : 0.0;
  return s;
}

}  // namespace kpunct
