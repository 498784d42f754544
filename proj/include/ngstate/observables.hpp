#pragma once

// Global (basis independent) observables: ln Z, correlation entropy, the
// four-point ratio C4 / 2F^2 and the single-component purity.

#include <cmath>

#include "ngstate/errors.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

namespace ngstate {

/// ln Z / N.
inline double ln_z_per_dof(const ReducedState& st) {
  const double two_n1 = 2.0 * st.n + 1.0;
  return 0.5 * (std::log(st.n) + std::log1p(st.n)) + 0.25 * st.x * st.kappa * two_n1 * two_n1;
}

/// S / N, the same for every x.
inline double entropy_per_dof(double n) {
  if (!(n >= 0)) throw domain_error("entropy_per_dof: n must be >= 0");
  if (n == 0.0) return 0.0;
  return (n + 1.0) * std::log1p(n) - n * std::log(n);
}

/// Thresholds of the C4 dispatch.
inline constexpr double c4_small_n = 1e-8;
inline constexpr double c4_small_x = 1e-12;

/// Large-n limit of C4 / 2F^2, -2x/(1+2x).
inline double c4_ratio_large_n(double x) { return -2.0 * x / (1.0 + 2.0 * x); }

/// Small-n limit of C4 / 2F^2, -x/(1+x+sqrt(1+x)).
inline double c4_ratio_small_n(double x) { return -x / (1.0 + x + std::sqrt(1.0 + x)); }

/// Linear (near Gaussian) form of C4 / 2F^2.
inline double c4_ratio_linear(double n, double x) {
  const double zeta = 1.0 + 2.0 * kappa_of(n) * n * (n + 1.0);
  const double two_n1 = 2.0 * n + 1.0;
  return -x / (2.0 * two_n1 * two_n1) * (1.0 + 2.0 * n * (n + 1.0) * (3.0 * zeta + 2.0));
}

namespace detail {

// f(1) - f(sqrt(1+x)) with f(y) = coth(y L) / 2y, written as a sum of
// non-negative terms so small x loses no digits.
inline double c4_f_difference(double L, double x) {
  const double y = std::sqrt(1.0 + x);
  const double d = x / (y + 1.0);  // y - 1
  const double coth_l = 1.0 / std::tanh(L);
  if (d < 0.5) {
    // coth L - coth yL = sinh(dL) / (sinh L sinh yL)
    const double coth_diff = std::sinh(d * L) / (std::sinh(L) * std::sinh(y * L));
    return (d * coth_l + coth_diff) / (2.0 * y);
  }
  return 0.5 * coth_l - 0.5 / (y * std::tanh(y * L));
}

}  // namespace detail

/// C4 / 2F^2 for occupation n >= 0 and strength x >= 0.
inline double c4_ratio(double n, double x) {
  if (!(n >= 0) || !(x >= 0)) throw domain_error("c4_ratio: requires n >= 0 and x >= 0");
  if (x == 0.0) return 0.0;
  if (n < c4_small_n) return c4_ratio_small_n(x);
  if (x < c4_small_x) return c4_ratio_linear(n, x);
  const double L = std::log1p(1.0 / n);
  const double kappa = L / (2.0 * n + 1.0);
  const double zeta_m1 = 2.0 * kappa * n * (n + 1.0);
  const double zeta = 1.0 + zeta_m1;
  // zeta^2/(1+zeta x) - 1/(1+x), again as non-negative pieces
  const double bracket =
      (zeta_m1 * (zeta + 1.0) + x * zeta * zeta_m1) / ((1.0 + zeta * x) * (1.0 + x));
  const double inner = 2.0 / x * detail::c4_f_difference(L, x) + bracket / L;
  return -x / (2.0 * n + 1.0) * inner;
}

inline double c4_ratio(const ReducedState& st) { return c4_ratio(st.n, st.x); }

struct PurityReport {
  double p = 1.0;
  double p_gaussian = 1.0;
  double ratio = 1.0;
  double n_tilde = 0.0;
  double kappa_tilde = 0.0;
  double ln_p = 0.0;
};

inline PurityReport purity(const ReducedState& st) {
  PurityReport rep;
  const double n = st.n;
  rep.p_gaussian = 1.0 / (2.0 * n + 1.0);
  if (st.x == 0.0) {
    rep.p = rep.p_gaussian;
    rep.ln_p = -std::log1p(2.0 * n);
    rep.ratio = 1.0;
    rep.n_tilde = n;
    rep.kappa_tilde = st.kappa;
    return rep;
  }
  const auto sol = solve_gap_tilde(st);
  const double zt = std::sqrt(sol.s);
  const double nt = 1.0 / std::expm1(zt);
  const double kt = specfun::h_trace(sol.s);
  const double q = nt * (nt + 1.0);
  const double frac = (1.0 + 2.0 * q) / (1.0 + 4.0 * q);
  const double k_ratio = st.kappa / kt;
  const double two_n1 = 2.0 * n + 1.0;
  const double exponent =
      -0.5 * st.x * st.kappa * two_n1 * two_n1 * (1.0 - k_ratio * k_ratio * frac * frac);
  rep.ln_p = -std::log1p(2.0 * nt) + std::log(nt) + std::log1p(nt) - std::log(n) -
             std::log1p(n) + exponent;
  rep.p = std::exp(rep.ln_p);
  rep.ratio = std::exp(rep.ln_p + std::log1p(2.0 * n));
  rep.n_tilde = nt;
  rep.kappa_tilde = kt;
  return rep;
}

/// Purity as a function of (n, x) including the pure-state boundary n = 0,
/// where p = 1 for every x.
inline double purity_value(double n, double x) {
  if (n == 0.0) return 1.0;
  return purity(ReducedState::make(n, x)).p;
}

struct PurityLimit {
  double n_tilde_over_n = 1.0;
  double ratio = 1.0;
};

/// n >> 1 closed forms of n~/n and p/p0.
inline PurityLimit purity_limit_large_n(double x) {
  if (!(x >= 0)) throw domain_error("purity_limit_large_n: x must be >= 0");
  PurityLimit out;
  const double sq = 2.0 / (1.0 + 1.0 / (std::sqrt(1.0 + 4.0 * x * x) + 2.0 * x));
  out.n_tilde_over_n = std::sqrt(sq);
  out.ratio = out.n_tilde_over_n * std::exp(-x * (1.0 - 0.25 * sq * sq));
  return out;
}

}  // namespace ngstate
