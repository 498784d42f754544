#pragma once

// Measured correlators, density-operator coefficients and the reduced (n, x)
// coordinates, together with the algebraic map between them.

#include <cmath>
#include <limits>
#include <string>

#include "ngstate/errors.hpp"

namespace ngstate {

/// Per-component two-point data, hbar = 1:
/// F = <phi phi>, K = <pi pi>, R = <phi pi + pi phi> / 2.
struct GaussianMoments {
  double F = 0.0;
  double K = 0.0;
  double R = 0.0;
};

/// Coefficients of the exponent A pi.pi + B phi.phi + C (phi.pi + pi.phi)
/// + (eta/N) (phi.phi)^2.
struct OperatorParams {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double eta = 0.0;

  double b_prime() const { return B - C * C / A; }
  /// Gaussian squared frequency 4 A B'. Either sign once eta > 0.
  double z0_sq() const { return 4.0 * A * b_prime(); }
  double xi() const { return 8.0 * A * A * eta; }
};

/// ln(1 + 1/n) / (2n + 1).
inline double kappa_of(double n) {
  if (!(n > 0)) throw domain_error("kappa: requires n > 0");
  return std::log1p(1.0 / n) / (2.0 * n + 1.0);
}

/// The intrinsic pair (n, x) and the quantities derived from it. Everything
/// basis-independent depends on these two numbers only.
struct ReducedState {
  double n = 0.0;
  double x = 0.0;
  double kappa = 0.0;
  double zeta = 0.0;   ///< 1 + 2 kappa n (n+1)
  double z0_sq = 0.0;  ///< ln^2(1+1/n) (1 - 2x)
  double xi = 0.0;     ///< 8 x kappa^3 (n + 1/2)^2

  static ReducedState make(double n, double x) {
    if (!(n > 0) || !std::isfinite(n)) {
      throw domain_error("ReducedState: requires finite n > 0, got " + std::to_string(n));
    }
    if (!(x >= 0) || !std::isfinite(x)) {
      throw domain_error("ReducedState: requires finite x >= 0, got " + std::to_string(x));
    }
    ReducedState st;
    st.n = n;
    st.x = x;
    st.kappa = kappa_of(n);
    st.zeta = 1.0 + 2.0 * st.kappa * n * (n + 1.0);
    const double log_ratio = std::log1p(1.0 / n);
    st.z0_sq = log_ratio * log_ratio * (1.0 - 2.0 * x);
    const double half = n + 0.5;
    st.xi = 8.0 * x * st.kappa * st.kappa * st.kappa * half * half;
    return st;
  }

  /// ln(1 + 1/n), the trace saddle frequency z.
  double log_ratio() const { return std::log1p(1.0 / n); }
  bool gaussian() const { return x == 0.0; }
};

/// n + 1/2 = sqrt(F K - R^2).
inline double occupation(const GaussianMoments& m) {
  if (!(m.F > 0) || !(m.K > 0)) {
    throw domain_error("occupation: F and K must be positive");
  }
  const double det = m.F * m.K - m.R * m.R;
  // a few ulps of slack so that the pure-state boundary itself is accepted
  if (det < 0.25 * (1.0 - 8.0 * std::numeric_limits<double>::epsilon())) {
    throw heisenberg_violation("F K - R^2 = " + std::to_string(det) + " < 1/4");
  }
  return std::max(0.0, std::sqrt(std::max(det, 0.25)) - 0.5);
}

/// Operator coefficients for given moments, non-Gaussianity x and an
/// explicitly supplied kappa. params_from_moments passes kappa(n).
inline OperatorParams params_with_kappa(const GaussianMoments& m, double n, double x,
                                        double kappa) {
  const double half = n + 0.5;
  OperatorParams p;
  p.A = kappa * m.F;
  p.C = -kappa * m.R;
  p.eta = x * kappa * half * half / (m.F * m.F);
  p.B = kappa * m.K - 2.0 * p.eta * m.F;
  return p;
}

inline OperatorParams params_from_moments(const GaussianMoments& m, double x) {
  if (!(x >= 0)) throw domain_error("params_from_moments: x must be >= 0");
  const double n = occupation(m);
  if (n == 0.0) {
    throw domain_error("params_from_moments: pure state (n = 0) has divergent coefficients");
  }
  return params_with_kappa(m, n, x, kappa_of(n));
}

}  // namespace ngstate
