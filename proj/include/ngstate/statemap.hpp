#pragma once

// Forward map (operator coefficients -> correlators) and the numerical
// inversion of the C4 relation.

#include <cmath>
#include <string>

#include "ngstate/detail/bracket.hpp"
#include "ngstate/errors.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

namespace ngstate {

struct ForwardMoments {
  GaussianMoments moments;
  double c4_half_ratio = 0.0;
  double n = 0.0;
  double x = 0.0;
  SaddleSolution saddle;
};

inline ForwardMoments moments_from_params(const OperatorParams& p) {
  if (!(p.A > 0)) throw non_positive_a("moments_from_params: A = " + std::to_string(p.A));
  if (!(p.eta >= 0)) throw domain_error("moments_from_params: eta must be >= 0");
  const double z0_sq = p.z0_sq();
  if (p.eta == 0.0 && !(z0_sq > 0)) {
    throw domain_error("moments_from_params: Gaussian operator needs A B' > 0");
  }
  ForwardMoments out;
  out.saddle = solve_gap(z0_sq, p.xi());
  const double z = std::sqrt(out.saddle.s);
  const double n = 1.0 / std::expm1(z);
  const double kappa = specfun::h_trace(out.saddle.s);
  GaussianMoments& m = out.moments;
  m.F = p.A / kappa;
  m.R = -p.C / kappa;
  m.K = (p.B + 2.0 * p.eta * m.F) / kappa;
  const double scaled = m.F / (n + 0.5);
  out.n = n;
  out.x = p.eta / kappa * scaled * scaled;
  out.c4_half_ratio = c4_ratio(n, out.x);
  return out;
}

/// Largest x searched by the inversion. Targets that need more are reported
/// as Unreachable.
inline constexpr double x_from_c4_max_x = 1e12;

/// Solve c4_ratio(n, x) = target for x >= 0.
inline double x_from_c4(double n, double target) {
  if (!(n >= 0)) throw domain_error("x_from_c4: n must be >= 0");
  if (target > 0 || !(target > -1.0)) {
    throw unreachable("x_from_c4: target " + std::to_string(target) + " outside (-1, 0]");
  }
  if (target == 0.0) return 0.0;
  const auto eq = [&](double x) { return c4_ratio(n, x) - target; };
  double hi = 1.0;
  double f_hi = eq(hi);
  while (f_hi > 0) {
    hi *= 4.0;
    if (hi > x_from_c4_max_x) {
      throw unreachable("x_from_c4: target " + std::to_string(target) +
                        " below the saturation value at n = " + std::to_string(n));
    }
    f_hi = eq(hi);
  }
  const auto res = detail::brent_solve(eq, 0.0, hi, -target, f_hi);
  if (!res.converged) throw not_converged("x_from_c4: no convergence");
  return res.root;
}

}  // namespace ngstate
