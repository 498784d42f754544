#pragma once

// Root solvers for the three saddle-point equations:
//
//   trace (gap):   (s - z0^2) / xi = 1 / (z tanh(z/2))           s > 0
//   purity:        (s - z0^2) / xi = 1 / (z tanh z)              s > 0
//   matrix element (s - z0^2) / xi = f0 + fu u^2 + fv v^2        s > -pi^2
//
// with s = z^2. Each is solved in a multiplied-out form that is finite on the
// whole bracket; all three have exactly one root there.

#include <algorithm>
#include <cmath>
#include <string>

#include "ngstate/detail/bracket.hpp"
#include "ngstate/errors.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

namespace ngstate {

enum class Branch { Real, ImaginaryContinued };

inline const char* to_string(Branch b) {
  return b == Branch::Real ? "real" : "imaginary";
}

struct SaddleSolution {
  double s = 0.0;  ///< z^2
  Branch branch = Branch::Real;
  double residual = 0.0;  ///< |LHS - RHS| / |LHS|
  int iterations = 0;
};

namespace detail {

inline Branch branch_of(double s) {
  return s >= 0 ? Branch::Real : Branch::ImaginaryContinued;
}

template <typename Equation>
double grow_upper(const Equation& eq, double start, double& f_hi) {
  double hi = start;
  f_hi = eq(hi);
  for (int k = 0; k < 200 && !(f_hi > 0); ++k) {
    hi = 4.0 * hi + 1.0;
    f_hi = eq(hi);
  }
  if (!(f_hi > 0)) throw not_converged("saddle: could not bracket the root from above");
  return hi;
}

// Shared driver of the two periodic (trace-type) equations
// (s - z0^2) h(s) - xi = 0 on s > 0.
template <typename H>
SaddleSolution solve_periodic(double z0_sq, double xi, const H& h, const char* what) {
  if (xi == 0.0) {
    if (!(z0_sq > 0)) {
      throw domain_error(std::string(what) + ": Gaussian limit needs z0^2 > 0");
    }
    return {z0_sq, Branch::Real, 0.0, 0};
  }
  if (!(xi > 0)) throw domain_error(std::string(what) + ": xi must be >= 0");
  const auto eq = [&](double s) { return (s - z0_sq) * h(s) - xi; };
  const double f_lo = -xi;  // h(0) = 0
  double f_hi = 0.0;
  const double hi = grow_upper(eq, std::max({z0_sq, 1.0}), f_hi);
  const auto res = brent_solve(eq, 0.0, hi, f_lo, f_hi, 1e-300);
  if (!res.converged) throw not_converged(std::string(what) + ": no convergence");
  SaddleSolution out;
  out.s = res.root;
  out.branch = Branch::Real;
  out.iterations = res.iterations;
  out.residual = std::abs(res.value) / std::abs(res.value + xi);
  return out;
}

}  // namespace detail

/// Trace saddle for arbitrary (z0^2, xi). Used by the forward parameter map.
inline SaddleSolution solve_gap(double z0_sq, double xi) {
  return detail::solve_periodic(z0_sq, xi, specfun::h_trace, "solve_gap");
}

inline SaddleSolution solve_gap(const ReducedState& st) {
  return solve_gap(st.z0_sq, st.xi);
}

/// Saddle of Z(2A, 2B, 2C, 2 eta), in terms of z~ = z(2.) / 2.
inline SaddleSolution solve_gap_tilde(double z0_sq, double xi) {
  return detail::solve_periodic(z0_sq, xi, specfun::h2, "solve_gap_tilde");
}

inline SaddleSolution solve_gap_tilde(const ReducedState& st) {
  return solve_gap_tilde(st.z0_sq, st.xi);
}

/// Matrix-element saddle at rescaled position-basis invariants (u^2, v^2).
inline SaddleSolution solve_saddle_uv(double z0_sq, double xi, double u_sq, double v_sq) {
  if (!(u_sq >= 0) || !(v_sq >= 0)) {
    throw domain_error("solve_saddle_uv: u^2 and v^2 must be non-negative");
  }
  if (xi == 0.0) {
    if (!(z0_sq > -specfun::pi_sq)) {
      throw domain_error("solve_saddle_uv: Gaussian limit needs z0^2 > -pi^2");
    }
    return {z0_sq, detail::branch_of(z0_sq), 0.0, 0};
  }
  if (!(xi > 0)) throw domain_error("solve_saddle_uv: xi must be >= 0");

  const auto rhs = [&](double s) {
    const auto f = specfun::small_f(s);
    return f.f0 + f.fu * u_sq + f.fv * v_sq;
  };
  const auto eq = [&](double s) { return (s - z0_sq) - xi * rhs(s); };

  // f0 diverges as s -> -pi^2, so some offset above the pole brackets from below.
  double offset = 1e-9;
  double lo = -specfun::pi_sq + offset;
  double f_lo = eq(lo);
  while (!(f_lo < 0) && offset > 1e-15) {
    offset *= 1e-2;
    lo = -specfun::pi_sq * (1.0 - offset / specfun::pi_sq);
    f_lo = eq(lo);
  }
  if (!(f_lo < 0)) throw not_converged("solve_saddle_uv: could not bracket the root from below");
  double f_hi = 0.0;
  const double hi = detail::grow_upper(eq, std::max(z0_sq, 1.0), f_hi);
  const double scale = std::max(1.0, std::abs(z0_sq));
  const auto res = detail::brent_solve(eq, lo, hi, f_lo, f_hi, 1e-16 * scale);
  if (!res.converged) throw not_converged("solve_saddle_uv: no convergence");

  SaddleSolution out;
  out.s = res.root;
  out.branch = detail::branch_of(out.s);
  out.iterations = res.iterations;
  out.residual = std::abs(res.value) / (xi * rhs(out.s));
  return out;
}

inline SaddleSolution solve_saddle_uv(const ReducedState& st, double u_sq, double v_sq) {
  return solve_saddle_uv(st.z0_sq, st.xi, u_sq, v_sq);
}

}  // namespace ngstate
