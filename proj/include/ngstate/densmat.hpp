#pragma once

// Position-basis matrix elements <phi2|D|phi1> at large N, written as
// A^{-N/2} d(u^2, v^2)^N exp(-2 i N C w), and the structure of d.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ngstate/errors.hpp"
#include "ngstate/io.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/parallel.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

namespace ngstate {

/// Rescaled invariants u^2 = phi^2/NA, v^2 = s^2/4NA, w = phi.s/2NA of the
/// midpoint phi = (phi2+phi1)/2 and separation s = phi2 - phi1.
class PhasePoint {
 public:
  PhasePoint(double u_sq, double v_sq, double w = 0.0) : u_sq_(u_sq), v_sq_(v_sq), w_(w) {
    if (!(u_sq >= 0) || !(v_sq >= 0) || !std::isfinite(u_sq) || !std::isfinite(v_sq)) {
      throw domain_error("PhasePoint: u^2 and v^2 must be finite and non-negative");
    }
    if (!std::isfinite(w) || w * w > u_sq * v_sq * (1.0 + 1e-12)) {
      throw domain_error("PhasePoint: w^2 exceeds u^2 v^2");
    }
  }

  double u_sq() const { return u_sq_; }
  double v_sq() const { return v_sq_; }
  double w() const { return w_; }

 private:
  double u_sq_;
  double v_sq_;
  double w_;
};

struct MatrixElementValue {
  double ln_d = 0.0;         ///< (1/N) ln of the real amplitude, including -ln Z / N
  double phase_per_N = 0.0;  ///< -2 C w
  SaddleSolution saddle;
};

/// ln d at (u^2, v^2) from a known saddle value s.
inline double ln_d_at_saddle(const ReducedState& st, double s, double u_sq, double v_sq) {
  const auto F = specfun::big_f(s);
  double interaction = 0.0;
  if (st.xi > 0) {
    // (s - z0^2)^2 / 8 xi with (s - z0^2)/xi replaced by the right-hand side
    const auto f = specfun::small_f(s);
    interaction = (s - st.z0_sq) * (f.f0 + f.fu * u_sq + f.fv * v_sq) / 8.0;
  }
  return -(F.f0 + F.fu * u_sq + F.fv * v_sq - interaction) - ln_z_per_dof(st);
}

/// c_coeff is the operator coefficient C; it only enters the phase.
inline MatrixElementValue ln_d(const ReducedState& st, const PhasePoint& pt,
                               double c_coeff = 0.0) {
  MatrixElementValue out;
  out.saddle = solve_saddle_uv(st, pt.u_sq(), pt.v_sq());
  out.ln_d = ln_d_at_saddle(st, out.saddle.s, pt.u_sq(), pt.v_sq());
  out.phase_per_N = -2.0 * c_coeff * pt.w();
  return out;
}

inline double ln_d_value(const ReducedState& st, double u_sq, double v_sq) {
  return ln_d(st, PhasePoint(u_sq, v_sq)).ln_d;
}

enum class Regime { Monotone, Peaked };

inline const char* to_string(Regime r) { return r == Regime::Peaked ? "peaked" : "monotone"; }

/// -z0^2/xi - 1/3, the value of u_c^2 at v = 0. Only meaningful for x > 0.
inline double peak_u0_sq(const ReducedState& st) {
  // -z0^2/xi = (1/kappa)(1 - 1/(2x))
  return (1.0 - 0.5 / st.x) / st.kappa - 1.0 / 3.0;
}

/// Peaked iff an imaginary saddle exists somewhere, i.e. u_c^2(0) > 0.
/// Equivalent to kappa < 3 and x > 1 / (2 (1 - kappa/3)).
inline Regime classify_regime(const ReducedState& st) {
  if (st.x == 0.0) return Regime::Monotone;
  return peak_u0_sq(st) > 0 ? Regime::Peaked : Regime::Monotone;
}

/// x above which a state with occupation n is Peaked; infinite for kappa >= 3.
inline double peak_threshold_x(double n) {
  const double kappa = kappa_of(n);
  if (kappa >= 3.0) return INFINITY;
  return 1.0 / (2.0 * (1.0 - kappa / 3.0));
}

/// Ridge of maxima in u at fixed v^2. Empty once v^2 > -3 z0^2/xi - 1.
inline std::optional<double> u_c_sq(const ReducedState& st, double v_sq) {
  if (classify_regime(st) != Regime::Peaked) {
    throw regime_error("u_c_sq: state has no off-origin maximum");
  }
  const double value = peak_u0_sq(st) - v_sq / 3.0;
  if (value < 0) return std::nullopt;
  return value;
}

struct PeakFit {
  double u0 = 0.0;
  double delta_u_sq = 0.0;
  double delta_v_sq = 0.5;
  double third_u = 0.0;   ///< d^3 ln d / du^3
  double cross_uv = 0.0;  ///< d^2/du^2 d^2/dv^2 ln d
  double fourth_v = 0.0;  ///< d^4 ln d / dv^4
  double ln_d0 = 0.0;
};

/// Taylor data of ln d at its maximum (u0, 0), where the saddle sits at s = 0.
/// Derivatives follow from d ln d/du^2 = -Fu(s), d ln d/dv^2 = -Fv(s) and
/// implicit differentiation of the saddle equation, using the Taylor
/// coefficients of the kernels at s = 0:
///   Fu = s/4 - s^2/48,  Fv = 1 + s/12,
///   f0 = 1/3 - s/45 + 2 s^2/945,  fu = 1 - s/6 + s^2/40,  fv = 1/3 - s/90.
inline PeakFit peak_fit(const ReducedState& st) {
  if (classify_regime(st) != Regime::Peaked) {
    throw regime_error("peak_fit: state has no off-origin maximum");
  }
  const double U0 = peak_u0_sq(st);
  const double u0 = std::sqrt(U0);
  constexpr double Fu1 = 0.25, Fu2 = -1.0 / 24.0, Fv1 = 1.0 / 12.0;
  constexpr double f0_1 = -1.0 / 45.0, f0_2 = 4.0 / 945.0;
  constexpr double fu_1 = -1.0 / 6.0, fu_2 = 1.0 / 20.0;
  constexpr double fv_0 = 1.0 / 3.0, fv_1 = -1.0 / 90.0;

  // denominator of ds/dU and ds/dV: 1/xi - f0' - fu' U - fv' V
  const double D0 = 1.0 / st.xi - f0_1 - fu_1 * U0;
  const double s_U = 1.0 / D0;
  const double s_V = fv_0 / D0;
  const double dD_dU = -(f0_2 + fu_2 * U0) * s_U - fu_1;
  const double dD_dV = -(f0_2 + fu_2 * U0) * s_V - fv_1;
  const double s_UU = fu_1 * s_U / D0 - dD_dU / (D0 * D0);
  const double s_UV = fu_1 * s_V / D0 - dD_dV / (D0 * D0);

  PeakFit fit;
  fit.u0 = u0;
  fit.delta_u_sq = 1.0 / (U0 * s_U);
  fit.delta_v_sq = 0.5;
  fit.third_u = -12.0 * u0 * Fu1 * s_U - 8.0 * U0 * u0 * (Fu2 * s_U * s_U + Fu1 * s_UU);
  fit.cross_uv = 2.0 * (-2.0 * Fu1 * s_V - 4.0 * U0 * (Fu2 * s_V * s_U + Fu1 * s_UV));
  fit.fourth_v = -12.0 * Fv1 * s_V;
  fit.ln_d0 = ln_d_at_saddle(st, 0.0, U0, 0.0);
  return fit;
}

/// delta_u^2 in the n >> 1 form n^2/(2x-1) + 1/6.
inline double delta_u_sq_large_n(double n, double x) { return n * n / (2.0 * x - 1.0) + 1.0 / 6.0; }

struct SurfaceGrid {
  double u_max = 0.0;
  double v_max = 4.0;
  std::size_t nu = 201;
  std::size_t nv = 201;
};

/// u in [0, 1.5 max(1, u_c(0))], v in [0, 4], 201 x 201.
inline SurfaceGrid default_surface_grid(const ReducedState& st) {
  SurfaceGrid g;
  double uc = 1.0;
  if (classify_regime(st) == Regime::Peaked) uc = std::max(1.0, std::sqrt(peak_u0_sq(st)));
  g.u_max = 1.5 * uc;
  return g;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return out;
}

struct DSurface {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> ln_d_norm;  ///< ln d - max, index iu * v.size() + iv
  double max_ln_d = 0.0;
  std::size_t argmax_u = 0;
  std::size_t argmax_v = 0;

  double at(std::size_t iu, std::size_t iv) const { return ln_d_norm[iu * v.size() + iv]; }
};

inline DSurface d_surface(const ReducedState& st, const SurfaceGrid& grid, unsigned threads = 0) {
  if (!(grid.u_max > 0) || !(grid.v_max > 0) || !std::isfinite(grid.u_max) ||
      !std::isfinite(grid.v_max) || grid.nu < 2 || grid.nv < 2) {
    throw invalid_config("d_surface: grid bounds must be positive and finite with >= 2 points");
  }
  DSurface out;
  out.u = linspace(0.0, grid.u_max, grid.nu);
  out.v = linspace(0.0, grid.v_max, grid.nv);
  const std::size_t nv = grid.nv;
  out.ln_d_norm.assign(grid.nu * nv, 0.0);
  parallel_for(grid.nu, threads, [&](std::size_t iu) {
    const double u_sq = out.u[iu] * out.u[iu];
    for (std::size_t iv = 0; iv < nv; ++iv) {
      out.ln_d_norm[iu * nv + iv] = ln_d_value(st, u_sq, out.v[iv] * out.v[iv]);
    }
  });
  const auto it = std::max_element(out.ln_d_norm.begin(), out.ln_d_norm.end());
  const std::size_t idx = static_cast<std::size_t>(it - out.ln_d_norm.begin());
  out.max_ln_d = *it;
  out.argmax_u = idx / nv;
  out.argmax_v = idx % nv;
  for (double& value : out.ln_d_norm) value -= out.max_ln_d;
  return out;
}

inline void write_csv(std::ostream& os, const DSurface& surf) {
  io::write_header(os, {"u", "v", "ln_d_norm"});
  for (std::size_t iu = 0; iu < surf.u.size(); ++iu) {
    for (std::size_t iv = 0; iv < surf.v.size(); ++iv) {
      io::write_row(os, {surf.u[iu], surf.v[iv], surf.at(iu, iv)});
    }
  }
}

}  // namespace ngstate
