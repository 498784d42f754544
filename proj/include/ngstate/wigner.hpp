#pragma once

// O(N) Wigner function W(u^2, r^2) = w^N. At finite even N
//
//   W = N r (8 pi / r)^{N/2} int_0^inf dv v^{N/2} J_{N/2-1}(N r v) d(u^2, v^2)^N
//
// is integrated by composite Gauss-Legendre quadrature and (1/N) ln W is
// extrapolated in 1/N. A stationary-point evaluation of the same limit serves
// as cross-check and as fallback when the oscillatory integral cancels below
// double precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "ngstate/densmat.hpp"
#include "ngstate/detail/bracket.hpp"
#include "ngstate/errors.hpp"
#include "ngstate/io.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/parallel.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

namespace ngstate {

enum class Extrapolation { LastValue, RichardsonIn1OverN };

inline constexpr int quad_order = 16;

struct WignerSettings {
  std::vector<int> N_list = {4, 8, 12, 16, 20, 24, 28, 32, 36, 40};
  int quad_points = quad_order;  ///< Gauss-Legendre nodes per panel (fixed)
  double v_max = 0.0;            ///< 0 selects the cut-off from the integrand
  double panel_width = 0.1;      ///< upper bound on the panel width in v
  double panels_per_period = 2.0;
  Extrapolation extrapolation = Extrapolation::RichardsonIn1OverN;
  double spread_tolerance = 1e-3;
  double cancellation_floor = 1e-9;   ///< smaller |sum| / sum|.| counts as unresolved
  double log_window = 40.0;           ///< integrand below max - window is dropped
  bool saddle_fallback = true;

  void validate() const {
    if (N_list.size() < 3) throw invalid_config("WignerSettings: N_list needs >= 3 entries");
    for (std::size_t i = 0; i < N_list.size(); ++i) {
      if (N_list[i] < 2 || N_list[i] % 2 != 0) {
        throw invalid_config("WignerSettings: every N must be even and >= 2");
      }
      if (i > 0 && N_list[i] <= N_list[i - 1]) {
        throw invalid_config("WignerSettings: N_list must be strictly ascending");
      }
    }
    if (quad_points != quad_order) {
      throw invalid_config("WignerSettings: quad_points must be " + std::to_string(quad_order));
    }
    if (!(v_max >= 0) || !(panel_width > 0) || !(panels_per_period > 0) ||
        !(spread_tolerance > 0) || !(cancellation_floor > 0) || !(log_window > 0)) {
      throw invalid_config("WignerSettings: tolerances and widths must be positive");
    }
  }
};

/// Squeezing parametrization of (F, K, R) at fixed n.
struct SqueezeParams {
  double n = 0.0;
  double gamma = 0.0;
  double phi = 0.0;

  void validate() const {
    if (!(n > 0)) throw invalid_config("SqueezeParams: n must be > 0");
    if (!(gamma >= 0) || !(gamma < 1)) throw invalid_config("SqueezeParams: gamma must be in [0, 1)");
    if (!(phi >= 0) || !(phi < 2.0 * specfun::pi)) {
      throw invalid_config("SqueezeParams: phi must be in [0, 2 pi)");
    }
  }

  double a_bar() const { return (n + 0.5) / std::sqrt(1.0 - gamma * gamma); }

  GaussianMoments moments() const {
    const double a = a_bar();
    return {a * (1.0 + gamma * std::cos(phi)), a * (1.0 - gamma * std::cos(phi)),
            a * gamma * std::sin(phi)};
  }
};

// ---------------------------------------------------------------------------
// Large-N stationary point

struct WignerSaddle {
  double ln_w = 0.0;
  double s = 0.0;
};

namespace detail {

// Exponent Phi(s) (without -ln Z/N) and its s-derivative times 4 xi.
inline double wigner_phi(const ReducedState& st, double s, double u_sq, double r_sq) {
  const auto F = specfun::big_f(s);
  const double ds = s - st.z0_sq;
  return -specfun::log_cosh_half(s) - F.fu * u_sq - r_sq / (4.0 * F.fv) +
         (st.xi > 0 ? ds * ds / (8.0 * st.xi) : 0.0);
}

inline double wigner_stationarity(const ReducedState& st, double s, double u_sq, double r_sq) {
  const auto F = specfun::big_f(s);
  const auto f = specfun::small_f(s);
  return (s - st.z0_sq) -
         st.xi * (specfun::tanh_half_over_z(s) + f.fu * u_sq - r_sq * f.fv / (4.0 * F.fv * F.fv));
}

}  // namespace detail

/// ln w from the rightmost stationary point in s of
///   -ln cosh(z/2) - Fu u^2 - r^2 / 4Fv + (s - z0^2)^2 / 8 xi - ln Z/N,
/// the Weyl symbol of the Gaussian kernel combined with the same auxiliary
/// field integral that produces d(u^2, v^2).
inline WignerSaddle ln_w_large_n(const ReducedState& st, double u_sq, double r_sq) {
  if (!(u_sq >= 0) || !(r_sq >= 0)) throw domain_error("ln_w_large_n: negative u^2 or r^2");
  WignerSaddle out;
  if (st.xi == 0.0) {
    out.s = st.z0_sq;
  } else {
    const auto eq = [&](double s) { return detail::wigner_stationarity(st, s, u_sq, r_sq); };
    double f_hi = 0.0;
    double hi = std::max(st.z0_sq, 1.0);
    f_hi = eq(hi);
    for (int k = 0; k < 200 && !(f_hi > 0); ++k) {
      hi = 4.0 * hi + 1.0;
      f_hi = eq(hi);
    }
    if (!(f_hi > 0)) throw not_converged("ln_w_large_n: no upper bracket");
    // march down to the first sign change, which isolates the rightmost root:
    // geometric steps above s = 1, then uniform steps towards the pole
    double a = hi, fa = f_hi, b = hi, fb = f_hi;
    bool found = false;
    const auto probe = [&](double s) {
      b = s;
      fb = eq(b);
      if (!(fb > 0)) return true;
      a = b;
      fa = fb;
      return false;
    };
    for (double s = hi / 1.25; s > 1.0 && !found; s /= 1.25) found = probe(s);
    const double top = std::min(a, 1.0);
    const double bottom = -specfun::pi_sq * (1.0 - 1e-12);
    const int steps = 2000;
    for (int k = 0; k <= steps && !found; ++k) {
      found = probe(top + (bottom - top) * static_cast<double>(k) / steps);
    }
    if (!found) throw not_converged("ln_w_large_n: no stationary point");
    out.s = fb == 0.0 ? b : detail::brent_solve(eq, b, a, fb, fa).root;
  }
  out.ln_w = detail::wigner_phi(st, out.s, u_sq, r_sq) - ln_z_per_dof(st);
  return out;
}

// ---------------------------------------------------------------------------
// Finite-N quadrature

/// ln d(u^2, v^2) on the quadrature nodes of one u. Shared by every N and r.
struct VProfile {
  double u_sq = 0.0;
  std::vector<double> v;
  std::vector<double> weight;
  std::vector<double> ln_d;
  std::vector<double> ln_v;
};

namespace detail {

// Smallest v beyond which, for every N in the list, both integrand forms
// N ln d + (N/2) ln v and N ln d + (N - 1) ln v sit more than the window
// below their maxima.
inline double wigner_cutoff(const ReducedState& st, double u_sq, const WignerSettings& set) {
  const double step = 0.05;
  const std::array<double, 2> Ns = {static_cast<double>(set.N_list.front()),
                                    static_cast<double>(set.N_list.back())};
  std::array<double, 4> best;
  best.fill(-std::numeric_limits<double>::infinity());
  for (int k = 1; k < 4000; ++k) {
    const double v = step * k;
    const double l = ln_d_value(st, u_sq, v * v);
    const double lv = std::log(v);
    bool below = v > 1.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const std::array<double, 2> e = {Ns[i] * l + 0.5 * Ns[i] * lv, Ns[i] * l + (Ns[i] - 1.0) * lv};
      for (std::size_t j = 0; j < 2; ++j) {
        double& b = best[2 * i + j];
        b = std::max(b, e[j]);
        if (e[j] > b - set.log_window - 5.0) below = false;
      }
    }
    if (below) return v;
  }
  throw not_converged("wigner: integrand does not decay in v");
}

}  // namespace detail

inline VProfile make_profile(const ReducedState& st, double u_sq, double r_max,
                             const WignerSettings& set) {
  const double v_max = set.v_max > 0 ? set.v_max : detail::wigner_cutoff(st, u_sq, set);
  const double n_max = static_cast<double>(set.N_list.back());
  double h = set.panel_width;
  if (r_max > 0) h = std::min(h, 2.0 * specfun::pi / (n_max * r_max * set.panels_per_period));
  const auto panels = static_cast<std::size_t>(std::ceil(v_max / h));
  h = v_max / static_cast<double>(panels);

  using rule = boost::math::quadrature::gauss<double, quad_order>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  // boost stores the non-negative half of the symmetric rule
  std::vector<double> ref_x, ref_w;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] != 0.0) {
      ref_x.push_back(-x[i]);
      ref_w.push_back(w[i]);
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    ref_x.push_back(x[i]);
    ref_w.push_back(w[i]);
  }

  VProfile prof;
  prof.u_sq = u_sq;
  const std::size_t count = panels * ref_x.size();
  prof.v.reserve(count);
  prof.weight.reserve(count);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = h * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < ref_x.size(); ++i) {
      prof.v.push_back(mid + 0.5 * h * ref_x[i]);
      prof.weight.push_back(0.5 * h * ref_w[i]);
    }
  }
  prof.ln_d.resize(prof.v.size());
  prof.ln_v.resize(prof.v.size());
  for (std::size_t i = 0; i < prof.v.size(); ++i) {
    prof.ln_d[i] = ln_d_value(st, u_sq, prof.v[i] * prof.v[i]);
    prof.ln_v[i] = std::log(prof.v[i]);
  }
  return prof;
}

struct QuadratureAtN {
  int N = 0;
  double ln_w = std::numeric_limits<double>::quiet_NaN();
  double cancellation = 0.0;  ///< |sum| / sum |.|, 1 without oscillation
  bool resolved = false;
};

/// Argument N r v_max below which the Bessel factor is taken in reduced
/// form J / ((x/2)^nu / nu!), which is regular at r = 0.
inline constexpr double reduced_bessel_limit = 2.0;

inline QuadratureAtN ln_w_at_N(const VProfile& prof, double r_sq, int N,
                               const WignerSettings& set) {
  if (N < 2 || N % 2 != 0) throw domain_error("ln_w_at_N: N must be even and >= 2");
  if (!(r_sq >= 0)) throw domain_error("ln_w_at_N: r^2 must be >= 0");
  const double r = std::sqrt(r_sq);
  const int nu = N / 2 - 1;
  const double dN = N;
  const bool reduced = dN * r * prof.v.back() <= reduced_bessel_limit;
  const double power = reduced ? dN - 1.0 : 0.5 * dN;

  const std::size_t m = prof.v.size();
  double e_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) e_max = std::max(e_max, dN * prof.ln_d[i] + power * prof.ln_v[i]);

  double sum = 0.0, abs_sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double e = dN * prof.ln_d[i] + power * prof.ln_v[i] - e_max;
    if (e < -set.log_window) continue;
    const double arg = dN * r * prof.v[i];
    const double bessel =
        reduced ? specfun::bessel_j_reduced(nu, arg) : specfun::bessel_j(nu, arg);
    const double term = prof.weight[i] * std::exp(e) * bessel;
    sum += term;
    abs_sum += std::abs(term);
  }

  QuadratureAtN out;
  out.N = N;
  out.cancellation = abs_sum > 0 ? std::abs(sum) / abs_sum : 0.0;
  if (!(sum > 0) || out.cancellation < set.cancellation_floor) {
    if (!(sum > 0) && out.cancellation > 1e-6) {
      throw quadrature_non_positive("ln_w_at_N: integral " + std::to_string(sum) +
                                    " at N = " + std::to_string(N));
    }
    return out;
  }
  double ln_w = std::log(dN) + 0.5 * dN * std::log(8.0 * specfun::pi) + e_max + std::log(sum);
  if (reduced) {
    ln_w += nu * std::log(0.5 * dN) - std::lgamma(nu + 1.0);
  } else {
    ln_w += std::log(r) - 0.5 * dN * std::log(r);
  }
  out.ln_w = ln_w / dN;
  out.resolved = true;
  return out;
}

inline QuadratureAtN ln_w_at_N(const ReducedState& st, double u_sq, double r_sq, int N,
                               const WignerSettings& set = {}) {
  set.validate();
  return ln_w_at_N(make_profile(st, u_sq, std::sqrt(r_sq), set), r_sq, N, set);
}

enum class WignerStatus { Converged, SaddleFallback, NotConverged };

inline const char* to_string(WignerStatus s) {
  switch (s) {
    case WignerStatus::Converged: return "converged";
    case WignerStatus::SaddleFallback: return "saddle_fallback";
    default: return "not_converged";
  }
}

struct WignerValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  double spread = std::numeric_limits<double>::quiet_NaN();
  WignerStatus status = WignerStatus::NotConverged;
  int resolved = 0;  ///< number of N values that entered the extrapolation
};

namespace detail {

// Lagrange extrapolation to 1/N = 0 through the last three points.
inline double richardson_last3(const std::vector<QuadratureAtN>& seq) {
  const std::size_t k = seq.size();
  double out = 0.0;
  for (std::size_t i = k - 3; i < k; ++i) {
    const double hi = 1.0 / seq[i].N;
    double coef = 1.0;
    for (std::size_t j = k - 3; j < k; ++j) {
      if (j == i) continue;
      const double hj = 1.0 / seq[j].N;
      coef *= hj / (hj - hi);
    }
    out += coef * seq[i].ln_w;
  }
  return out;
}

}  // namespace detail

/// Extrapolate a sequence of per-N values. Unresolved entries are dropped.
inline WignerValue extrapolate(const std::vector<QuadratureAtN>& raw, const WignerSettings& set) {
  std::vector<QuadratureAtN> seq;
  for (const auto& q : raw) {
    if (q.resolved) seq.push_back(q);
  }
  WignerValue out;
  out.resolved = static_cast<int>(seq.size());
  const std::size_t need = set.extrapolation == Extrapolation::RichardsonIn1OverN ? 3 : 2;
  if (seq.size() < need) return out;
  const std::size_t k = seq.size();
  out.spread = std::abs(seq[k - 1].ln_w - seq[k - 2].ln_w);
  out.value = set.extrapolation == Extrapolation::RichardsonIn1OverN ? detail::richardson_last3(seq)
                                                                     : seq[k - 1].ln_w;
  out.status = out.spread <= set.spread_tolerance ? WignerStatus::Converged
                                                  : WignerStatus::NotConverged;
  return out;
}

inline WignerValue finish(WignerValue v, const ReducedState& st, double u_sq, double r_sq,
                          const WignerSettings& set) {
  if (v.status == WignerStatus::Converged || !set.saddle_fallback) return v;
  if (v.resolved >= 2 && v.status == WignerStatus::NotConverged &&
      v.resolved == static_cast<int>(set.N_list.size())) {
    return v;  // fully resolved but slow: report it as is
  }
  WignerValue fb;
  fb.value = ln_w_large_n(st, u_sq, r_sq).ln_w;
  fb.status = WignerStatus::SaddleFallback;
  fb.resolved = v.resolved;
  return fb;
}

/// ln w at one u^2 for a batch of r^2 values sharing one v-profile.
inline std::vector<WignerValue> ln_w_row(const ReducedState& st, double u_sq,
                                         std::span<const double> r_sq,
                                         const WignerSettings& set = {}) {
  set.validate();
  double r_max = 0.0;
  for (double q : r_sq) {
    if (!(q >= 0)) throw domain_error("ln_w_row: r^2 must be >= 0");
    r_max = std::max(r_max, std::sqrt(q));
  }
  const VProfile prof = make_profile(st, u_sq, r_max, set);
  std::vector<WignerValue> out;
  out.reserve(r_sq.size());
  std::vector<QuadratureAtN> seq(set.N_list.size());
  for (double q : r_sq) {
    for (std::size_t k = 0; k < set.N_list.size(); ++k) seq[k] = ln_w_at_N(prof, q, set.N_list[k], set);
    out.push_back(finish(extrapolate(seq, set), st, u_sq, q, set));
  }
  return out;
}

/// Extrapolated ln w. Throws NotConverged when the spread stays above the
/// tolerance and no fallback applies.
inline WignerValue ln_w(const ReducedState& st, double u_sq, double r_sq,
                        const WignerSettings& set = {}) {
  const double r[1] = {r_sq};
  const auto v = ln_w_row(st, u_sq, r, set).front();
  if (v.status == WignerStatus::NotConverged) {
    throw not_converged("ln_w: spread " + std::to_string(v.spread) + " at u^2 = " +
                        std::to_string(u_sq) + ", r^2 = " + std::to_string(r_sq));
  }
  return v;
}

// ---------------------------------------------------------------------------
// Grids

struct WignerGridSpec {
  double u_max = 0.0;
  double r_max = 3.0;
  std::size_t nu = 101;
  std::size_t nr = 101;
};

inline WignerGridSpec default_wigner_grid(const ReducedState& st) {
  WignerGridSpec g;
  g.u_max = default_surface_grid(st).u_max;
  return g;
}

struct WignerGrid {
  std::vector<double> u;
  std::vector<double> r;
  std::vector<WignerValue> values;  ///< index iu * r.size() + ir
  std::vector<double> ln_w_norm;
  double max_ln_w = 0.0;

  std::size_t count(WignerStatus s) const {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](const WignerValue& v) { return v.status == s; }));
  }
};

namespace detail {

inline void normalize(const std::vector<WignerValue>& values, std::vector<double>& out, double& max) {
  max = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    if (std::isfinite(v.value)) max = std::max(max, v.value);
  }
  out.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i].value - max;
}

}  // namespace detail

inline WignerGrid wigner_grid(const ReducedState& st, const WignerGridSpec& spec,
                              const WignerSettings& set = {}, unsigned threads = 0) {
  set.validate();
  if (!(spec.u_max > 0) || !(spec.r_max > 0) || spec.nu < 2 || spec.nr < 2 ||
      !std::isfinite(spec.u_max) || !std::isfinite(spec.r_max)) {
    throw invalid_config("wigner_grid: bounds must be positive and finite with >= 2 points");
  }
  WignerGrid g;
  g.u = linspace(0.0, spec.u_max, spec.nu);
  g.r = linspace(0.0, spec.r_max, spec.nr);
  std::vector<double> r_sq(g.r.size());
  for (std::size_t i = 0; i < g.r.size(); ++i) r_sq[i] = g.r[i] * g.r[i];
  g.values.resize(spec.nu * spec.nr);
  parallel_for(spec.nu, threads, [&](std::size_t iu) {
    const auto row = ln_w_row(st, g.u[iu] * g.u[iu], r_sq, set);
    std::copy(row.begin(), row.end(), g.values.begin() + static_cast<std::ptrdiff_t>(iu * spec.nr));
  });
  detail::normalize(g.values, g.ln_w_norm, g.max_ln_w);
  return g;
}

inline void write_csv(std::ostream& os, const WignerGrid& g) {
  io::write_header(os, {"u", "r", "ln_w_norm", "spread"});
  for (std::size_t iu = 0; iu < g.u.size(); ++iu) {
    for (std::size_t ir = 0; ir < g.r.size(); ++ir) {
      const std::size_t k = iu * g.r.size() + ir;
      io::write_row(os, {g.u[iu], g.r[ir], g.ln_w_norm[k], g.values[k].spread});
    }
  }
}

// ---------------------------------------------------------------------------
// Physical phase-space slices

enum class ProjectionMode { Para, Perp };

inline const char* to_string(ProjectionMode m) { return m == ProjectionMode::Para ? "para" : "perp"; }

/// Per-component coordinates phi/sqrt(N) and pi/sqrt(N) of a slice with the
/// O(N) vectors either collinear (Para) or orthogonal (Perp).
struct ProjectionSpec {
  double phi_max = 0.0;  ///< 0 picks a range covering the distribution
  double pi_max = 0.0;
  std::size_t nphi = 101;
  std::size_t npi = 101;
};

struct ProjectionGrid {
  std::vector<double> phi;
  std::vector<double> pi;
  std::vector<WignerValue> values;  ///< index iphi * pi.size() + ipi
  std::vector<double> ln_w_norm;
  double max_ln_w = 0.0;
  double slope = 0.0;  ///< R/F, the shear of the pi axis
  double A = 0.0;
};

/// u^2 and r^2 of a slice point. The momentum enters through pi - (R/F) phi.
inline std::pair<double, double> slice_invariants(double A, double slope, ProjectionMode mode,
                                                  double phi, double pi) {
  const double u_sq = phi * phi / A;
  const double shifted = slope * phi;
  const double r_sq = mode == ProjectionMode::Para
                          ? 4.0 * A * (pi - shifted) * (pi - shifted)
                          : 4.0 * A * (pi * pi + shifted * shifted);
  return {u_sq, r_sq};
}

inline ProjectionGrid project_physical(const SqueezeParams& sq, double x, ProjectionMode mode,
                                       ProjectionSpec spec, const WignerSettings& set = {},
                                       unsigned threads = 0) {
  sq.validate();
  set.validate();
  const auto st = ReducedState::make(sq.n, x);
  const GaussianMoments m = sq.moments();
  ProjectionGrid g;
  g.A = st.kappa * m.F;
  g.slope = m.R / m.F;
  if (spec.phi_max <= 0) {
    double u_top = 4.0 / std::sqrt(st.kappa);  // four Gaussian widths
    if (classify_regime(st) == Regime::Peaked) u_top = std::max(u_top, 1.3 * std::sqrt(peak_u0_sq(st)));
    spec.phi_max = u_top * std::sqrt(g.A);
  }
  if (spec.pi_max <= 0) spec.pi_max = std::abs(g.slope) * spec.phi_max + 4.0 * std::sqrt(m.K);
  if (spec.nphi < 2 || spec.npi < 2) throw invalid_config("project_physical: need >= 2 points per axis");
  g.phi = linspace(-spec.phi_max, spec.phi_max, spec.nphi);
  g.pi = linspace(-spec.pi_max, spec.pi_max, spec.npi);
  g.values.resize(spec.nphi * spec.npi);
  parallel_for(spec.nphi, threads, [&](std::size_t ip) {
    std::vector<double> r_sq(spec.npi);
    double u_sq = 0.0;
    for (std::size_t iq = 0; iq < spec.npi; ++iq) {
      const auto inv = slice_invariants(g.A, g.slope, mode, g.phi[ip], g.pi[iq]);
      u_sq = inv.first;
      r_sq[iq] = inv.second;
    }
    const auto row = ln_w_row(st, u_sq, r_sq, set);
    std::copy(row.begin(), row.end(), g.values.begin() + static_cast<std::ptrdiff_t>(ip * spec.npi));
  });
  detail::normalize(g.values, g.ln_w_norm, g.max_ln_w);
  return g;
}

inline void write_csv(std::ostream& os, const ProjectionGrid& g) {
  io::write_header(os, {"phi", "pi", "ln_w_norm"});
  for (std::size_t ip = 0; ip < g.phi.size(); ++ip) {
    for (std::size_t iq = 0; iq < g.pi.size(); ++iq) {
      io::write_row(os, {g.phi[ip], g.pi[iq], g.ln_w_norm[ip * g.pi.size() + iq]});
    }
  }
}

}  // namespace ngstate
