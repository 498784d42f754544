#pragma once

// Brute-force counterparts of the closed forms: Matsubara sums, and purity
// and entropy recomputed from the definition of Z with a separate gap solver
// that works on z with plain std:: hyperbolic functions.

#include <cmath>
#include <numbers>

#include "ngstate/errors.hpp"
#include "ngstate/state.hpp"

namespace ngstate::oracle {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

enum class Tail { None, Integral };

struct MatsubaraTruncation {
  long n_max = 1000000;
  Tail tail = Tail::Integral;
};

namespace detail {

// Kahan-compensated sum of f(n) for n = n_max, ..., 1 (small terms first).
template <typename Term>
double sum_descending(long n_max, const Term& f) {
  double sum = 0.0, comp = 0.0;
  for (long n = n_max; n >= 1; --n) {
    const double y = f(static_cast<double>(n)) - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Euler-Maclaurin remainder sum_{n > M} f(n) = int_M^inf f - f(M)/2 - f'(M)/12.
inline double em_tail(double integral, double f_m, double df_m) {
  return integral - 0.5 * f_m - df_m / 12.0;
}

inline void check(const MatsubaraTruncation& t) {
  if (t.n_max < 1) throw domain_error("MatsubaraTruncation: n_max must be >= 1");
}

}  // namespace detail

/// sum_{n in Z} 1 / (omega_n^2 + z^2), omega_n = 2 pi n.
inline double trace_g_sum(double z_sq, const MatsubaraTruncation& trunc = {}) {
  if (!(z_sq > 0)) throw domain_error("trace_g_sum: z^2 must be positive");
  detail::check(trunc);
  const auto f = [&](double n) {
    const double w = two_pi * n;
    return 1.0 / (w * w + z_sq);
  };
  double total = 1.0 / z_sq + 2.0 * detail::sum_descending(trunc.n_max, f);
  if (trunc.tail == Tail::Integral) {
    const double z = std::sqrt(z_sq);
    const double M = static_cast<double>(trunc.n_max);
    const double w = two_pi * M;
    const double integral = std::atan(z / w) / (two_pi * z);
    const double df = -2.0 * two_pi * w / ((w * w + z_sq) * (w * w + z_sq));
    total += 2.0 * detail::em_tail(integral, f(M), df);
  }
  return total;
}

/// Closed form 1 / (2 z tanh(z/2)).
inline double trace_g_closed(double z_sq) {
  const double z = std::sqrt(z_sq);
  return 1.0 / (2.0 * z * std::tanh(0.5 * z));
}

/// sum_{n != 0} g_n(a) g_n(b) with g_n(a) = 1 / (omega_n^2 + a^2).
inline double pair_sum_nonzero(double a, double b, const MatsubaraTruncation& trunc = {}) {
  if (!(a > 0) || !(b > 0)) throw domain_error("pair_sum: a and b must be positive");
  detail::check(trunc);
  const double a2 = a * a, b2 = b * b;
  const auto f = [&](double n) {
    const double w2 = (two_pi * n) * (two_pi * n);
    return 1.0 / ((w2 + a2) * (w2 + b2));
  };
  double total = 2.0 * detail::sum_descending(trunc.n_max, f);
  if (trunc.tail == Tail::Integral) {
    const double M = static_cast<double>(trunc.n_max);
    const double w = two_pi * M;
    double integral = 0.0;
    if (w > 10.0 * std::max(a, b)) {
      // expansion of the integrand in 1/omega^2
      const double pi4 = std::pow(std::numbers::pi, 4);
      const double pi2 = std::numbers::pi * std::numbers::pi;
      const double c1 = a2 + b2, c2 = a2 * a2 + a2 * b2 + b2 * b2;
      integral = (1.0 / (16.0 * pi4)) *
                 (1.0 / (3.0 * M * M * M) - c1 / (20.0 * pi2 * std::pow(M, 5)) +
                  c2 / (112.0 * pi4 * std::pow(M, 7)));
    } else if (std::abs(b2 - a2) > 1e-6 * (a2 + b2)) {
      const double ia = std::atan(a / w) / (two_pi * a);
      const double ib = std::atan(b / w) / (two_pi * b);
      integral = (ia - ib) / (b2 - a2);
    } else {
      integral = (std::atan(a / w) / (2.0 * a2 * a) - w / (2.0 * a2 * (w * w + a2))) / two_pi;
    }
    const double w2 = w * w;
    const double df = -2.0 * two_pi * w * ((w2 + b2) + (w2 + a2)) /
                      ((w2 + a2) * (w2 + a2) * (w2 + b2) * (w2 + b2));
    total += 2.0 * detail::em_tail(integral, f(M), df);
  }
  return total;
}

/// sum_{n in Z} g_n(a) g_n(b) including n = 0, directly.
inline double pair_sum_direct(double a, double b, const MatsubaraTruncation& trunc = {}) {
  return 1.0 / (a * a * b * b) + pair_sum_nonzero(a, b, trunc);
}

/// (1/2ab) { (h(a)+h(b))/(a+b) - (h(a)-h(b))/(a-b) }, h(y) = coth(y/2)/2.
inline double pair_sum_closed(double a, double b) {
  const auto h = [](double y) { return 0.5 / std::tanh(0.5 * y); };
  return ((h(a) + h(b)) / (a + b) - (h(a) - h(b)) / (a - b)) / (2.0 * a * b);
}

/// C4 / 2F^2 from the chi-propagator Matsubara representation.
inline double c4_sum(double n, double x, const MatsubaraTruncation& trunc = {}) {
  if (!(n > 0) || !(x >= 0)) throw domain_error("c4_sum: requires n > 0, x >= 0");
  if (x == 0.0) return 0.0;
  const double z = std::log1p(1.0 / n);
  const double kappa = z / (2.0 * n + 1.0);
  const double zeta = 1.0 + 2.0 * kappa * n * (n + 1.0);
  const double zp = z * std::sqrt(1.0 + x);
  const double zpp = z * std::sqrt(1.0 + zeta * x);
  const double sum =
      pair_sum_nonzero(2.0 * z, 2.0 * zp, trunc) + zeta * zeta / (16.0 * z * z * zpp * zpp);
  // C4 / (16 kappa F^2)^2 = -(eta/2) sum and eta F^2 = x kappa (n + 1/2)^2
  const double half = n + 0.5;
  return -64.0 * x * kappa * kappa * kappa * half * half * sum;
}

// ---------------------------------------------------------------------------
// Partition function from its definition

namespace detail {

// Root of (z^2 - z0^2)/xi = coth(z/q)/z in z > 0, q = 2 for Z and q = 1 for
// the doubled-parameter saddle (in terms of z~). Plain bisection.
inline double bisect_gap(double z0_sq, double xi, double q) {
  if (xi == 0.0) {
    if (!(z0_sq > 0)) throw domain_error("oracle gap: Gaussian limit needs z0^2 > 0");
    return std::sqrt(z0_sq);
  }
  const auto g = [&](double z) { return (z * z - z0_sq) * z * std::tanh(z / q) - xi; };
  double lo = 0.0, hi = 1.0;
  while (g(hi) <= 0) hi *= 2.0;
  for (int it = 0; it < 2000 && hi - lo > 1e-17 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (g(mid) > 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ln(2 sinh(y)), overflow free
inline double log_two_sinh(double y) { return y + std::log1p(-std::exp(-2.0 * y)); }

}  // namespace detail

/// ln Z / N = -ln(2 sinh(z/2)) + (z^2 - z0^2)^2 / 8 xi at the gap solution.
inline double ln_z_by_definition(const OperatorParams& p) {
  if (!(p.A > 0)) throw non_positive_a("ln_z_by_definition: A must be positive");
  const double z0_sq = p.z0_sq(), xi = p.xi();
  const double z = detail::bisect_gap(z0_sq, xi, 2.0);
  const double ds = z * z - z0_sq;
  return -detail::log_two_sinh(0.5 * z) + (xi > 0 ? ds * ds / (8.0 * xi) : 0.0);
}

/// Z(2A, 2B, 2C, 2 eta) / Z(A, B, C, eta)^2 per component.
inline double purity_by_definition(const OperatorParams& p) {
  OperatorParams doubled{2.0 * p.A, 2.0 * p.B, 2.0 * p.C, 2.0 * p.eta};
  return std::exp(ln_z_by_definition(doubled) - 2.0 * ln_z_by_definition(p));
}

/// ln Z / N + A K + B F + 2 C R + eta F^2 for the state with moments m.
inline double entropy_by_definition(const GaussianMoments& m, double x) {
  const OperatorParams p = params_from_moments(m, x);
  return ln_z_by_definition(p) + p.A * m.K + p.B * m.F + 2.0 * p.C * m.R + p.eta * m.F * m.F;
}

/// Same with the canonical moments F = K = n + 1/2, R = 0.
inline double entropy_by_definition(double n, double x) {
  return entropy_by_definition(GaussianMoments{n + 0.5, n + 0.5, 0.0}, x);
}

/// Per-component ln of the Gaussian Wigner function of covariance (F, K, R),
/// normalized as int dphi dpi W / 2 pi = 1: -ln sqrt(FK - R^2) - X.S^-1.X / 2.
inline double gaussian_wigner_ln_w(const GaussianMoments& m, double phi, double pi) {
  const double det = m.F * m.K - m.R * m.R;
  const double quad = (m.K * phi * phi - 2.0 * m.R * phi * pi + m.F * pi * pi) / det;
  return -0.5 * std::log(det) - 0.5 * quad;
}

}  // namespace ngstate::oracle
