#pragma once

// Special-function kernels of the large-N machinery.
//
// Every kernel takes s = z^2 instead of z. For s < 0 the frequency is purely
// imaginary, z = i y with y = sqrt(-s), and each function is continued to the
// corresponding real expression in y (tanh -> tan, sinh -> sin, ...). Near
// s = 0 both branches are replaced by ratios of the entire power series
//
//   S(t) = sinh(sqrt t) / sqrt t = sum_k t^k / (2k+1)!
//   C(t) = cosh(sqrt t)          = sum_k t^k / (2k)!
//
// so the two branches join without 0/0 cancellation.

#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ngstate/errors.hpp"

namespace ngstate::specfun {

inline constexpr double pi = std::numbers::pi;
inline constexpr double pi_sq = std::numbers::pi * std::numbers::pi;

/// |s| below this uses the power-series path.
inline constexpr double series_threshold = 1.0;

namespace detail {

inline constexpr int series_terms = 14;

// sum_k t^k / (2k+1+offset)!  for offset in {0, 1, 2}.
inline double factorial_series(double t, int offset) {
  double term = 1.0;
  for (int j = 2; j <= 1 + offset; ++j) term /= j;
  double sum = term;
  for (int k = 1; k < series_terms; ++k) {
    const int a = 2 * k + offset;
    term *= t / (static_cast<double>(a) * (a + 1));
    sum += term;
  }
  return sum;
}

inline double series_s(double t) { return factorial_series(t, 0); }

inline double series_c(double t) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < series_terms; ++k) {
    term *= t / (static_cast<double>(2 * k - 1) * (2 * k));
    sum += term;
  }
  return sum;
}

// sum_k 2(k+1) t^k / (2k+3)!, so that z coth z - 1 = t * S(t)^-1 * this.
inline double series_f0_numerator(double t) {
  double fact = 6.0;  // 3!
  double power = 1.0, sum = 0.0;
  for (int k = 0; k < series_terms; ++k) {
    if (k > 0) {
      fact *= static_cast<double>(2 * k + 2) * (2 * k + 3);
      power *= t;
    }
    sum += 2.0 * (k + 1) * power / fact;
  }
  return sum;
}

inline void require_above(double s, double floor, const char* what) {
  if (!(s > floor)) {
    throw domain_error(std::string(what) + ": s = " + std::to_string(s) +
                       " at or beyond the pole");
  }
}

}  // namespace detail

/// sinh(z)/z continued in s, i.e. sin(y)/y for s = -y^2.
inline double sinhc(double s) {
  if (std::abs(s) < series_threshold) return detail::series_s(s);
  if (s > 0) {
    const double z = std::sqrt(s);
    return std::sinh(z) / z;
  }
  const double y = std::sqrt(-s);
  return std::sin(y) / y;
}

/// ln(sinh(z)/z), overflow-free for large s. Requires s > -pi^2.
inline double log_sinhc(double s) {
  detail::require_above(s, -pi_sq, "log_sinhc");
  if (std::abs(s) < series_threshold) return std::log(detail::series_s(s));
  if (s > 0) {
    const double z = std::sqrt(s);
    return z + std::log1p(-std::exp(-2.0 * z)) - std::log(2.0 * z);
  }
  const double y = std::sqrt(-s);
  return std::log(std::sin(y) / y);
}

/// z tanh(z/2) as a function of s = z^2; the reciprocal of the trace gap
/// right-hand side. Equal to kappa when z = ln(1 + 1/n).
inline double h_trace(double s) {
  detail::require_above(s, -pi_sq, "h_trace");
  if (std::abs(s) < series_threshold) {
    return 0.5 * s * detail::series_s(0.25 * s) / detail::series_c(0.25 * s);
  }
  if (s > 0) {
    const double z = std::sqrt(s);
    return z * std::tanh(0.5 * z);
  }
  const double y = std::sqrt(-s);
  return -y * std::tan(0.5 * y);
}

/// z tanh(z), the doubled-parameter (purity) analogue of h_trace.
inline double h2(double s) {
  detail::require_above(s, -0.25 * pi_sq, "h2");
  if (std::abs(s) < series_threshold) {
    return s * detail::series_s(s) / detail::series_c(s);
  }
  if (s > 0) {
    const double z = std::sqrt(s);
    return z * std::tanh(z);
  }
  const double y = std::sqrt(-s);
  return -y * std::tan(y);
}

/// tanh(z/2) / z, continued to tan(y/2) / y. Requires s > -pi^2.
inline double tanh_half_over_z(double s) {
  detail::require_above(s, -pi_sq, "tanh_half_over_z");
  if (std::abs(s) < series_threshold) {
    return 0.5 * detail::series_s(0.25 * s) / detail::series_c(0.25 * s);
  }
  if (s > 0) {
    const double z = std::sqrt(s);
    return std::tanh(0.5 * z) / z;
  }
  const double y = std::sqrt(-s);
  return std::tan(0.5 * y) / y;
}

/// ln cosh(z/2), continued to ln cos(y/2). Requires s > -pi^2.
inline double log_cosh_half(double s) {
  detail::require_above(s, -pi_sq, "log_cosh_half");
  if (std::abs(s) < series_threshold) return std::log(detail::series_c(0.25 * s));
  if (s > 0) {
    const double z = std::sqrt(s);
    return 0.5 * z + std::log1p(std::exp(-z)) - std::numbers::ln2;
  }
  return std::log(std::cos(0.5 * std::sqrt(-s)));
}

/// Exponent coefficients of the Gaussian position-basis kernel.
struct BigF {
  double f0;  ///< -ln sqrt(z / (4 pi sinh z))
  double fu;  ///< (z/2) tanh(z/2)
  double fv;  ///< (z/2) / tanh(z/2)
};

inline BigF big_f(double s) {
  detail::require_above(s, -pi_sq, "big_f");
  BigF out{};
  out.f0 = 0.5 * std::log(4.0 * pi) + 0.5 * log_sinhc(s);
  out.fu = 0.5 * h_trace(s);
  if (std::abs(s) < series_threshold) {
    out.fv = detail::series_c(0.25 * s) / detail::series_s(0.25 * s);
  } else if (s > 0) {
    const double half = 0.5 * std::sqrt(s);
    out.fv = half / std::tanh(half);
  } else {
    const double half = 0.5 * std::sqrt(-s);
    out.fv = half / std::tan(half);
  }
  return out;
}

/// Right-hand-side functions of the matrix-element saddle equation,
/// f_i = 2 F_i'(z) / z = 4 dF_i/ds.
struct SmallF {
  double f0;
  double fu;
  double fv;
};

inline SmallF small_f(double s) {
  detail::require_above(s, -pi_sq, "small_f");
  SmallF out{};
  if (std::abs(s) < series_threshold) {
    const double sh = detail::series_s(s);
    const double ch = detail::series_c(s);
    out.f0 = detail::series_f0_numerator(s) / sh;
    out.fu = (sh + 1.0) / (ch + 1.0);
    // sinh z / z - 1 = s * sum t^k/(2k+3)!,  cosh z - 1 = s * sum t^k/(2k+2)!
    out.fv = detail::factorial_series(s, 2) / detail::factorial_series(s, 1);
    return out;
  }
  if (s > 0) {
    const double z = std::sqrt(s);
    const double e = std::exp(-z);
    const double shz = (1.0 - e * e) / z;  // 2 e^-z sinh(z) / z
    out.f0 = (z / std::tanh(z) - 1.0) / s;
    out.fu = (shz + 2.0 * e) / ((1.0 + e) * (1.0 + e));
    out.fv = (shz - 2.0 * e) / ((1.0 - e) * (1.0 - e));
    return out;
  }
  const double y = std::sqrt(-s);
  const double sc = std::sin(y) / y;
  const double c_half = std::cos(0.5 * y);
  const double s_half = std::sin(0.5 * y);
  out.f0 = (1.0 - y * std::cos(y) / std::sin(y)) / (y * y);
  out.fu = (sc + 1.0) / (2.0 * c_half * c_half);
  out.fv = (1.0 - sc) / (2.0 * s_half * s_half);
  return out;
}

namespace detail {
using bessel_policy =
    boost::math::policies::policy<boost::math::policies::promote_double<false>>;
}

/// Bessel function of the first kind, integer order.
inline double bessel_j(int order, double x) {
  if (order < 0 || x < 0) {
    throw domain_error("bessel_j: negative order or argument");
  }
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  return boost::math::cyl_bessel_j(order, x, detail::bessel_policy{});
}

/// J_nu(x) / ((x/2)^nu / nu!), the regular part of the small-argument
/// expansion. Only meant for x of order one or smaller.
inline double bessel_j_reduced(int order, double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace ngstate::specfun
