#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace ngstate::detail {

struct BracketResult {
  double root = 0.0;
  double value = 0.0;  ///< function value at root
  int iterations = 0;
  bool converged = false;
};

/// Brent-Dekker root search on [lo, hi]; f(lo) and f(hi) must have opposite
/// signs. Bisection guarantees progress, secant / inverse quadratic steps
/// accelerate once the bracket is tight. Stops when the bracket is below
/// abs_tol + rel_tol |x| or an exact zero is hit.
template <typename Function>
BracketResult brent_solve(const Function& f, double lo, double hi, double f_lo,
                          double f_hi, double abs_tol = 0.0,
                          double rel_tol = 2.0 * std::numeric_limits<double>::epsilon(),
                          int max_iterations = 200) {
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  BracketResult out;
  if (fa == 0.0) return {a, fa, 0, true};
  if (fb == 0.0) return {b, fb, 0, true};
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int it = 1; it <= max_iterations; ++it) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol =
        std::max(2.0 * rel_tol * std::abs(b) + 0.5 * abs_tol, 1e-300);
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) {
      return {b, fb, it, true};
    }
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    out.iterations = it;
  }
  out.root = b;
  out.value = fb;
  out.converged = false;
  return out;
}

}  // namespace ngstate::detail
