#pragma once

// Magnitudes of coherent-state matrix elements |<alpha|D|alpha'>| obtained
// from a Gaussian-shaped Wigner function, up to overall normalization.
// alpha = a + i b and alpha' = a' + i b' are O(N) vectors.

#include <cmath>
#include <numbers>
#include <string>

#include "ngstate/errors.hpp"

namespace ngstate {

/// The four O(N) invariants |a+a'|, |a-a'|, |b+b'|, |b-b'|.
struct CoherencePair {
  double sum_a = 0.0;
  double diff_a = 0.0;
  double sum_b = 0.0;
  double diff_b = 0.0;

  void validate() const {
    if (!(sum_a >= 0) || !(diff_a >= 0) || !(sum_b >= 0) || !(diff_b >= 0)) {
      throw domain_error("CoherencePair: invariants must be non-negative");
    }
  }
};

/// Per-component Wigner widths Delta_phi^2, Delta_pi^2.
struct WignerWidths {
  double delta_phi_sq = 0.5;
  double delta_pi_sq = 0.5;

  void validate() const {
    if (!(delta_phi_sq > 0) || !(delta_pi_sq > 0)) {
      throw domain_error("WignerWidths: widths must be positive");
    }
  }
};

/// ln |<alpha|D|alpha'>| for W centred at the origin.
inline double overlap_centered(const CoherencePair& p, const WignerWidths& w) {
  p.validate();
  w.validate();
  const double gphi = 1.0 + 2.0 * w.delta_phi_sq;
  const double gpi = 1.0 + 2.0 * w.delta_pi_sq;
  return -p.sum_a * p.sum_a / (2.0 * gphi) - p.sum_b * p.sum_b / (2.0 * gpi) -
         w.delta_pi_sq * p.diff_a * p.diff_a / gpi - w.delta_phi_sq * p.diff_b * p.diff_b / gphi;
}

struct DisplacedOverlap {
  double ln_magnitude = 0.0;  ///< radial factor plus Gaussian factors, cosine excluded
  double ln_radial = 0.0;     ///< (N/2) ln(phi0 / |beta_phi|)
  double ln_abs_cos = 0.0;    ///< ln |cos(2 i |beta_phi| phi0 - N pi/4)|
  double ln_cos_envelope = 0.0;  ///< ln cosh(2 |beta_phi| phi0), the growth part of the cosine
  double beta_phi = 0.0;
};

/// W centred on the shell |phi| = phi0 (per component), in the asymptotic
/// regime |beta_phi| phi0 >> N/2. |beta_phi|^2 = ((a+a')^2 + (b-b')^2) / 2.
/// regime_factor relaxes the check to |beta_phi| phi0 >= N / (2 regime_factor).
inline DisplacedOverlap overlap_displaced(const CoherencePair& p, const WignerWidths& w,
                                          double phi0, int N, double regime_factor = 1.0) {
  p.validate();
  w.validate();
  if (!(phi0 > 0)) throw domain_error("overlap_displaced: phi0 must be positive");
  if (N < 2 || N % 2 != 0) throw domain_error("overlap_displaced: N must be even and >= 2");
  if (!(regime_factor > 0)) throw domain_error("overlap_displaced: regime_factor must be positive");
  DisplacedOverlap out;
  out.beta_phi = std::sqrt(0.5 * (p.sum_a * p.sum_a + p.diff_b * p.diff_b));
  const double product = out.beta_phi * phi0;
  if (product * regime_factor < 0.5 * N) {
    throw asymptotic_regime_violation("overlap_displaced: |beta_phi| phi0 = " +
                                      std::to_string(product) + " is not >> N/2");
  }
  out.ln_radial = 0.5 * N * std::log(phi0 / out.beta_phi);
  out.ln_magnitude = out.ln_radial + overlap_centered(p, w);
  // |cos(X + iY)|^2 = cos^2 X + sinh^2 Y with X = -N pi / 4, Y = 2 |beta| phi0
  const double X = 0.25 * N * std::numbers::pi;
  const double Y = 2.0 * product;
  const double c = std::cos(X);
  // ln(cos^2 X + sinh^2 Y) / 2, written for large Y
  const double e = std::exp(-2.0 * Y);
  const double sinh_scaled = 0.5 * (1.0 - e);  // sinh(Y) e^{-Y}
  out.ln_abs_cos = Y + 0.5 * std::log(c * c * e + sinh_scaled * sinh_scaled);
  out.ln_cos_envelope = Y + std::log1p(e) - std::numbers::ln2;
  return out;
}

/// The case alpha = alpha'* = (phi0 e + i x)/sqrt 2 with e orthogonal to x:
/// (N/4) ln(phi0^2/(phi0^2 + x^2)) - 2 Delta_phi^2 x^2 / (1 + 2 Delta_phi^2).
inline double overlap_displaced_symmetric(double phi0, double x_sq, double delta_phi_sq, int N) {
  if (!(phi0 > 0) || !(x_sq >= 0) || !(delta_phi_sq > 0)) {
    throw domain_error("overlap_displaced_symmetric: invalid arguments");
  }
  const double p2 = phi0 * phi0;
  return 0.25 * N * std::log(p2 / (p2 + x_sq)) -
         2.0 * delta_phi_sq * x_sq / (1.0 + 2.0 * delta_phi_sq);
}

}  // namespace ngstate
