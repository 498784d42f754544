#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "ngstate/coherence.hpp"

using namespace ngstate;

namespace {

const WignerWidths vacuum{0.5, 0.5};

double pure_coherent(const CoherencePair& p) {
  const double a = 0.5 * (p.sum_a + p.diff_a), ap = 0.5 * (p.sum_a - p.diff_a);
  const double b = 0.5 * (p.sum_b + p.diff_b), bp = 0.5 * (p.sum_b - p.diff_b);
  return -0.5 * (a * a + b * b + ap * ap + bp * bp);
}

}  // namespace

TEST(OverlapCentered, VacuumReduction) {
  for (const CoherencePair& p : std::vector<CoherencePair>{
           {1.3, 0.4, 0.7, 2.1}, {0.0, 0.0, 0.0, 0.0}, {5.0, 3.0, 2.0, 9.0}, {0.1, 0.1, 10.0, 0.3}}) {
    EXPECT_NEAR(overlap_centered(p, vacuum), pure_coherent(p), 1e-12);
  }
}

TEST(OverlapCentered, DiagonalKeepsOnlySums) {
  const CoherencePair p{2.0, 0.0, 3.0, 0.0};
  const WignerWidths w{0.3, 2.0};
  EXPECT_DOUBLE_EQ(overlap_centered(p, w), -4.0 / (2.0 * 1.6) - 9.0 / (2.0 * 5.0));
}

TEST(OverlapCentered, Monotone) {
  const WignerWidths w{0.2, 3.0};
  const CoherencePair base{1.0, 1.0, 1.0, 1.0};
  double CoherencePair::*fields[] = {&CoherencePair::sum_a, &CoherencePair::diff_a,
                                     &CoherencePair::sum_b, &CoherencePair::diff_b};
  for (auto f : fields) {
    double prev = INFINITY;
    for (int i = 0; i <= 50; ++i) {
      CoherencePair p = base;
      p.*f = 0.2 * i;
      const double v = overlap_centered(p, w);
      EXPECT_LE(v, prev);
      prev = v;
    }
  }
}

TEST(OverlapCentered, DecayRateAsymmetry) {
  // Separation along the real axis decays at rate Delta_pi^2 / (1 + 2 Delta_pi^2),
  // along the imaginary axis at Delta_phi^2 / (1 + 2 Delta_phi^2).
  for (double dpi : {1e-3, 1e-2, 0.1, 0.5, 2.0}) {
    for (double dphi : {1e-3, 0.1, 0.5, 5.0}) {
      const WignerWidths w{dphi, dpi};
      const double d = 3.0;
      const double real_axis = overlap_centered({0.0, d, 0.0, 0.0}, w);
      const double imag_axis = overlap_centered({0.0, 0.0, 0.0, d}, w);
      EXPECT_NEAR(-real_axis / (d * d), dpi / (1.0 + 2.0 * dpi), 1e-15);
      EXPECT_NEAR(-imag_axis / (d * d), dphi / (1.0 + 2.0 * dphi), 1e-15);
      // the real-axis rate does not depend on Delta_phi
      EXPECT_EQ(real_axis, overlap_centered({0.0, d, 0.0, 0.0}, WignerWidths{1.0, dpi}));
    }
  }
  // squeezed momentum width gives long-range coherence along the real axis only
  const WignerWidths squeezed{50.0, 1e-4};
  EXPECT_GT(overlap_centered({0.0, 20.0, 0.0, 0.0}, squeezed), -0.05);
  EXPECT_LT(overlap_centered({0.0, 0.0, 0.0, 20.0}, squeezed), -100.0);
  // coherence length along the real axis grows as the momentum width shrinks
  double prev = -INFINITY;
  for (double dpi : {1.0, 0.3, 0.1, 0.03, 0.01}) {
    const double v = overlap_centered({0.0, 5.0, 0.0, 0.0}, WignerWidths{0.5, dpi});
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(OverlapCentered, Errors) {
  EXPECT_THROW(overlap_centered({-1.0, 0.0, 0.0, 0.0}, vacuum), domain_error);
  EXPECT_THROW(overlap_centered({1.0, 0.0, 0.0, 0.0}, WignerWidths{0.0, 0.5}), domain_error);
}

TEST(OverlapDisplaced, RadialFactorVanishesWhenBetaEqualsPhi0) {
  const int N = 20;
  const double phi0 = 40.0;
  // |beta_phi| = phi0 with x = 0: sum_a = sqrt(2) phi0, diff_b = 0
  const CoherencePair p{std::sqrt(2.0) * phi0, 0.0, 0.0, 0.0};
  const auto out = overlap_displaced(p, WignerWidths{0.2, 0.8}, phi0, N);
  EXPECT_NEAR(out.beta_phi, phi0, 1e-12);
  EXPECT_NEAR(out.ln_radial, 0.0, 1e-12);
  EXPECT_NEAR(out.ln_magnitude, overlap_centered(p, WignerWidths{0.2, 0.8}), 1e-12);
}

TEST(OverlapDisplaced, SymmetricCase) {
  const int N = 16;
  const double x_sq = 200.0;
  const double phi0 = std::sqrt(x_sq);
  EXPECT_NEAR(overlap_displaced_symmetric(phi0, x_sq, 0.3, N),
              0.25 * N * std::log(0.5) - 2.0 * 0.3 * x_sq / 1.6, 1e-12);
  EXPECT_EQ(overlap_displaced_symmetric(phi0, 0.0, 0.3, N), 0.0);
}

TEST(OverlapDisplaced, SymmetricCaseFromGeneralFormula) {
  // alpha = alpha'* = (phi0 e + i x)/sqrt 2 gives a + a' = sqrt 2 phi0 e,
  // b - b' = sqrt 2 x, so |beta_phi|^2 = phi0^2 + x^2
  const int N = 12;
  const double phi0 = 30.0, x = 7.0;
  const WignerWidths w{0.25, 0.5};
  const CoherencePair p{std::sqrt(2.0) * phi0, 0.0, 0.0, std::sqrt(2.0) * x};
  const auto out = overlap_displaced(p, w, phi0, N);
  EXPECT_NEAR(out.beta_phi * out.beta_phi, phi0 * phi0 + x * x, 1e-10);
  EXPECT_NEAR(out.ln_radial, 0.25 * N * std::log(phi0 * phi0 / (phi0 * phi0 + x * x)), 1e-12);
  const double gaussian = -phi0 * phi0 / (1.0 + 2.0 * w.delta_phi_sq) -
                          2.0 * w.delta_phi_sq * x * x / (1.0 + 2.0 * w.delta_phi_sq);
  EXPECT_NEAR(out.ln_magnitude - out.ln_radial, gaussian, 1e-10);
}

TEST(OverlapDisplaced, DecayInXControlledByPhiWidth) {
  const double phi0 = 25.0;
  double prev_small = 0.0, prev_large = 0.0;
  for (double x_sq : {1.0, 4.0, 16.0, 64.0}) {
    const double narrow = overlap_displaced_symmetric(phi0, x_sq, 0.01, 10);
    const double wide = overlap_displaced_symmetric(phi0, x_sq, 5.0, 10);
    EXPECT_GT(narrow, wide);
    EXPECT_LT(narrow, prev_small);
    EXPECT_LT(wide, prev_large);
    prev_small = narrow;
    prev_large = wide;
  }
}

TEST(OverlapDisplaced, CosineEnvelope) {
  const CoherencePair p{60.0, 0.0, 0.0, 0.0};
  const auto out = overlap_displaced(p, vacuum, 30.0, 8);
  const double Y = 2.0 * out.beta_phi * 30.0;
  EXPECT_NEAR(out.ln_cos_envelope, Y - std::log(2.0), 1e-9);
  EXPECT_NEAR(out.ln_abs_cos, out.ln_cos_envelope, 1e-9);
  EXPECT_TRUE(std::isfinite(out.ln_abs_cos));
}

TEST(OverlapDisplaced, RegimeViolation) {
  const CoherencePair p{1.0, 0.0, 0.0, 0.0};
  EXPECT_THROW(overlap_displaced(p, vacuum, 1.0, 20), asymptotic_regime_violation);
  EXPECT_NO_THROW(overlap_displaced(p, vacuum, 1.0, 20, 100.0));
  EXPECT_THROW(overlap_displaced(p, vacuum, 1.0, 7), domain_error);
  EXPECT_THROW(overlap_displaced(p, vacuum, 0.0, 20), domain_error);
}
