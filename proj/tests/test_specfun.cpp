#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

using namespace ngstate;
using specfun::pi;
using specfun::pi_sq;

namespace {

const double ln2 = std::log(2.0);

// J_nu(x) from its power series in 50-digit arithmetic.
double bessel_series_mp(int nu, double x) {
  using mp = boost::multiprecision::cpp_dec_float_50;
  const mp half = mp(x) / 2;
  const mp q = -half * half;
  mp term = boost::multiprecision::pow(half, nu);
  for (int k = 1; k <= nu; ++k) term /= k;
  mp sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (mp(k) * (k + nu));
    sum += term;
  }
  return sum.convert_to<double>();
}

struct Named {
  std::string name;
  std::function<double(double)> f;
};

std::vector<Named> all_kernels() {
  return {
      {"h_trace", specfun::h_trace},
      {"h2", specfun::h2},
      {"F0", [](double s) { return specfun::big_f(s).f0; }},
      {"Fu", [](double s) { return specfun::big_f(s).fu; }},
      {"Fv", [](double s) { return specfun::big_f(s).fv; }},
      {"f0", [](double s) { return specfun::small_f(s).f0; }},
      {"fu", [](double s) { return specfun::small_f(s).fu; }},
      {"fv", [](double s) { return specfun::small_f(s).fv; }},
      {"tanh_half_over_z", specfun::tanh_half_over_z},
      {"log_cosh_half", specfun::log_cosh_half},
  };
}

}  // namespace

TEST(HTrace, ValueAtLn2Squared) { EXPECT_NEAR(specfun::h_trace(ln2 * ln2), ln2 / 3.0, 1e-15); }

TEST(HTrace, ZeroAtOrigin) { EXPECT_EQ(specfun::h_trace(0.0), 0.0); }

TEST(HTrace, ImaginaryBranchAtQuarterPiSquared) {
  EXPECT_NEAR(specfun::h_trace(-pi_sq / 4.0), -pi / 2.0, 1e-14);
}

TEST(HTrace, SeriesMatchesLeadingTaylorTerms) {
  const double s = 1e-3;
  EXPECT_NEAR(specfun::h_trace(s), s / 2 - s * s / 24 + s * s * s / 240, 1e-14);
}

TEST(HTrace, DomainErrorAtPole) {
  EXPECT_THROW(specfun::h_trace(-pi_sq), domain_error);
  EXPECT_THROW(specfun::h_trace(-10.0), domain_error);
}

TEST(H2, MatchesZTanhZAndPole) {
  EXPECT_NEAR(specfun::h2(4.0), 2.0 * std::tanh(2.0), 1e-15);
  EXPECT_NEAR(specfun::h2(-1.0), -std::tan(1.0), 1e-14);
  EXPECT_THROW(specfun::h2(-pi_sq / 4.0), domain_error);
}

TEST(BigF, LimitAtOrigin) {
  const auto F = specfun::big_f(0.0);
  EXPECT_NEAR(F.f0, 0.5 * std::log(4.0 * pi), 1e-15);
  EXPECT_EQ(F.fu, 0.0);
  EXPECT_NEAR(F.fv, 1.0, 1e-15);
}

TEST(BigF, FuAtLn2Squared) { EXPECT_NEAR(specfun::big_f(ln2 * ln2).fu, 0.11552453, 1e-8); }

TEST(BigF, FuNegativeOnImaginaryBranch) {
  const double fu = specfun::big_f(-1.0).fu;
  EXPECT_NEAR(fu, -0.5 * std::tan(0.5), 1e-14);
  EXPECT_NEAR(fu, -0.27316, 1e-5);
}

TEST(BigF, F0ClosedFormBothBranches) {
  EXPECT_NEAR(specfun::big_f(9.0).f0, -0.5 * std::log(3.0 / (4.0 * pi * std::sinh(3.0))), 1e-14);
  EXPECT_NEAR(specfun::big_f(-4.0).f0, -0.5 * std::log(2.0 / (4.0 * pi * std::sin(2.0))), 1e-14);
}

TEST(BigF, DomainError) { EXPECT_THROW(specfun::big_f(-pi_sq), domain_error); }

TEST(SmallF, ValuesAtOrigin) {
  const auto f = specfun::small_f(0.0);
  EXPECT_NEAR(f.f0, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(f.fu, 1.0, 1e-15);
  EXPECT_NEAR(f.fv, 1.0 / 3.0, 1e-15);
}

TEST(SmallF, F0AtFour) {
  EXPECT_NEAR(specfun::small_f(4.0).f0, (2.0 / std::tanh(2.0) - 1.0) / 4.0, 1e-15);
  EXPECT_NEAR(specfun::small_f(4.0).f0, 0.2686574, 1e-7);
}

TEST(SmallF, F0AtMinusFour) {
  EXPECT_NEAR(specfun::small_f(-4.0).f0, (1.0 - 2.0 / std::tan(2.0)) / 4.0, 1e-15);
  EXPECT_NEAR(specfun::small_f(-4.0).f0, 0.4788288, 1e-7);
}

TEST(SmallF, ClosedFormsAwayFromSeries) {
  const double z = 3.0;
  const auto f = specfun::small_f(z * z);
  EXPECT_NEAR(f.fu, (std::sinh(z) / z + 1.0) / (2.0 * std::pow(std::cosh(z / 2), 2)), 1e-14);
  EXPECT_NEAR(f.fv, (std::sinh(z) / z - 1.0) / (2.0 * std::pow(std::sinh(z / 2), 2)), 1e-14);
}

TEST(SmallF, F0DivergesAtPole) {
  EXPECT_GT(specfun::small_f(-pi_sq + 1e-6).f0, 1e5);
  EXPECT_THROW(specfun::small_f(-pi_sq), domain_error);
}

TEST(SmallF, LargeArgumentIsFinite) {
  const auto f = specfun::small_f(1e6);
  EXPECT_TRUE(std::isfinite(f.f0) && std::isfinite(f.fu) && std::isfinite(f.fv));
  EXPECT_NEAR(f.f0, 1.0 / 1000.0 - 1e-6, 1e-12);
}

TEST(HalfKernels, ClosedForms) {
  EXPECT_NEAR(specfun::tanh_half_over_z(4.0), std::tanh(1.0) / 2.0, 1e-15);
  EXPECT_NEAR(specfun::tanh_half_over_z(-4.0), std::tan(1.0) / 2.0, 1e-15);
  EXPECT_NEAR(specfun::log_cosh_half(4.0), std::log(std::cosh(1.0)), 1e-15);
  EXPECT_NEAR(specfun::log_cosh_half(-4.0), std::log(std::cos(1.0)), 1e-15);
  EXPECT_NEAR(specfun::log_cosh_half(1e6), 500.0 - std::log(2.0), 1e-10);
}

TEST(Invariants, BranchContinuityAcrossZero) {
  const double eps = 1e-6;
  for (const auto& k : all_kernels()) {
    EXPECT_LT(std::abs(k.f(eps) - k.f(-eps)), 1e-9) << k.name;
  }
}

TEST(Invariants, NoJumpAcrossZero) {
  // a jump J at s = 0 leaves J / 2 in this combination; a smooth kernel leaves O(eps^3)
  for (double eps : {1e-6, 1e-4}) {
    for (const auto& k : all_kernels()) {
      const double d1 = k.f(eps) - k.f(-eps);
      const double d2 = k.f(2 * eps) - k.f(-2 * eps);
      EXPECT_LT(std::abs(d1 - d2 / 2.0), 1e-12) << k.name << " eps=" << eps;
    }
  }
}

TEST(Invariants, ContinuityAtSeriesThreshold) {
  const double t = specfun::series_threshold;
  for (const auto& k : all_kernels()) {
    for (double edge : {t, -t}) {
      const double below = k.f(std::nextafter(edge, 0.0));
      const double at = k.f(edge);
      EXPECT_NEAR(below, at, 1e-14 * std::max(1.0, std::abs(at))) << k.name << " at " << edge;
    }
  }
}

TEST(Invariants, SignStructure) {
  for (int i = 1; i < 200; ++i) {
    const double s = -pi_sq * i / 200.0;
    const auto F = specfun::big_f(s);
    const auto f = specfun::small_f(s);
    EXPECT_LT(F.fu, 0) << s;
    EXPECT_GT(F.fv, 0) << s;
    EXPECT_GT(f.f0, 0) << s;
    EXPECT_GT(f.fu, 0) << s;
    EXPECT_GT(f.fv, 0) << s;
  }
  for (double s : {1e-8, 1e-3, 0.5, 1.0, 3.0, 50.0, 1e3}) {
    const auto F = specfun::big_f(s);
    const auto f = specfun::small_f(s);
    EXPECT_GT(specfun::h_trace(s), 0);
    EXPECT_GT(F.fu, 0);
    EXPECT_GT(F.fv, 0);
    EXPECT_GT(f.f0, 0);
    EXPECT_GT(f.fu, 0);
    EXPECT_GT(f.fv, 0);
  }
}

TEST(Invariants, KappaIdentity) {
  for (double n : {1e-3, 0.1, 0.5, 1.0, 10.0, 1e3}) {
    const double z = std::log1p(1.0 / n);
    EXPECT_NEAR(specfun::h_trace(z * z), kappa_of(n), 1e-12 * kappa_of(n)) << n;
  }
}

TEST(Bessel, ValuesAtZero) {
  EXPECT_EQ(specfun::bessel_j(0, 0.0), 1.0);
  EXPECT_EQ(specfun::bessel_j(1, 0.0), 0.0);
}

TEST(Bessel, J9At10AgainstMultiprecisionSeries) {
  const double ref = bessel_series_mp(9, 10.0);
  EXPECT_NEAR(specfun::bessel_j(9, 10.0), ref, 1e-10 * std::abs(ref));
}

TEST(Bessel, AgreesWithSeriesOverOrders) {
  for (int nu : {0, 1, 5, 19, 31, 63}) {
    for (double x : {0.5, 3.0, 12.0, 40.0}) {
      const double ref = bessel_series_mp(nu, x);
      EXPECT_NEAR(specfun::bessel_j(nu, x), ref, 1e-10 * std::max(std::abs(ref), 1e-300) + 1e-15)
          << nu << " " << x;
    }
  }
}

TEST(Bessel, Bounded) {
  for (int nu = 0; nu <= 64; nu += 3) {
    for (double x = 0.0; x <= 1e4; x = 1.7 * x + 0.31) {
      EXPECT_LE(std::abs(specfun::bessel_j(nu, x)), 1.0) << nu << " " << x;
    }
  }
}

TEST(Bessel, ReducedFormMatchesFullFunction) {
  for (int nu : {0, 3, 19}) {
    for (double x : {0.1, 1.0, 2.0}) {
      const double scale = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
      EXPECT_NEAR(specfun::bessel_j_reduced(nu, x) * scale, specfun::bessel_j(nu, x), 1e-14 * scale + 1e-300);
    }
  }
}

TEST(Bessel, DomainErrors) {
  EXPECT_THROW(specfun::bessel_j(-1, 1.0), domain_error);
  EXPECT_THROW(specfun::bessel_j(1, -1.0), domain_error);
}
