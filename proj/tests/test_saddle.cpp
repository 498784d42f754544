#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ngstate/densmat.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"

using namespace ngstate;
using specfun::pi_sq;

namespace {

const double ln2 = std::log(2.0);

double gap_lhs_minus_rhs(const ReducedState& st, double s) {
  return (s - st.z0_sq) / st.xi - 1.0 / specfun::h_trace(s);
}

double uv_lhs_minus_rhs(const ReducedState& st, double s, double u_sq, double v_sq) {
  const auto f = specfun::small_f(s);
  return (s - st.z0_sq) / st.xi - (f.f0 + f.fu * u_sq + f.fv * v_sq);
}

}  // namespace

TEST(SolveGap, GaussianLimit) {
  const auto sol = solve_gap(ReducedState::make(1.0, 0.0));
  EXPECT_NEAR(sol.s, ln2 * ln2, 1e-15);
  EXPECT_NEAR(sol.s, 0.48045, 1e-5);
  EXPECT_EQ(sol.branch, Branch::Real);
}

TEST(SolveGap, RecoversConstructionFrequency) {
  const auto st = ReducedState::make(1.0, 5.0);
  const auto sol = solve_gap(st);
  EXPECT_NEAR(sol.s, ln2 * ln2, 1e-13);
  EXPECT_LT(sol.residual, 1e-12);
  EXPECT_LT(std::abs(gap_lhs_minus_rhs(st, sol.s)), 1e-12 * std::abs((sol.s - st.z0_sq) / st.xi));
}

TEST(SolveGap, NegativeGaussianFrequencyStillReal) {
  const auto st = ReducedState::make(2.0, 3.0);
  ASSERT_LT(st.z0_sq, 0.0);
  const auto sol = solve_gap(st);
  EXPECT_GT(sol.s, 0.0);
  EXPECT_NEAR(sol.s, std::pow(std::log1p(0.5), 2), 1e-13);
}

TEST(SolveGap, ConstructionFrequencyOverGrid) {
  for (double n : {1e-3, 0.1, 1.0, 10.0, 1e3}) {
    for (double x : {0.0, 0.3, 1.0, 15.0, 1e4}) {
      const auto st = ReducedState::make(n, x);
      const double L = std::log1p(1.0 / n);
      EXPECT_NEAR(solve_gap(st).s, L * L, 1e-11 * L * L) << n << " " << x;
    }
  }
}

TEST(SolveGap, Errors) {
  EXPECT_THROW(solve_gap(-1.0, 0.0), domain_error);
  EXPECT_THROW(solve_gap(1.0, -1.0), domain_error);
}

TEST(SolveGapTilde, GaussianLimitEqualsZ) {
  const auto st = ReducedState::make(3.0, 0.0);
  EXPECT_EQ(solve_gap_tilde(st).s, st.z0_sq);
}

TEST(SolveGapTilde, LargeNRatio) {
  const auto st = ReducedState::make(100.0, 1.0);
  const double zt = std::sqrt(solve_gap_tilde(st).s);
  const double nt = 1.0 / std::expm1(zt);
  EXPECT_NEAR(nt / 100.0, std::sqrt(2.0 / (std::sqrt(5.0) - 1.0)), 2e-3);
  EXPECT_NEAR(nt / 100.0, 1.2720, 2e-3);
}

TEST(SolveGapTilde, TildeFrequencyBelowZ) {
  for (double n : {1e-3, 0.1, 1.0, 10.0, 100.0}) {
    for (double x : {1e-3, 0.5, 1.0, 15.0, 1e3}) {
      const auto st = ReducedState::make(n, x);
      const auto sol = solve_gap_tilde(st);
      EXPECT_LT(sol.s, solve_gap(st).s) << n << " " << x;
      EXPECT_GT(sol.s, 0.0);
      EXPECT_LT(sol.residual, 1e-12);
      const double z = std::sqrt(sol.s);
      EXPECT_NEAR((sol.s - st.z0_sq) / st.xi, 1.0 / (z * std::tanh(z)),
                  1e-12 * std::abs((sol.s - st.z0_sq) / st.xi));
    }
  }
}

TEST(SolveSaddleUV, BranchLocusGivesZero) {
  const auto st = ReducedState::make(10.0, 15.0);
  for (double v_sq : {0.0, 1.0, 10.0, 100.0}) {
    const auto uc = u_c_sq(st, v_sq);
    ASSERT_TRUE(uc.has_value());
    EXPECT_NEAR(solve_saddle_uv(st, *uc, v_sq).s, 0.0, 1e-10) << v_sq;
  }
}

TEST(SolveSaddleUV, GaussianLimitPinsZ0) {
  const auto st = ReducedState::make(2.0, 0.0);
  for (double u_sq : {0.0, 1.0, 50.0}) {
    for (double v_sq : {0.0, 3.0}) EXPECT_EQ(solve_saddle_uv(st, u_sq, v_sq).s, st.z0_sq);
  }
  // small x approaches the same value
  const auto near = ReducedState::make(2.0, 1e-9);
  EXPECT_NEAR(solve_saddle_uv(near, 5.0, 2.0).s, near.z0_sq, 1e-7);
}

TEST(SolveSaddleUV, ImaginaryAtOrigin) {
  const auto st = ReducedState::make(10.0, 15.0);
  EXPECT_NEAR(-st.z0_sq / st.xi, 213.0, 0.5);
  const auto sol = solve_saddle_uv(st, 0.0, 0.0);
  EXPECT_LT(sol.s, 0.0);
  EXPECT_GT(sol.s, -pi_sq);
  EXPECT_EQ(sol.branch, Branch::ImaginaryContinued);
}

TEST(SolveSaddleUV, BranchMatchesCriterion) {
  const auto st = ReducedState::make(10.0, 15.0);
  const double threshold = -st.z0_sq / st.xi;
  for (double u_sq : {0.0, 50.0, 200.0, 212.0, 213.5, 300.0}) {
    for (double v_sq : {0.0, 0.5, 3.0}) {
      const bool real = 1.0 / 3.0 + u_sq + v_sq / 3.0 >= threshold;
      EXPECT_EQ(solve_saddle_uv(st, u_sq, v_sq).branch == Branch::Real, real) << u_sq << " " << v_sq;
    }
  }
}

TEST(SolveSaddleUV, Errors) {
  const auto st = ReducedState::make(1.0, 1.0);
  EXPECT_THROW(solve_saddle_uv(st, -1.0, 0.0), domain_error);
  EXPECT_THROW(solve_saddle_uv(st, 0.0, -1.0), domain_error);
  EXPECT_THROW(solve_saddle_uv(-20.0, 0.0, 0.0, 0.0), domain_error);
}

TEST(Invariants, ResidualSubstitution) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> ln_n(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> ln_x(std::log(1e-2), std::log(1e3));
  std::uniform_real_distribution<double> uv(0.0, 400.0);
  for (int k = 0; k < 100; ++k) {
    const auto st = ReducedState::make(std::exp(ln_n(rng)), std::exp(ln_x(rng)));
    const double u_sq = uv(rng), v_sq = 0.05 * uv(rng);
    const auto sol = solve_saddle_uv(st, u_sq, v_sq);
    const auto f = specfun::small_f(sol.s);
    const double rhs = f.f0 + f.fu * u_sq + f.fv * v_sq;
    EXPECT_LT(sol.residual, 1e-12);
    EXPECT_LT(std::abs(uv_lhs_minus_rhs(st, sol.s, u_sq, v_sq)), 1e-12 * rhs);
    const auto gap = solve_gap(st);
    EXPECT_LT(gap.residual, 1e-12);
  }
}

TEST(Invariants, UniqueSignChange) {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> ln_n(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> ln_x(std::log(1e-2), std::log(1e3));
  std::uniform_real_distribution<double> uv(0.0, 400.0);
  for (int k = 0; k < 100; ++k) {
    const auto st = ReducedState::make(std::exp(ln_n(rng)), std::exp(ln_x(rng)));
    const double u_sq = uv(rng), v_sq = 0.05 * uv(rng);
    const double root = solve_saddle_uv(st, u_sq, v_sq).s;
    const double lo = -pi_sq + 1e-6;
    const double hi = std::max(4.0 * root, 0.0) + std::max(std::abs(st.z0_sq), 1.0) + 50.0;
    int changes = 0;
    double prev = uv_lhs_minus_rhs(st, lo, u_sq, v_sq);
    const int steps = 4000;
    for (int i = 1; i <= steps; ++i) {
      const double s = lo + (hi - lo) * i / steps;
      const double cur = uv_lhs_minus_rhs(st, s, u_sq, v_sq);
      if ((prev < 0) != (cur < 0)) ++changes;
      prev = cur;
    }
    EXPECT_EQ(changes, 1) << "draw " << k << " n=" << st.n << " x=" << st.x;
  }
}

TEST(Invariants, BranchBoundary) {
  for (double n : {1.0, 10.0, 100.0}) {
    const auto st = ReducedState::make(n, 3.0 * peak_threshold_x(n));
    for (double v_sq : {0.0, 0.5, 2.0}) {
      const auto uc = u_c_sq(st, v_sq);
      ASSERT_TRUE(uc.has_value());
      EXPECT_LT(solve_saddle_uv(st, *uc - 1e-6, v_sq).s, 0.0) << n << " " << v_sq;
      EXPECT_GT(solve_saddle_uv(st, *uc + 1e-6, v_sq).s, 0.0) << n << " " << v_sq;
    }
  }
}

TEST(Invariants, MonotoneSolutionFlow) {
  for (const auto& st : {ReducedState::make(10.0, 15.0), ReducedState::make(0.1, 2.0),
                         ReducedState::make(1.0, 0.2)}) {
    double prev_u = -INFINITY;
    for (int i = 0; i <= 300; ++i) {
      const double s = solve_saddle_uv(st, 1.0 * i, 0.5).s;
      EXPECT_GE(s, prev_u) << i;
      prev_u = s;
    }
    double prev_v = -INFINITY;
    for (int i = 0; i <= 300; ++i) {
      const double s = solve_saddle_uv(st, 10.0, 0.1 * i).s;
      EXPECT_GE(s, prev_v) << i;
      prev_v = s;
    }
  }
}
