// From measured correlators to the structure of the density matrix.

#include <cstdio>

#include "ngstate/ngstate.hpp"

int main() {
  using namespace ngstate;

  // two-point data of a thermal-like state and a measured four-point ratio
  const GaussianMoments m{10.5, 10.5, 0.0};
  const double n = occupation(m);
  const double x = x_from_c4(n, -0.96);
  std::printf("n = %.6g, x = %.6g\n", n, x);

  const auto st = ReducedState::make(n, x);
  const OperatorParams p = params_from_moments(m, x);
  std::printf("A = %.6g  B = %.6g  C = %.6g  eta = %.6g\n", p.A, p.B, p.C, p.eta);

  const auto pr = purity(st);
  std::printf("entropy/N = %.6g  purity = %.6g  (Gaussian %.6g)\n", entropy_per_dof(n), pr.p,
              pr.p_gaussian);

  std::printf("regime: %s\n", to_string(classify_regime(st)));
  if (classify_regime(st) == Regime::Peaked) {
    const auto fit = peak_fit(st);
    std::printf("peak of d at u0 = %.6g, delta_u^2 = %.6g, delta_v^2 = %.6g\n", fit.u0, fit.delta_u_sq,
                fit.delta_v_sq);
    const auto w = ln_w(st, fit.u0 * fit.u0, 0.0);
    std::printf("ln w at the peak = %.6g (spread %.2g, %s)\n", w.value, w.spread, to_string(w.status));
  }
  return 0;
}
