#pragma once

// Self-check suite: closed forms against their definitional counterparts.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "ngstate/coherence.hpp"
#include "ngstate/densmat.hpp"
#include "ngstate/observables.hpp"
#include "ngstate/oracle.hpp"
#include "ngstate/saddle.hpp"
#include "ngstate/specfun.hpp"
#include "ngstate/state.hpp"
#include "ngstate/statemap.hpp"
#include "ngstate/wigner.hpp"

namespace ngstate {

enum class Tolerance { Absolute, Relative };

struct Check {
  std::string name;
  double value = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;
  Tolerance kind = Tolerance::Absolute;
  bool pass = false;

  double abs_err() const { return std::abs(value - reference); }
  double rel_err() const {
    return reference != 0.0 ? abs_err() / std::abs(reference) : abs_err();
  }
};

class Report {
 public:
  void add(std::string name, double value, double reference, double tol,
           Tolerance kind = Tolerance::Absolute) {
    Check c{std::move(name), value, reference, tol, kind, false};
    const double err = kind == Tolerance::Absolute ? c.abs_err() : c.rel_err();
    c.pass = std::isfinite(value) && err <= tol;
    checks_.push_back(std::move(c));
  }

  /// Records a boolean property; value 1 means it holds.
  void require(std::string name, bool ok) { add(std::move(name), ok ? 1.0 : 0.0, 1.0, 0.0); }

  const std::vector<Check>& checks() const { return checks_; }

  bool all_pass() const {
    for (const auto& c : checks_) {
      if (!c.pass) return false;
    }
    return true;
  }

  const Check* first_failure() const {
    for (const auto& c : checks_) {
      if (!c.pass) return &c;
    }
    return nullptr;
  }

  static std::string line(const Check& c) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s %-44s value=%.12g reference=%.12g abs=%.3e rel=%.3e tol=%.1e%s",
                  c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.reference, c.abs_err(),
                  c.rel_err(), c.tolerance, c.kind == Tolerance::Relative ? " (rel)" : " (abs)");
    return buf;
  }

  void write_text(std::ostream& os) const {
    for (const auto& c : checks_) os << line(c) << '\n';
  }

 private:
  std::vector<Check> checks_;
};

struct ValidateOptions {
  bool quick = false;
  /// Multiplies kappa in the parameter construction of the roundtrip checks.
  /// Anything but 1 must make them fail.
  double kappa_scale = 1.0;
};

namespace detail {

inline std::string tag(const char* base, double n, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s(n=%g,x=%g)", base, n, x);
  return buf;
}

}  // namespace detail

inline Report run_validation(const ValidateOptions& opt = {}) {
  Report rep;
  const std::vector<double> ns = opt.quick ? std::vector<double>{1.0, 10.0}
                                           : std::vector<double>{0.1, 1.0, 10.0};
  const std::vector<double> xs = opt.quick ? std::vector<double>{0.0, 1.0, 15.0}
                                           : std::vector<double>{0.0, 0.5, 1.0, 5.0, 15.0};
  oracle::MatsubaraTruncation trunc;
  if (opt.quick) trunc.n_max = 100000;

  const double ln2 = std::log(2.0);
  rep.add("specfun.h_trace(ln^2 2)", specfun::h_trace(ln2 * ln2), ln2 / 3.0, 1e-12, Tolerance::Relative);
  rep.add("specfun.h_trace(-pi^2/4)", specfun::h_trace(-specfun::pi_sq / 4.0), -specfun::pi / 2.0,
          1e-12, Tolerance::Relative);
  rep.add("specfun.small_f0(4)", specfun::small_f(4.0).f0, (2.0 / std::tanh(2.0) - 1.0) / 4.0, 1e-12,
          Tolerance::Relative);
  for (double n : ns) {
    const double L = std::log1p(1.0 / n);
    rep.add(detail::tag("statemap.kappa_identity", n, 0), specfun::h_trace(L * L), kappa_of(n), 1e-12,
            Tolerance::Relative);
  }

  for (double z_sq : {ln2 * ln2, 1e-4, 25.0}) {
    rep.add("oracle.trace_g_sum(z^2=" + io::format_number(z_sq) + ")", oracle::trace_g_sum(z_sq, trunc),
            oracle::trace_g_closed(z_sq), 1e-8, Tolerance::Relative);
  }
  rep.add("oracle.pair_sum(1,2)", oracle::pair_sum_direct(1.0, 2.0, trunc),
          oracle::pair_sum_closed(1.0, 2.0), 1e-8, Tolerance::Relative);

  for (double n : ns) {
    for (double x : xs) {
      const auto st = ReducedState::make(n, x);
      const GaussianMoments m{n + 0.5, n + 0.5, 0.0};
      const OperatorParams p = params_with_kappa(m, n, x, st.kappa * opt.kappa_scale);
      const auto fwd = moments_from_params(p);
      rep.add(detail::tag("statemap.roundtrip_F", n, x), fwd.moments.F, m.F, 1e-10, Tolerance::Relative);
      rep.add(detail::tag("statemap.roundtrip_K", n, x), fwd.moments.K, m.K, 1e-10, Tolerance::Relative);
      rep.add(detail::tag("statemap.roundtrip_x", n, x), fwd.x, x, 1e-10, Tolerance::Absolute);

      if (x > 0) {
        rep.add(detail::tag("oracle.c4_sum", n, x), oracle::c4_sum(n, x, trunc), c4_ratio(st), 1e-8,
                Tolerance::Relative);
      }
      rep.add(detail::tag("oracle.purity_by_definition", n, x),
              oracle::purity_by_definition(params_from_moments(m, x)), purity(st).p, 1e-10,
              Tolerance::Relative);
      rep.add(detail::tag("oracle.entropy_by_definition", n, x), oracle::entropy_by_definition(n, x),
              entropy_per_dof(n), 1e-8);
      const double c4 = c4_ratio(st);
      rep.require(detail::tag("observables.c4_bounds", n, x), c4 >= -1.0 && c4 <= 0.0);
      const auto pr = purity(st);
      rep.require(detail::tag("observables.purity_ratio_bounds", n, x),
                  pr.ratio > 0.0 && pr.ratio <= 1.0 + 1e-12);
    }
    rep.add(detail::tag("observables.purity_gaussian", n, 0), purity(ReducedState::make(n, 0)).p,
            1.0 / (2.0 * n + 1.0), 1e-14, Tolerance::Relative);
  }

  {
    const auto st = ReducedState::make(10.0, 15.0);
    const double v_sq = 2.0;
    const double uc = *u_c_sq(st, v_sq);
    rep.add("saddle.branch_locus(n=10,x=15)", solve_saddle_uv(st, uc, v_sq).s, 0.0, 1e-10);
    rep.add("densmat.delta_v_sq(n=10,x=15)", peak_fit(st).delta_v_sq, 0.5, 0.0);
  }

  {
    const auto st = ReducedState::make(10.0, 0.0);
    WignerSettings set;
    const std::vector<std::pair<double, double>> pts = opt.quick
        ? std::vector<std::pair<double, double>>{{0.0, 0.0}, {100.0, 1.0}}
        : std::vector<std::pair<double, double>>{{0.0, 0.0}, {100.0, 1.0}, {400.0, 0.25}, {50.0, 4.0}};
    for (const auto& [u_sq, r_sq] : pts) {
      const double phi_sq = st.kappa * (st.n + 0.5) * u_sq;
      const double pi_sq = r_sq / (4.0 * st.kappa * (st.n + 0.5));
      const double ref = oracle::gaussian_wigner_ln_w(GaussianMoments{st.n + 0.5, st.n + 0.5, 0.0},
                                                      std::sqrt(phi_sq), std::sqrt(pi_sq));
      rep.add("wigner.gaussian_limit(u^2=" + io::format_number(u_sq) + ",r^2=" + io::format_number(r_sq) + ")",
              ln_w(st, u_sq, r_sq, set).value, ref, 1e-6);
    }
  }
  {
    const auto st = ReducedState::make(10.0, 15.0);
    const auto v = ln_w(st, peak_u0_sq(st), 0.0);
    rep.add("wigner.plateau_spread(n=10,x=15)", v.spread, 0.0, 1e-3);
  }

  {
    const CoherencePair pair{1.3, 0.4, 0.7, 2.1};
    const double a = 0.5 * (pair.sum_a + pair.diff_a), ap = 0.5 * (pair.sum_a - pair.diff_a);
    const double b = 0.5 * (pair.sum_b + pair.diff_b), bp = 0.5 * (pair.sum_b - pair.diff_b);
    rep.add("coherence.vacuum_reduction", overlap_centered(pair, WignerWidths{0.5, 0.5}),
            -0.5 * (a * a + b * b + ap * ap + bp * bp), 1e-12);
  }
  return rep;
}

}  // namespace ngstate
