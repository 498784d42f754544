#pragma once

// Figure presets and point evaluations behind the ngstate command line.
// Every preset returns its tables in memory; the caller decides where they go.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ngstate/ngstate.hpp"

namespace ngstate::cli {

using json = nlohmann::ordered_json;

struct GridSize {
  std::size_t w = 0;
  std::size_t h = 0;
};

struct RunConfig {
  std::string command;
  std::optional<double> n;
  std::optional<double> x;
  std::optional<double> c4_ratio;
  std::optional<double> gamma;
  std::vector<double> phi;  ///< empty selects the preset default
  std::string mode = "both";
  std::optional<GridSize> grid;
  std::optional<double> u_max;
  std::optional<double> v_max;
  std::optional<double> r_max;
  std::optional<double> x_max;
  std::vector<int> N_list;
  unsigned threads = 0;
  double tol = 1e-3;
  std::string out = "ngstate_out";
  std::string format = "csv";
  bool quick = false;
  double kappa_scale = 1.0;
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string csv() const {
    std::ostringstream os;
    io::write_header(os, columns);
    for (const auto& r : rows) io::write_row(os, r);
    return os.str();
  }

  json to_json() const {
    json rows_json = json::array();
    for (const auto& r : rows) {
      json row = json::array();
      for (double v : r) {
        if (std::isfinite(v)) {
          row.push_back(v);
        } else {
          row.push_back(nullptr);
        }
      }
      rows_json.push_back(std::move(row));
    }
    return json{{"name", name}, {"columns", columns}, {"rows", std::move(rows_json)}};
  }
};

struct PresetResult {
  std::vector<Table> tables;
  json meta = json::object();
  bool not_converged = false;
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1_c4",      "fig2_purity",   "fig3_dsurface",
                                                 "fig4_dslices", "fig5_wigner",   "fig6_contours",
                                                 "fig7_slice"};
  return names;
}

namespace detail {

inline std::string label(double v) {
  std::string s = io::format_number(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  std::replace(s.begin(), s.end(), '+', '_');
  return s;
}

inline void check(const RunConfig& cfg) {
  if (cfg.x && cfg.c4_ratio) throw invalid_config("give at most one of --x and --c4-ratio");
  if (!(cfg.tol > 0)) throw invalid_config("--tol must be positive");
  if (cfg.grid && (cfg.grid->w < 2 || cfg.grid->h < 2)) throw invalid_config("--grid needs >= 2 points per axis");
  for (auto v : {cfg.u_max, cfg.v_max, cfg.r_max, cfg.x_max}) {
    if (v && !(*v > 0 && std::isfinite(*v))) throw invalid_config("range limits must be positive and finite");
  }
  if (cfg.mode != "para" && cfg.mode != "perp" && cfg.mode != "both") {
    throw invalid_config("--mode must be para, perp or both");
  }
  if (cfg.format != "csv" && cfg.format != "json") throw invalid_config("--format must be csv or json");
}

inline WignerSettings wigner_settings(const RunConfig& cfg) {
  WignerSettings set;
  if (!cfg.N_list.empty()) set.N_list = cfg.N_list;
  set.spread_tolerance = cfg.tol;
  set.validate();
  return set;
}

/// The x values of a preset: the --x or --c4-ratio override, else defaults.
inline std::vector<double> x_values(const RunConfig& cfg, double n, std::vector<double> defaults) {
  if (cfg.x) {
    if (!(*cfg.x >= 0)) throw invalid_config("--x must be >= 0");
    return {*cfg.x};
  }
  if (cfg.c4_ratio) return {x_from_c4(n, *cfg.c4_ratio)};
  return defaults;
}

inline std::vector<double> n_values(const RunConfig& cfg, std::vector<double> defaults) {
  if (cfg.n) {
    if (!(*cfg.n >= 0)) throw invalid_config("--n must be >= 0");
    return {*cfg.n};
  }
  return defaults;
}

inline double single_n(const RunConfig& cfg, double fallback) {
  const double n = cfg.n.value_or(fallback);
  if (!(n > 0)) throw invalid_config("this preset needs --n > 0");
  return n;
}

inline void record_common(PresetResult& res, const RunConfig& cfg, const WignerSettings* set) {
  res.meta["preset"] = cfg.command;
  res.meta["version"] = ngstate::version;
  res.meta["threads"] = resolve_threads(cfg.threads);
  res.meta["tol"] = cfg.tol;
  res.meta["format"] = cfg.format;
  if (set) {
    res.meta["N_list"] = set->N_list;
    res.meta["extrapolation"] = "richardson_1_over_N";
    res.meta["spread_tolerance"] = set->spread_tolerance;
  }
}

inline void record_wigner(PresetResult& res, const std::string& key, const std::vector<WignerValue>& values) {
  std::size_t conv = 0, fb = 0, bad = 0;
  double worst = 0.0;
  for (const auto& v : values) {
    if (v.status == WignerStatus::Converged) {
      ++conv;
      worst = std::max(worst, v.spread);
    } else if (v.status == WignerStatus::SaddleFallback) {
      ++fb;
    } else {
      ++bad;
    }
  }
  res.meta[key + "_converged"] = conv;
  res.meta[key + "_saddle_fallback"] = fb;
  res.meta[key + "_not_converged"] = bad;
  res.meta[key + "_max_spread"] = worst;
  if (bad > 0) res.not_converged = true;
}

}  // namespace detail

inline PresetResult fig1_c4(const RunConfig& cfg) {
  PresetResult res;
  const auto ns = detail::n_values(cfg, {0.0, 1.0, 10.0});
  const double x_max = cfg.x_max.value_or(20.0);
  const std::size_t count = cfg.grid ? cfg.grid->w : 201;
  Table t{"fig1_c4", {"n", "x", "c4_ratio", "large_n_limit", "small_n_limit"}, {}};
  for (double n : ns) {
    for (double x : linspace(0.0, x_max, count)) {
      t.rows.push_back({n, x, c4_ratio(n, x), c4_ratio_large_n(x), c4_ratio_small_n(x)});
    }
  }
  detail::record_common(res, cfg, nullptr);
  res.meta["n"] = ns;
  res.meta["x_max"] = x_max;
  res.meta["points"] = count;
  res.tables.push_back(std::move(t));
  return res;
}

inline PresetResult fig2_purity(const RunConfig& cfg) {
  PresetResult res;
  const auto ns = detail::n_values(cfg, {0.0, 0.1, 0.5, 1.0, 10.0});
  const double x_max = cfg.x_max.value_or(20.0);
  const std::size_t count = cfg.grid ? cfg.grid->w : 201;
  Table t{"fig2_purity", {"n", "x", "p", "p_gaussian", "ratio", "large_n_ratio"}, {}};
  for (double n : ns) {
    for (double x : linspace(0.0, x_max, count)) {
      const double p0 = 1.0 / (2.0 * n + 1.0);
      const double p = purity_value(n, x);
      t.rows.push_back({n, x, p, p0, p / p0, purity_limit_large_n(x).ratio});
    }
  }
  detail::record_common(res, cfg, nullptr);
  res.meta["n"] = ns;
  res.meta["x_max"] = x_max;
  res.meta["points"] = count;
  res.tables.push_back(std::move(t));
  return res;
}

inline PresetResult fig3_dsurface(const RunConfig& cfg) {
  PresetResult res;
  const double n = detail::single_n(cfg, 10.0);
  const auto xs = detail::x_values(cfg, n, {0.0, 0.5, 1.0, 15.0});
  detail::record_common(res, cfg, nullptr);
  res.meta["n"] = n;
  res.meta["x"] = xs;
  for (double x : xs) {
    const auto st = ReducedState::make(n, x);
    SurfaceGrid g = default_surface_grid(st);
    if (cfg.u_max) g.u_max = *cfg.u_max;
    if (cfg.v_max) g.v_max = *cfg.v_max;
    if (cfg.grid) {
      g.nu = cfg.grid->w;
      g.nv = cfg.grid->h;
    }
    const auto surf = d_surface(st, g, cfg.threads);
    Table t{"fig3_dsurface_x" + detail::label(x), {"u", "v", "ln_d_norm"}, {}};
    t.rows.reserve(surf.ln_d_norm.size());
    for (std::size_t iu = 0; iu < surf.u.size(); ++iu) {
      for (std::size_t iv = 0; iv < surf.v.size(); ++iv) t.rows.push_back({surf.u[iu], surf.v[iv], surf.at(iu, iv)});
    }
    const std::string key = "x" + detail::label(x);
    res.meta[key + "_regime"] = to_string(classify_regime(st));
    res.meta[key + "_u_max"] = g.u_max;
    res.meta[key + "_v_max"] = g.v_max;
    res.meta[key + "_grid"] = std::to_string(g.nu) + "x" + std::to_string(g.nv);
    res.meta[key + "_argmax_u"] = surf.u[surf.argmax_u];
    res.meta[key + "_argmax_v"] = surf.v[surf.argmax_v];
    res.tables.push_back(std::move(t));
  }
  return res;
}

inline PresetResult fig4_dslices(const RunConfig& cfg) {
  PresetResult res;
  const double n = detail::single_n(cfg, 10.0);
  const auto xs = detail::x_values(cfg, n, {0.0, 0.5, 1.0, 15.0});
  double u_max = 0.0;
  for (double x : xs) u_max = std::max(u_max, default_surface_grid(ReducedState::make(n, x)).u_max);
  if (cfg.u_max) u_max = *cfg.u_max;
  const std::size_t count = cfg.grid ? cfg.grid->w : 401;
  const auto u = linspace(0.0, u_max, count);
  Table t{"fig4_dslices", {"x", "u", "ln_d_norm"}, {}};
  for (double x : xs) {
    const auto st = ReducedState::make(n, x);
    // d decreases in v, so the v = 0 slice carries the maximum of the plane
    const auto vals = parallel_map<double>(count, cfg.threads, [&](std::size_t i) { return ln_d_value(st, u[i] * u[i], 0.0); });
    const double top = *std::max_element(vals.begin(), vals.end());
    for (std::size_t i = 0; i < count; ++i) t.rows.push_back({x, u[i], vals[i] - top});
  }
  detail::record_common(res, cfg, nullptr);
  res.meta["n"] = n;
  res.meta["x"] = xs;
  res.meta["u_max"] = u_max;
  res.meta["points"] = count;
  for (double x : xs) res.meta["x" + detail::label(x) + "_c4_ratio"] = c4_ratio(n, x);
  res.tables.push_back(std::move(t));
  return res;
}

inline PresetResult fig5_wigner(const RunConfig& cfg) {
  PresetResult res;
  const WignerSettings set = detail::wigner_settings(cfg);
  const double n = detail::single_n(cfg, 10.0);
  const auto xs = detail::x_values(cfg, n, {0.0, 0.5, 1.0, 15.0});
  detail::record_common(res, cfg, &set);
  res.meta["n"] = n;
  res.meta["x"] = xs;
  for (double x : xs) {
    const auto st = ReducedState::make(n, x);
    WignerGridSpec spec = default_wigner_grid(st);
    if (cfg.u_max) spec.u_max = *cfg.u_max;
    if (cfg.r_max) spec.r_max = *cfg.r_max;
    if (cfg.grid) {
      spec.nu = cfg.grid->w;
      spec.nr = cfg.grid->h;
    }
    const auto g = wigner_grid(st, spec, set, cfg.threads);
    Table t{"fig5_wigner_x" + detail::label(x), {"u", "r", "ln_w_norm", "spread"}, {}};
    for (std::size_t iu = 0; iu < g.u.size(); ++iu) {
      for (std::size_t ir = 0; ir < g.r.size(); ++ir) {
        const std::size_t k = iu * g.r.size() + ir;
        t.rows.push_back({g.u[iu], g.r[ir], g.ln_w_norm[k], g.values[k].spread});
      }
    }
    const std::string key = "x" + detail::label(x);
    res.meta[key + "_u_max"] = spec.u_max;
    res.meta[key + "_r_max"] = spec.r_max;
    res.meta[key + "_grid"] = std::to_string(spec.nu) + "x" + std::to_string(spec.nr);
    detail::record_wigner(res, key, g.values);
    res.tables.push_back(std::move(t));
  }
  return res;
}

inline PresetResult fig6_contours(const RunConfig& cfg) {
  PresetResult res;
  const WignerSettings set = detail::wigner_settings(cfg);
  const double n = detail::single_n(cfg, 10.0);
  const double gamma = cfg.gamma.value_or(0.9);
  const auto xs = detail::x_values(cfg, n, {15.0});
  const double x = xs.front();
  const std::vector<double> phis = cfg.phi.empty() ? std::vector<double>{0.0, specfun::pi} : cfg.phi;
  std::vector<ProjectionMode> modes;
  if (cfg.mode != "perp") modes.push_back(ProjectionMode::Para);
  if (cfg.mode != "para") modes.push_back(ProjectionMode::Perp);
  detail::record_common(res, cfg, &set);
  res.meta["n"] = n;
  res.meta["x"] = x;
  res.meta["gamma"] = gamma;
  res.meta["phi"] = phis;
  res.meta["mode"] = cfg.mode;
  for (double phi : phis) {
    const SqueezeParams sq{n, gamma, phi};
    for (ProjectionMode mode : modes) {
      ProjectionSpec spec;
      if (cfg.grid) {
        spec.nphi = cfg.grid->w;
        spec.npi = cfg.grid->h;
      }
      const auto g = project_physical(sq, x, mode, spec, set, cfg.threads);
      const std::string key = std::string(to_string(mode)) + "_phi" + detail::label(phi);
      Table t{"fig6_contours_" + key, {"phi", "pi", "ln_w_norm"}, {}};
      for (std::size_t ip = 0; ip < g.phi.size(); ++ip) {
        for (std::size_t iq = 0; iq < g.pi.size(); ++iq) {
          t.rows.push_back({g.phi[ip], g.pi[iq], g.ln_w_norm[ip * g.pi.size() + iq]});
        }
      }
      res.meta[key + "_slope"] = g.slope;
      res.meta[key + "_A"] = g.A;
      res.meta[key + "_phi_max"] = g.phi.back();
      res.meta[key + "_pi_max"] = g.pi.back();
      detail::record_wigner(res, key, g.values);
      res.tables.push_back(std::move(t));
    }
  }
  return res;
}

inline PresetResult fig7_slice(const RunConfig& cfg) {
  PresetResult res;
  const WignerSettings set = detail::wigner_settings(cfg);
  const double n = detail::single_n(cfg, 10.0);
  std::vector<double> xs = {0.0};
  const auto big = detail::x_values(cfg, n, {100.0 * n * n});
  xs.push_back(big.front());
  const double kappa = kappa_of(n);
  double u_max = 4.0 / std::sqrt(kappa);
  for (double x : xs) {
    const auto st = ReducedState::make(n, x);
    if (classify_regime(st) == Regime::Peaked) u_max = std::max(u_max, 1.5 * std::sqrt(peak_u0_sq(st)));
  }
  if (cfg.u_max) u_max = *cfg.u_max;
  const std::size_t count = cfg.grid ? cfg.grid->w : 401;
  const auto u = linspace(0.0, u_max, count);
  Table t{"fig7_slice", {"x", "u", "phi_over_sqrt_NF", "ln_w_norm"}, {}};
  detail::record_common(res, cfg, &set);
  for (double x : xs) {
    const auto st = ReducedState::make(n, x);
    const auto vals = parallel_map<WignerValue>(count, cfg.threads, [&](std::size_t i) {
      const double zero[1] = {0.0};
      return ln_w_row(st, u[i] * u[i], zero, set).front();
    });
    double top = -INFINITY;
    for (const auto& v : vals) top = std::max(top, v.value);
    // phi^2 / N = A u^2 with A = kappa F
    for (std::size_t i = 0; i < count; ++i) t.rows.push_back({x, u[i], u[i] * std::sqrt(kappa), vals[i].value - top});
    detail::record_wigner(res, "x" + detail::label(x), vals);
  }
  res.meta["n"] = n;
  res.meta["x"] = xs;
  res.meta["u_max"] = u_max;
  res.meta["points"] = count;
  res.tables.push_back(std::move(t));
  return res;
}

inline PresetResult run_preset(const RunConfig& cfg) {
  detail::check(cfg);
  if (cfg.command == "fig1_c4") return fig1_c4(cfg);
  if (cfg.command == "fig2_purity") return fig2_purity(cfg);
  if (cfg.command == "fig3_dsurface") return fig3_dsurface(cfg);
  if (cfg.command == "fig4_dslices") return fig4_dslices(cfg);
  if (cfg.command == "fig5_wigner") return fig5_wigner(cfg);
  if (cfg.command == "fig6_contours") return fig6_contours(cfg);
  if (cfg.command == "fig7_slice") return fig7_slice(cfg);
  throw invalid_config("unknown preset: " + cfg.command);
}

/// Closed-form observables and matrix-element structure of one state.
inline json evaluate_point(const RunConfig& cfg) {
  detail::check(cfg);
  if (!cfg.n) throw invalid_config("point needs --n");
  if (!cfg.x && !cfg.c4_ratio) throw invalid_config("point needs --x or --c4-ratio");
  const double n = *cfg.n;
  const double x = detail::x_values(cfg, n, {}).front();
  json out;
  out["n"] = n;
  out["x"] = x;
  out["c4_ratio"] = c4_ratio(n, x);
  out["entropy_per_dof"] = entropy_per_dof(n);
  out["purity"] = purity_value(n, x);
  out["purity_gaussian"] = 1.0 / (2.0 * n + 1.0);
  if (n > 0) {
    const auto st = ReducedState::make(n, x);
    out["kappa"] = st.kappa;
    out["zeta"] = st.zeta;
    out["z0_sq"] = st.z0_sq;
    out["xi"] = st.xi;
    out["ln_z_per_dof"] = ln_z_per_dof(st);
    const auto pr = purity(st);
    out["purity_ratio"] = pr.ratio;
    out["n_tilde"] = pr.n_tilde;
    const Regime regime = classify_regime(st);
    out["regime"] = to_string(regime);
    if (regime == Regime::Peaked) {
      const auto fit = peak_fit(st);
      out["u0"] = fit.u0;
      out["delta_u_sq"] = fit.delta_u_sq;
      out["delta_v_sq"] = fit.delta_v_sq;
      out["ln_d0"] = fit.ln_d0;
    }
  }
  return out;
}

}  // namespace ngstate::cli
