// ngstate: figure data, point evaluations and the self-check suite.
//
//   ngstate <preset> [options]     preset in fig1_c4 ... fig7_slice
//   ngstate point --n N --x X      closed-form observables of one state
//   ngstate validate [--quick]     oracle checks, exit 0 iff all pass
//
// Exit codes: 0 success, 1 Wigner values not converged or failed checks,
// 2 invalid configuration.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "presets.hpp"

namespace {

using ngstate::cli::json;
using ngstate::cli::RunConfig;

constexpr int exit_not_converged = 1;
constexpr int exit_invalid = 2;

ngstate::cli::GridSize parse_grid(const std::string& text) {
  const auto pos = text.find_first_of("xX");
  if (pos == std::string::npos) throw ngstate::invalid_config("--grid must look like WxH");
  try {
    std::size_t used_w = 0, used_h = 0;
    const std::string w = text.substr(0, pos), h = text.substr(pos + 1);
    const unsigned long gw = std::stoul(w, &used_w), gh = std::stoul(h, &used_h);
    if (used_w != w.size() || used_h != h.size()) throw std::invalid_argument(text);
    return {gw, gh};
  } catch (const std::logic_error&) {
    throw ngstate::invalid_config("--grid must look like WxH, got " + text);
  }
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ngstate::invalid_config("cannot write " + path.string());
  os << content;
}

json resolved_config(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  if (cfg.n) j["n_override"] = *cfg.n;
  if (cfg.x) j["x_override"] = *cfg.x;
  if (cfg.c4_ratio) j["c4_ratio"] = *cfg.c4_ratio;
  if (cfg.gamma) j["gamma_override"] = *cfg.gamma;
  if (cfg.grid) j["grid_override"] = std::to_string(cfg.grid->w) + "x" + std::to_string(cfg.grid->h);
  if (cfg.u_max) j["u_max_override"] = *cfg.u_max;
  if (cfg.v_max) j["v_max_override"] = *cfg.v_max;
  if (cfg.r_max) j["r_max_override"] = *cfg.r_max;
  if (cfg.x_max) j["x_max_override"] = *cfg.x_max;
  j["out"] = cfg.out;
  return j;
}

int run_validate(const RunConfig& cfg, bool out_given) {
  ngstate::ValidateOptions opt;
  opt.quick = cfg.quick;
  opt.kappa_scale = cfg.kappa_scale;
  const auto rep = ngstate::run_validation(opt);
  rep.write_text(std::cout);
  std::size_t passed = 0;
  json checks = json::array();
  for (const auto& c : rep.checks()) {
    passed += c.pass ? 1 : 0;
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"reference", c.reference},
                      {"abs_err", c.abs_err()},
                      {"rel_err", c.rel_err()},
                      {"tolerance", c.tolerance},
                      {"relative", c.kind == ngstate::Tolerance::Relative},
                      {"pass", c.pass}});
  }
  std::cout << passed << "/" << rep.checks().size() << " checks passed\n";
  if (out_given) {
    std::filesystem::create_directories(cfg.out);
    json doc{{"version", ngstate::version}, {"quick", cfg.quick}, {"all_pass", rep.all_pass()},
             {"checks", std::move(checks)}};
    write_file(std::filesystem::path(cfg.out) / "validate.json", doc.dump(2) + "\n");
  }
  if (const auto* bad = rep.first_failure()) {
    std::cerr << "first failure: " << ngstate::Report::line(*bad) << "\n";
    return exit_not_converged;
  }
  return 0;
}

int write_preset(const RunConfig& cfg) {
  const auto res = ngstate::cli::run_preset(cfg);
  std::filesystem::create_directories(cfg.out);
  json meta = res.meta;
  meta.update(resolved_config(cfg));
  meta["not_converged"] = res.not_converged;
  const std::filesystem::path dir(cfg.out);
  if (cfg.format == "csv") {
    std::vector<std::string> files;
    for (const auto& t : res.tables) {
      files.push_back(t.name + ".csv");
      write_file(dir / files.back(), t.csv());
    }
    meta["files"] = files;
    write_file(dir / (cfg.command + ".json"), meta.dump(2) + "\n");
  } else {
    json tables = json::array();
    for (const auto& t : res.tables) tables.push_back(t.to_json());
    meta["tables"] = std::move(tables);
    write_file(dir / (cfg.command + ".json"), meta.dump(2) + "\n");
  }
  for (const auto& t : res.tables) std::cout << t.name << ": " << t.rows.size() << " rows\n";
  if (res.not_converged) {
    std::cerr << "warning: some Wigner values did not converge; see " << cfg.command << ".json\n";
    return exit_not_converged;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-N non-Gaussian density matrices: figure data, point evaluations, self-checks"};
  RunConfig cfg;
  std::vector<std::string> commands = ngstate::cli::preset_names();
  commands.push_back("point");
  commands.push_back("validate");

  double n = 0, x = 0, c4 = 0, gamma = 0, u_max = 0, v_max = 0, r_max = 0, x_max = 0;
  std::string grid;
  app.add_option("command", cfg.command, "preset, point or validate")->required()->check(CLI::IsMember(commands));
  auto* o_n = app.add_option("--n", n, "occupation number");
  auto* o_x = app.add_option("--x", x, "nongaussianity strength");
  auto* o_c4 = app.add_option("--c4-ratio", c4, "C4/2F^2, converted to x");
  auto* o_gamma = app.add_option("--gamma", gamma, "squeezing strength in [0, 1)");
  app.add_option("--phi", cfg.phi, "squeezing angles, comma separated")->delimiter(',');
  app.add_option("--mode", cfg.mode, "projection mode: para, perp or both")->capture_default_str();
  auto* o_grid = app.add_option("--grid", grid, "grid size WxH");
  auto* o_umax = app.add_option("--u-max", u_max, "upper bound of u");
  auto* o_vmax = app.add_option("--v-max", v_max, "upper bound of v");
  auto* o_rmax = app.add_option("--r-max", r_max, "upper bound of r");
  auto* o_xmax = app.add_option("--x-max", x_max, "upper bound of x for fig1/fig2");
  app.add_option("--N-list", cfg.N_list, "even N values for the Wigner extrapolation, comma separated")
      ->delimiter(',');
  app.add_option("--threads", cfg.threads, "worker threads, 0 uses NGSTATE_THREADS or all cores");
  app.add_option("--tol", cfg.tol, "Wigner spread tolerance")->capture_default_str();
  auto* o_out = app.add_option("--out", cfg.out, "output directory")->capture_default_str();
  app.add_option("--format", cfg.format, "csv or json")->capture_default_str();
  app.add_flag("--quick", cfg.quick, "validate: reduced grid");
  app.add_option("--kappa-scale", cfg.kappa_scale, "validate: scale kappa (negative control)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_invalid;
  }

  try {
    if (*o_n) cfg.n = n;
    if (*o_x) cfg.x = x;
    if (*o_c4) cfg.c4_ratio = c4;
    if (*o_gamma) cfg.gamma = gamma;
    if (*o_grid) cfg.grid = parse_grid(grid);
    if (*o_umax) cfg.u_max = u_max;
    if (*o_vmax) cfg.v_max = v_max;
    if (*o_rmax) cfg.r_max = r_max;
    if (*o_xmax) cfg.x_max = x_max;
    ngstate::resolve_threads(cfg.threads);  // rejects a malformed NGSTATE_THREADS early

    if (cfg.command == "validate") return run_validate(cfg, static_cast<bool>(*o_out));
    if (cfg.command == "point") {
      std::cout << ngstate::cli::evaluate_point(cfg).dump(2) << "\n";
      return 0;
    }
    return write_preset(cfg);
  } catch (const ngstate::not_converged& e) {
    std::cerr << "not converged: " << e.what() << "\n";
    return exit_not_converged;
  } catch (const ngstate::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
}
