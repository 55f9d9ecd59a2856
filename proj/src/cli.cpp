#include "schrotbc/cli.hpp"

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "schrotbc/errors.hpp"
#include "schrotbc/harness.hpp"

namespace schrotbc {

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> scheme, method, profile, out;
  std::optional<int> pade_order, nt, grid, dim, snapshot_every;
  std::optional<double> tmax, c0;
  std::vector<int> nt_set;
};

void add_run_options(CLI::App* app, Overrides& o) {
  app->add_option("--config", o.config, "JSON configuration file");
  app->add_option("--scheme", o.scheme, "Boundary scheme: CQ, NP<M>, CP<M> or HF");
  app->add_option("--method", o.method, "One-step method: BDF1 or TR");
  app->add_option("--pade-order", o.pade_order, "Pade order M for NP and CP");
  app->add_option("--nt", o.nt, "Number of time samples Nt (dt = Tmax/(Nt-1))");
  app->add_option("--tmax", o.tmax, "Final time");
  app->add_option("--grid", o.grid, "Grid points per axis (LGL and Fourier)");
  app->add_option("--profile", o.profile, "Initial profile: fcg-i, fcg-ii, fhg-i or fhg-ii");
  app->add_option("--c0", o.c0, "Profile speed c0");
  app->add_option("--dim", o.dim, "Spatial dimension (2 or 3)");
  app->add_option("--out", o.out, "Output directory");
  app->add_option("--snapshot-every", o.snapshot_every, "Write a field snapshot every k steps (0: never)");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config.empty() ? default_config(o.dim.value_or(2)) : load_config(o.config);
  if (o.dim && *o.dim != cfg.domain.dim) {
    const RunConfig base = default_config(*o.dim);
    cfg.domain.dim = *o.dim;
    cfg.grid = base.grid;
  }
  if (o.scheme) {
    // Reuse the config parser for the scheme string ("NP50", "CQ", ...).
    const RunConfig parsed = parse_config(fmt::format(R"({{"scheme": "{}"}})", *o.scheme));
    cfg.scheme.family = parsed.scheme.family;
    cfg.scheme.pade_order = parsed.scheme.pade_order;
  }
  if (o.pade_order) cfg.scheme.pade_order = *o.pade_order;
  if (o.method) cfg.scheme.method = parse_config(fmt::format(R"({{"method": "{}"}})", *o.method)).scheme.method;
  if (o.nt) cfg.time.nt = *o.nt;
  if (o.tmax) cfg.time.tmax = *o.tmax;
  if (o.grid) {
    cfg.grid.legendre_points = *o.grid;
    cfg.grid.fourier = {*o.grid, *o.grid};
  }
  if (o.profile) {
    const std::string& p = *o.profile;
    const auto dash = p.find('-');
    if (dash == std::string::npos) throw ConfigError("profile must look like fcg-i or fhg-ii");
    const RunConfig parsed = parse_config(
        fmt::format(R"({{"profile": {{"family": "{}", "type": "{}"}}}})", p.substr(0, dash), p.substr(dash + 1)));
    cfg.profile.family = parsed.profile.family;
    cfg.profile.type = parsed.profile.type;
  }
  if (o.c0) cfg.profile.c0 = *o.c0;
  if (o.out) cfg.output_dir = *o.out;
  if (o.snapshot_every) cfg.snapshot_every = *o.snapshot_every;
  if (!o.nt_set.empty()) cfg.nt_set = o.nt_set;
  return cfg;
}

int do_run(const Overrides& o) {
  const RunConfig cfg = resolve(o);
  validate(cfg);
  const RunResult res = run(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  write_errors_csv(dir / "errors.csv", res);
  write_run_summary(dir, cfg, res);
  if (res.wall_trace_warning) {
    std::cerr << "warning: initial profile does not vanish on the walls\n";
  }
  std::cout << fmt::format("{}: {} steps, max error {:.6e}, E(T) = {:.6e} (exact {:.6e}), {:.2f} s\n", res.label,
                           res.t.size() - 1, res.max_error, res.energy.back(), res.energy_exact.back(),
                           res.seconds);
  return kExitOk;
}

int do_sweep(const Overrides& o) {
  RunConfig cfg = resolve(o);
  if (cfg.nt_set.empty()) cfg.nt_set = {256, 512, 1024, 2048, 4096};
  validate(cfg, true);
  const SweepResult sweep = convergence_sweep(cfg, thread_budget());
  const std::filesystem::path dir(cfg.output_dir);
  for (std::size_t i = 0; i < sweep.runs.size(); ++i) {
    const RunConfig sub = [&] {
      RunConfig s = cfg;
      s.time.nt = sweep.nt[i];
      return s;
    }();
    const auto run_dir = dir / fmt::format("nt_{}", sweep.nt[i]);
    write_errors_csv(run_dir / "errors.csv", sweep.runs[i]);
    write_run_summary(run_dir, sub, sweep.runs[i]);
  }
  write_sweep_summary(dir, cfg, sweep);
  for (std::size_t i = 0; i < sweep.nt.size(); ++i) {
    std::cout << fmt::format("Nt = {:6d}  dt = {:.6e}  e = {:.6e}\n", sweep.nt[i], sweep.dt[i], sweep.e[i]);
  }
  std::cout << fmt::format("slope = {:.4f} over {} points\n", sweep.fit.slope, sweep.fit.used.size());
  return kExitOk;
}

void print_table(const std::string& table) {
  if (table == "I" || table == "II") {
    const bool fcg = table == "I";
    std::cout << fmt::format("Table {}: Fourier-{} profile, A0 = 2, c0 in {{4, 8, 12, 16}}\n", table,
                             fcg ? "chirped-Gaussian" : "Hermite-Gaussian");
    for (int type = 1; type <= 2; ++type) {
      const ProfileSpec s = profile_preset(fcg ? ProfileFamily::FCG : ProfileFamily::FHG, type, 4.0, 2);
      std::cout << fmt::format("  Type {} (n = {})\n", type == 1 ? "I" : "II", s.terms.size());
      for (std::size_t j = 0; j < s.terms.size(); ++j) {
        const ProfileTerm& t = s.terms[j];
        std::cout << fmt::format("    j={}  a = 1/{:.1f}  {}  s = {:+d}  K = {:+d}\n", j + 1, 1.0 / t.a,
                                 fcg ? fmt::format("b = {}", t.b) : fmt::format("m = {}", t.order), t.sign, t.k);
      }
    }
    return;
  }
  if (table == "III" || table == "IV") {
    std::cout << fmt::format("Table {}: numerical parameters, {} (2D)\n", table,
                             table == "III" ? "evolution error" : "convergence");
    std::cout << "  domain      (-10, 10) x [-pi, pi)\n";
    std::cout << "  Tmax        5\n";
    if (table == "III") {
      std::cout << "  Nt          5001\n";
      std::cout << "  dt          1e-3 = Tmax/(Nt-1)\n";
    } else {
      std::cout << "  Nt set      {2^8, 2^9, ..., 2^16}\n";
      std::cout << "  dt          Tmax/(Nt-1)\n";
    }
    std::cout << "  LGL points  200 x 200\n";
    return;
  }
  if (table == "V") {
    std::cout << "Table V: numerical parameters, evolution error (3D)\n";
    std::cout << "  domain      (-10, 10) x [-pi, pi) x [-pi, pi)\n";
    std::cout << "  Tmax        5\n";
    std::cout << "  Nt          5001\n";
    std::cout << "  dt          1e-3 = Tmax/(Nt-1)\n";
    std::cout << "  LGL points  100 x 100 x 100\n";
    return;
  }
  throw ConfigError("unknown table '" + table + "' (expected I, II, III, IV or V)");
}

RunConfig table_config(const std::string& table) {
  RunConfig cfg = default_config(table == "V" ? 3 : 2);
  const int points = table == "V" ? 100 : 200;
  cfg.grid.legendre_points = points;
  cfg.grid.fourier = {points, points};
  cfg.time = {5.0, 5001};
  if (table == "IV") {
    for (int p = 8; p <= 16; ++p) cfg.nt_set.push_back(1 << p);
  }
  return cfg;
}

int do_presets(const std::optional<std::string>& table, bool as_json) {
  const std::vector<std::string> all{"I", "II", "III", "IV", "V"};
  if (as_json) {
    if (!table || *table == "I" || *table == "II") throw ConfigError("--json needs --table III, IV or V");
    print_table(*table);  // validates the name
    std::cout << config_to_json(table_config(*table)) << '\n';
    return kExitOk;
  }
  if (table) {
    print_table(*table);
  } else {
    for (const auto& t : all) {
      print_table(t);
      std::cout << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Free Schroedinger equation solver with discrete transparent boundary conditions"};
  app.require_subcommand(1);
  Overrides run_opts, sweep_opts;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a single simulation");
  add_run_options(run_cmd, run_opts);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Convergence study over a set of Nt");
  add_run_options(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--nt-set", sweep_opts.nt_set, "Values of Nt for the sweep")->delimiter(',');
  CLI::App* presets_cmd = app.add_subcommand("presets", "List the preset profile and parameter tables");
  std::optional<std::string> table;
  bool as_json = false;
  presets_cmd->add_option("--table", table, "Table to print: I, II, III, IV or V");
  presets_cmd->add_flag("--json", as_json, "Print the table as a run configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run_cmd) return do_run(run_opts);
    if (*sweep_cmd) return do_sweep(sweep_opts);
    return do_presets(table, as_json);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InstabilityError& e) {
    std::cerr << "instability: " << e.what() << '\n';
    return kExitInstability;
  } catch (const ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace schrotbc
