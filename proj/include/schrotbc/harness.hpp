#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "schrotbc/evolve.hpp"
#include "schrotbc/exact.hpp"
#include "schrotbc/grid.hpp"

namespace schrotbc {

struct ProfileChoice {
  ProfileFamily family = ProfileFamily::FCG;
  int type = 1;
  double c0 = 4.0;
};

/// Everything needed to reproduce one run or one convergence sweep.
struct RunConfig {
  SchemeSpec scheme;
  DomainSpec domain;
  GridSpec grid;
  TimeGrid time;
  std::vector<int> nt_set;  ///< sweep only
  ProfileChoice profile;
  std::string output_dir = "schrotbc-out";
  int snapshot_every = 0;  ///< 0 disables field snapshots
};

/// Throws ConfigError on inconsistent settings.
void validate(const RunConfig& cfg, bool sweep = false);

/// Parse the JSON config schema; missing keys keep their defaults.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const RunConfig& cfg);

/// Default desk-scale configuration for a dimension (64^2 in 2D, 32^3 in 3D).
RunConfig default_config(int dim);

ProfileSpec profile_for(const RunConfig& cfg);

struct RunResult {
  std::string label;
  std::vector<double> t;
  std::vector<double> e;              ///< relative L2 error per step
  std::vector<double> energy;         ///< numerical energy content
  std::vector<double> energy_exact;   ///< exact energy content
  std::vector<double> robin_residual; ///< per step, 0 at j = 0
  double max_error = 0.0;
  double seconds = 0.0;
  bool wall_trace_warning = false;
};

using StepObserver = std::function<void(const Simulation&)>;

/// Run Nt-1 steps from the exact initial profile, recording errors each step.
RunResult run(const RunConfig& cfg, const StepObserver& observer = {});

/// ||u_num - u_exact|| / ||u0|| with the grid quadrature.
double relative_error(const SpectralGrid& grid, const CoeffField& u_num,
                      std::span<const cplx> exact_samples, double u0_norm);
double relative_error(const SpectralGrid& grid, const CoeffField& u_num, const ProfileSpec& spec,
                      double t, double u0_norm);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<std::size_t> used;  ///< indices of the points in the fit
};

/// Least-squares slope of log e against log dt over the points with e > 10 min(e);
/// falls back to all points when fewer than two qualify.
SlopeFit fit_slope(std::span<const double> dt, std::span<const double> e);

struct SweepResult {
  std::vector<int> nt;
  std::vector<double> dt;
  std::vector<double> e;
  SlopeFit fit;
  std::vector<RunResult> runs;
};

/// Runs every Nt of cfg.nt_set (in parallel up to @p threads workers).
SweepResult convergence_sweep(const RunConfig& cfg, unsigned threads);

/// Worker cap from SCHROTBC_THREADS, else the hardware concurrency.
unsigned thread_budget();

void write_errors_csv(const std::filesystem::path& path, const RunResult& result);
void write_run_summary(const std::filesystem::path& dir, const RunConfig& cfg, const RunResult& result);
void write_sweep_summary(const std::filesystem::path& dir, const RunConfig& cfg, const SweepResult& sweep);

/// Flat little-endian complex64 samples plus a JSON sidecar.
void write_snapshot(const std::filesystem::path& dir, const Simulation& sim);

}  // namespace schrotbc
