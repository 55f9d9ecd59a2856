#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "schrotbc/errors.hpp"
#include "schrotbc/harness.hpp"

using namespace schrotbc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("schrotbc_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig small_config() {
  RunConfig cfg = default_config(2);
  cfg.grid.legendre_points = 32;
  cfg.grid.fourier = {16, 16};
  cfg.time = {1.0, 33};
  return cfg;
}

}  // namespace

TEST_CASE("config defaults and parsing") {
  const RunConfig d2 = default_config(2);
  CHECK(d2.grid.legendre_points == 64);
  CHECK(default_config(3).grid.fourier[1] == 32);

  const RunConfig c = parse_config(R"({"scheme": "CP20", "method": "bdf1", "dim": 2,
      "domain": {"x_l": -5, "x_r": 15, "d": 2.0},
      "grid": {"legendre": 40, "fourier": [24]},
      "tmax": 2.5, "nt": 101, "profile": {"family": "fhg", "type": "II", "c0": 8},
      "output_dir": "o", "snapshot_every": 10})");
  CHECK(c.scheme.family == BoundaryFamily::CP);
  CHECK(c.scheme.pade_order == 20);
  CHECK(c.scheme.method == OneStep::BDF1);
  CHECK(c.domain.x_l == -5.0);
  CHECK(c.domain.d[0] == 2.0);
  CHECK(c.grid.legendre_points == 40);
  CHECK(c.grid.fourier[0] == 24);
  CHECK(c.time.nt == 101);
  CHECK(c.profile.family == ProfileFamily::FHG);
  CHECK(c.profile.type == 2);
  CHECK(c.profile.c0 == 8.0);
  CHECK(c.snapshot_every == 10);

  const RunConfig back = parse_config(config_to_json(c));
  CHECK(config_to_json(back) == config_to_json(c));
  CHECK(parse_config(R"({"scheme": "np", "pade_order": 7})").scheme.pade_order == 7);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"grid": {"lgl": 3}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scheme": "XX"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"scheme": "CQ5"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"method": "RK4"})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"nt": "many"})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), ConfigError);

  RunConfig c = default_config(3);
  c.scheme.family = BoundaryFamily::CQ;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(2);
  c.grid.fourier[0] = 15;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(2);
  c.domain.x_r = c.domain.x_l;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = default_config(2);
  c.nt_set = {10, 20};
  CHECK_THROWS_AS(validate(c, true), ConfigError);
  CHECK_NOTHROW(validate(default_config(2)));
}

TEST_CASE("slope fits") {
  std::vector<double> dt, e1, e2;
  for (int p = 0; p < 6; ++p) {
    dt.push_back(std::pow(0.5, p));
    e1.push_back(3.0 * dt.back());
    e2.push_back(0.7 * dt.back() * dt.back());
  }
  // Extend both series by a decade so that the 10x rule keeps every trend point.
  for (int p = 6; p < 10; ++p) {
    dt.push_back(std::pow(0.5, p));
    e1.push_back(3.0 * dt.back());
    e2.push_back(0.7 * dt.back() * dt.back());
  }
  const SlopeFit f1 = fit_slope(dt, e1);
  CHECK(std::abs(f1.slope - 1.0) <= 1e-12);
  CHECK(std::abs(fit_slope(dt, e2).slope - 2.0) <= 1e-12);

  // Plateau points (within 10x of the minimum) are dropped.
  const std::vector<double> pdt{0.1, 0.05, 0.025, 0.0125, 0.00625};
  const std::vector<double> pe{1e-1, 2.5e-2, 6.25e-3, 1.1e-3, 1e-3};
  const SlopeFit fp = fit_slope(pdt, pe);
  CHECK(fp.used == std::vector<std::size_t>{0, 1});
  CHECK(fp.slope == doctest::Approx(2.0));

  // Without a plateau in range every point is kept.
  const std::vector<double> se{0.16, 0.08, 0.04, 0.02, 0.01};
  const SlopeFit fs = fit_slope(pdt, se);
  CHECK(fs.used.size() == 5);
  CHECK(fs.slope == doctest::Approx(1.0));

  CHECK_THROWS_AS(fit_slope(std::vector<double>{0.1}, std::vector<double>{1.0}), ContractViolation);
  CHECK_THROWS_AS(fit_slope(pdt, std::vector<double>{1, 2, 0, 4, 5}), ContractViolation);
}

TEST_CASE("relative error") {
  const RunConfig cfg = small_config();
  const SpectralGrid g(cfg.domain, cfg.grid);
  const auto spec = profile_for(cfg);
  const CVec exact = sample_profile(spec, g, 0.4);
  const CoeffField u = g.analyze(exact);
  const double n0 = std::sqrt(g.norm_sq(exact));
  CHECK(relative_error(g, u, spec, 0.4, n0) <= 1e-13);

  CVec pert = exact;
  for (auto& z : pert) z *= 1.0 + 1e-3;
  CHECK(std::abs(relative_error(g, g.analyze(pert), exact, n0) - 1e-3) <= 1e-12);
  CHECK_THROWS_AS(relative_error(g, u, exact, 0.0), ContractViolation);
}

TEST_CASE("run records a time series") {
  RunConfig cfg = small_config();
  cfg.time.nt = 1;
  CHECK_THROWS_AS(run(cfg), ConfigError);

  cfg.time.nt = 33;
  std::size_t observed = 0;
  const RunResult r = run(cfg, [&](const Simulation&) { ++observed; });
  CHECK(observed == 33);
  CHECK(r.t.size() == 33);
  CHECK(r.t.back() == doctest::Approx(1.0));
  CHECK(r.label == "NP50-TR");
  CHECK(r.e[0] <= 1e-14);
  CHECK(r.energy[0] == doctest::Approx(1.0));
  CHECK(r.robin_residual[0] == 0.0);
  for (double x : r.robin_residual) CHECK(x <= 1e-9);
}

TEST_CASE("identical configs give bit-identical outputs") {
  const RunConfig cfg = small_config();
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const RunResult ra = run(cfg), rb = run(cfg);
  write_errors_csv(a / "errors.csv", ra);
  write_errors_csv(b / "errors.csv", rb);
  write_run_summary(a, cfg, ra);
  write_run_summary(b, cfg, rb);
  CHECK(slurp(a / "errors.csv") == slurp(b / "errors.csv"));
  CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
  const std::string csv = slurp(a / "errors.csv");
  CHECK(csv.rfind("t,e,E\n", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(a / "summary.json"));
  CHECK(j["steps"] == 32);
  CHECK(j.contains("config"));
  CHECK(nlohmann::json::parse(slurp(a / "timings.json")).contains("seconds"));
}

TEST_CASE("reduced evolution-error run with CQ-TR") {
  RunConfig cfg = default_config(2);
  cfg.scheme = {BoundaryFamily::CQ, OneStep::TR, 50};
  cfg.time = {5.0, 1025};
  CHECK(run(cfg).max_error <= 5e-2);
}

TEST_CASE("convergence sweep") {
  RunConfig cfg = small_config();
  cfg.nt_set = {17, 33, 65, 129};
  cfg.output_dir = scratch("sweep").string();
  const SweepResult s = convergence_sweep(cfg, 2);
  REQUIRE(s.e.size() == 4);
  CHECK(s.dt[0] == doctest::Approx(1.0 / 16.0));
  for (std::size_t i = 1; i < s.e.size(); ++i) CHECK(s.e[i] <= 1.5 * s.e[i - 1]);
  write_sweep_summary(cfg.output_dir, cfg, s);
  const auto j = nlohmann::json::parse(slurp(fs::path(cfg.output_dir) / "summary.json"));
  CHECK(j["points"].size() == 4);
  CHECK(j.contains("slope"));

  cfg.nt_set = {17, 33, 0};
  CHECK_THROWS_AS(convergence_sweep(cfg, 2), ConfigError);
}

TEST_CASE("snapshots") {
  RunConfig cfg = small_config();
  cfg.time.nt = 5;
  cfg.snapshot_every = 2;
  cfg.output_dir = scratch("snap").string();
  run(cfg);
  const fs::path dir = fs::path(cfg.output_dir) / "snapshots";
  CHECK(fs::exists(dir / "u_000000.bin"));
  CHECK(fs::exists(dir / "u_000004.json"));
  CHECK_FALSE(fs::exists(dir / "u_000001.bin"));
  CHECK(fs::file_size(dir / "u_000002.bin") == 32u * 16u * 8u);
  const auto side = nlohmann::json::parse(slurp(dir / "u_000002.json"));
  CHECK(side["shape"] == nlohmann::json::array({16, 32}));
  CHECK(side["dtype"] == "complex64-le");
}

TEST_CASE("thread budget") {
  ::setenv("SCHROTBC_THREADS", "3", 1);
  CHECK(thread_budget() == 3);
  ::unsetenv("SCHROTBC_THREADS");
  CHECK(thread_budget() >= 1);
}
