#include "schrotbc/harness.hpp"

#include <algorithm>
#include <numeric>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "schrotbc/errors.hpp"

namespace schrotbc {

using nlohmann::json;
namespace fs = std::filesystem;

RunConfig default_config(int dim) {
  RunConfig cfg;
  cfg.domain.dim = dim;
  const int points = dim == 3 ? 32 : 64;
  cfg.grid.legendre_points = points;
  cfg.grid.fourier = {points, points};
  return cfg;
}

void validate(const RunConfig& cfg, bool sweep) {
  try {
    cfg.domain.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };
  if (cfg.domain.dim == 3 && cfg.scheme.family != BoundaryFamily::NP) {
    fail("3D runs admit only the NP boundary maps");
  }
  if ((cfg.scheme.family == BoundaryFamily::NP || cfg.scheme.family == BoundaryFamily::CP) &&
      cfg.scheme.pade_order < 1) {
    fail("pade_order must be >= 1");
  }
  if (cfg.grid.legendre_points < 3) fail("grid.legendre must be >= 3");
  const int axes = cfg.domain.dim == 3 ? 2 : 1;
  for (int a = 0; a < axes; ++a) {
    const int n = cfg.grid.fourier[static_cast<std::size_t>(a)];
    if (n < 2 || n % 2 != 0) fail("grid.fourier sizes must be even and >= 2");
  }
  if (!(cfg.time.tmax > 0.0) || !std::isfinite(cfg.time.tmax)) fail("tmax must be positive");
  if (sweep) {
    if (cfg.nt_set.size() < 3) fail("a sweep needs at least 3 values in nt_set");
    for (int nt : cfg.nt_set) {
      if (nt < 2) fail("every nt in nt_set must be >= 2");
    }
  } else if (cfg.time.nt < 2) {
    fail("nt must be >= 2");
  }
  if (cfg.profile.type != 1 && cfg.profile.type != 2) fail("profile.type must be I or II");
  if (!std::isfinite(cfg.profile.c0)) fail("profile.c0 must be finite");
  if (cfg.snapshot_every < 0) fail("snapshot_every must be >= 0");
}

namespace {

BoundaryFamily parse_family(const std::string& s, int& order) {
  static const std::regex re("^(CQ|NP|CP|HF)([0-9]+)?$", std::regex::icase);
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("unknown scheme '" + s + "'");
  std::string fam = m[1].str();
  std::transform(fam.begin(), fam.end(), fam.begin(), [](unsigned char c) { return std::toupper(c); });
  if (m[2].matched) {
    if (fam == "CQ" || fam == "HF") throw ConfigError("scheme '" + s + "' takes no Pade order");
    order = std::stoi(m[2].str());
  }
  if (fam == "CQ") return BoundaryFamily::CQ;
  if (fam == "NP") return BoundaryFamily::NP;
  if (fam == "CP") return BoundaryFamily::CP;
  return BoundaryFamily::HF;
}

OneStep parse_method(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "BDF1") return OneStep::BDF1;
  if (s == "TR") return OneStep::TR;
  throw ConfigError("unknown method '" + s + "' (expected BDF1 or TR)");
}

std::string family_name(BoundaryFamily f) {
  switch (f) {
    case BoundaryFamily::CQ: return "CQ";
    case BoundaryFamily::NP: return "NP";
    case BoundaryFamily::CP: return "CP";
    case BoundaryFamily::HF: return "HF";
  }
  return "?";
}

int parse_type(const json& j) {
  if (j.is_number_integer()) return j.get<int>();
  const auto s = j.get<std::string>();
  if (s == "I" || s == "i" || s == "1") return 1;
  if (s == "II" || s == "ii" || s == "2") return 2;
  throw ConfigError("unknown profile type '" + s + "'");
}

ProfileFamily parse_profile_family(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "fcg") return ProfileFamily::FCG;
  if (s == "fhg") return ProfileFamily::FHG;
  throw ConfigError("unknown profile family '" + s + "'");
}

std::array<double, 2> pair_of(const json& j) {
  if (j.is_number()) return {j.get<double>(), j.get<double>()};
  const auto v = j.get<std::vector<double>>();
  if (v.empty() || v.size() > 2) throw ConfigError("expected one or two values");
  return {v[0], v.size() == 2 ? v[1] : v[0]};
}

std::array<int, 2> int_pair_of(const json& j) {
  if (j.is_number_integer()) return {j.get<int>(), j.get<int>()};
  const auto v = j.get<std::vector<int>>();
  if (v.empty() || v.size() > 2) throw ConfigError("expected one or two integers");
  return {v[0], v.size() == 2 ? v[1] : v[0]};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* name) { return k == name; })) {
      throw ConfigError("unknown key '" + k + "' in " + where);
    }
  }
}

RunConfig from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j,
                 {"scheme", "pade_order", "method", "dim", "domain", "grid", "tmax", "nt", "nt_set",
                  "profile", "output_dir", "snapshot_every"},
                 "config");
  RunConfig cfg = default_config(j.value("dim", 2));
  if (j.contains("scheme")) {
    int order = cfg.scheme.pade_order;
    cfg.scheme.family = parse_family(j["scheme"].get<std::string>(), order);
    cfg.scheme.pade_order = order;
  }
  if (j.contains("pade_order")) cfg.scheme.pade_order = j["pade_order"].get<int>();
  if (j.contains("method")) cfg.scheme.method = parse_method(j["method"].get<std::string>());
  if (j.contains("domain")) {
    const json& d = j["domain"];
    reject_unknown(d, {"x_l", "x_r", "d", "beta"}, "domain");
    cfg.domain.x_l = d.value("x_l", cfg.domain.x_l);
    cfg.domain.x_r = d.value("x_r", cfg.domain.x_r);
    if (d.contains("d")) cfg.domain.d = pair_of(d["d"]);
    cfg.domain.beta = d.value("beta", cfg.domain.beta);
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    reject_unknown(g, {"legendre", "fourier"}, "grid");
    cfg.grid.legendre_points = g.value("legendre", cfg.grid.legendre_points);
    if (g.contains("fourier")) cfg.grid.fourier = int_pair_of(g["fourier"]);
  }
  cfg.time.tmax = j.value("tmax", cfg.time.tmax);
  cfg.time.nt = j.value("nt", cfg.time.nt);
  if (j.contains("nt_set")) cfg.nt_set = j["nt_set"].get<std::vector<int>>();
  if (j.contains("profile")) {
    const json& p = j["profile"];
    reject_unknown(p, {"family", "type", "c0"}, "profile");
    if (p.contains("family")) cfg.profile.family = parse_profile_family(p["family"].get<std::string>());
    if (p.contains("type")) cfg.profile.type = parse_type(p["type"]);
    cfg.profile.c0 = p.value("c0", cfg.profile.c0);
  }
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.snapshot_every = j.value("snapshot_every", cfg.snapshot_every);
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json j;
  j["scheme"] = family_name(cfg.scheme.family);
  j["pade_order"] = cfg.scheme.pade_order;
  j["method"] = cfg.scheme.method == OneStep::BDF1 ? "BDF1" : "TR";
  j["dim"] = cfg.domain.dim;
  j["domain"] = {{"x_l", cfg.domain.x_l},
                 {"x_r", cfg.domain.x_r},
                 {"d", cfg.domain.dim == 3 ? json::array({cfg.domain.d[0], cfg.domain.d[1]}) : json::array({cfg.domain.d[0]})},
                 {"beta", cfg.domain.beta}};
  j["grid"] = {{"legendre", cfg.grid.legendre_points},
               {"fourier", cfg.domain.dim == 3 ? json::array({cfg.grid.fourier[0], cfg.grid.fourier[1]})
                                               : json::array({cfg.grid.fourier[0]})}};
  j["tmax"] = cfg.time.tmax;
  j["nt"] = cfg.time.nt;
  j["nt_set"] = cfg.nt_set;
  j["profile"] = {{"family", cfg.profile.family == ProfileFamily::FCG ? "fcg" : "fhg"},
                  {"type", cfg.profile.type == 1 ? "I" : "II"},
                  {"c0", cfg.profile.c0}};
  j["output_dir"] = cfg.output_dir;
  j["snapshot_every"] = cfg.snapshot_every;
  return j;
}

}  // namespace

RunConfig parse_config(std::string_view json_text) {
  try {
    return from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const RunConfig& cfg) { return to_json(cfg).dump(2); }

ProfileSpec profile_for(const RunConfig& cfg) {
  return profile_preset(cfg.profile.family, cfg.profile.type, cfg.profile.c0, cfg.domain.dim, cfg.domain.d);
}

double relative_error(const SpectralGrid& grid, const CoeffField& u_num, std::span<const cplx> exact_samples,
                      double u0_norm) {
  require(u0_norm > 0.0, "relative_error: initial norm is zero");
  require(exact_samples.size() == grid.sample_count(), "relative_error: sample count mismatch");
  CVec diff = grid.synthesize(u_num);
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= exact_samples[i];
  return std::sqrt(grid.norm_sq(diff)) / u0_norm;
}

double relative_error(const SpectralGrid& grid, const CoeffField& u_num, const ProfileSpec& spec, double t,
                      double u0_norm) {
  return relative_error(grid, u_num, sample_profile(spec, grid, t), u0_norm);
}

RunResult run(const RunConfig& cfg, const StepObserver& observer) {
  validate(cfg);
  const auto start = std::chrono::steady_clock::now();
  SpectralGrid grid(cfg.domain, cfg.grid);
  const ProfileSpec spec = profile_for(cfg);
  const CVec s0 = sample_profile(spec, grid, 0.0);
  InitialProjection init = project_initial(grid, s0);
  require(init.norm > 0.0, "run: initial profile vanishes on the grid");
  const double norm0_sq = init.norm * init.norm;

  RunResult res;
  res.label = scheme_label(cfg.scheme);
  res.wall_trace_warning = init.wall_warning;
  Simulation sim(grid, cfg.time, cfg.scheme, std::move(init.field));

  auto record = [&](const CVec& exact) {
    const double e = relative_error(sim.grid(), sim.field(), exact, std::sqrt(norm0_sq));
    res.t.push_back(sim.time());
    res.e.push_back(e);
    res.energy.push_back(sim.grid().norm_sq(sim.field()) / norm0_sq);
    res.energy_exact.push_back(sim.grid().norm_sq(exact) / norm0_sq);
    res.robin_residual.push_back(sim.step_index() == 0 ? 0.0 : sim.robin_residual());
    res.max_error = std::max(res.max_error, e);
  };

  const fs::path out_dir(cfg.output_dir);
  auto maybe_snapshot = [&] {
    if (cfg.snapshot_every > 0 && sim.step_index() % static_cast<std::size_t>(cfg.snapshot_every) == 0) {
      write_snapshot(out_dir / "snapshots", sim);
    }
  };

  record(s0);
  maybe_snapshot();
  if (observer) observer(sim);
  for (int j = 1; j < cfg.time.nt; ++j) {
    sim.step();
    record(sample_profile(spec, sim.grid(), sim.time()));
    maybe_snapshot();
    if (observer) observer(sim);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

SlopeFit fit_slope(std::span<const double> dt, std::span<const double> e) {
  require(dt.size() == e.size(), "fit_slope: length mismatch");
  require(dt.size() >= 2, "fit_slope: need at least two points");
  for (std::size_t i = 0; i < dt.size(); ++i) {
    require(dt[i] > 0.0 && e[i] > 0.0, "fit_slope: dt and e must be positive");
  }
  const double e_min = *std::min_element(e.begin(), e.end());
  SlopeFit fit;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] > 10.0 * e_min) fit.used.push_back(i);
  }
  // Fewer than two survivors means the range never reached a plateau.
  if (fit.used.size() < 2) {
    fit.used.resize(e.size());
    std::iota(fit.used.begin(), fit.used.end(), std::size_t{0});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(fit.used.size());
  for (std::size_t i : fit.used) {
    const double x = std::log(dt[i]);
    const double y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "fit_slope: all step sizes coincide");
  fit.slope = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

unsigned thread_budget() {
  if (const char* env = std::getenv("SCHROTBC_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

SweepResult convergence_sweep(const RunConfig& cfg, unsigned threads) {
  validate(cfg, true);
  const std::size_t n = cfg.nt_set.size();
  SweepResult sweep;
  sweep.runs.resize(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        RunConfig sub = cfg;
        sub.time.nt = cfg.nt_set[i];
        sub.output_dir = (fs::path(cfg.output_dir) / fmt::format("nt_{}", sub.time.nt)).string();
        sweep.runs[i] = run(sub);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  for (std::size_t i = 0; i < n; ++i) {
    TimeGrid tg{cfg.time.tmax, cfg.nt_set[i]};
    sweep.nt.push_back(cfg.nt_set[i]);
    sweep.dt.push_back(tg.dt());
    sweep.e.push_back(sweep.runs[i].max_error);
  }
  sweep.fit = fit_slope(sweep.dt, sweep.e);
  return sweep;
}

void write_errors_csv(const fs::path& path, const RunResult& result) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "t,e,E\n";
  for (std::size_t i = 0; i < result.t.size(); ++i) {
    out << fmt::format("{:.17g},{:.17g},{:.17g}\n", result.t[i], result.e[i], result.energy[i]);
  }
}

namespace {

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json run_block(const RunResult& r) {
  json j;
  j["scheme"] = r.label;
  j["steps"] = r.t.empty() ? 0 : r.t.size() - 1;
  j["max_error"] = r.max_error;
  j["final_time"] = r.t.empty() ? 0.0 : r.t.back();
  j["final_error"] = r.e.empty() ? 0.0 : r.e.back();
  j["final_energy"] = r.energy.empty() ? 0.0 : r.energy.back();
  j["final_energy_exact"] = r.energy_exact.empty() ? 0.0 : r.energy_exact.back();
  j["max_robin_residual"] =
      r.robin_residual.empty() ? 0.0 : *std::max_element(r.robin_residual.begin(), r.robin_residual.end());
  j["wall_trace_warning"] = r.wall_trace_warning;
  return j;
}

}  // namespace

void write_run_summary(const fs::path& dir, const RunConfig& cfg, const RunResult& result) {
  fs::create_directories(dir);
  json j = run_block(result);
  j["config"] = to_json(cfg);
  write_json(dir / "summary.json", j);
  write_json(dir / "timings.json", json{{"seconds", result.seconds}});
}

void write_sweep_summary(const fs::path& dir, const RunConfig& cfg, const SweepResult& sweep) {
  fs::create_directories(dir);
  json pairs = json::array();
  json timings = json::array();
  for (std::size_t i = 0; i < sweep.nt.size(); ++i) {
    pairs.push_back({{"nt", sweep.nt[i]}, {"dt", sweep.dt[i]}, {"e", sweep.e[i]}});
    timings.push_back({{"nt", sweep.nt[i]}, {"seconds", sweep.runs[i].seconds}});
  }
  json j;
  j["config"] = to_json(cfg);
  j["scheme"] = sweep.runs.empty() ? "" : sweep.runs.front().label;
  j["points"] = pairs;
  j["slope"] = sweep.fit.slope;
  j["fit_indices"] = sweep.fit.used;
  write_json(dir / "summary.json", j);
  write_json(dir / "timings.json", json{{"runs", timings}});
}

void write_snapshot(const fs::path& dir, const Simulation& sim) {
  fs::create_directories(dir);
  const SpectralGrid& grid = sim.grid();
  const CVec samples = grid.synthesize(sim.field());
  const std::string stem = fmt::format("u_{:06d}", sim.step_index());
  {
    std::ofstream out(dir / (stem + ".bin"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write snapshot in " + dir.string());
    for (const cplx& z : samples) {
      for (const float f : {static_cast<float>(z.real()), static_cast<float>(z.imag())}) {
        auto bits = std::bit_cast<std::uint32_t>(f);
        if constexpr (std::endian::native == std::endian::big) {
          bits = ((bits & 0xFFU) << 24) | ((bits & 0xFF00U) << 8) | ((bits >> 8) & 0xFF00U) | (bits >> 24);
        }
        char bytes[4];
        std::memcpy(bytes, &bits, 4);
        out.write(bytes, 4);
      }
    }
  }
  std::vector<double> x1(grid.legendre_size());
  for (std::size_t i = 0; i < x1.size(); ++i) x1[i] = grid.x1(i);
  const auto sizes = grid.transverse_sizes();
  json side;
  side["file"] = stem + ".bin";
  side["dtype"] = "complex64-le";
  side["step"] = sim.step_index();
  side["time"] = sim.time();
  side["layout"] = grid.domain().dim == 3 ? "[x2][x3][x1]" : "[x2][x1]";
  side["shape"] = grid.domain().dim == 3 ? json::array({sizes[0], sizes[1], x1.size()})
                                                 : json::array({sizes[0], x1.size()});
  side["x1"] = x1;
  side["x2_range"] = json::array({-grid.domain().d[0], grid.domain().d[0]});
  if (grid.domain().dim == 3) side["x3_range"] = json::array({-grid.domain().d[1], grid.domain().d[1]});
  write_json(dir / (stem + ".json"), side);
}

}  // namespace schrotbc
