#include "schrotbc/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include <fmt/format.h>

#include "schrotbc/errors.hpp"

namespace schrotbc {

void TimeGrid::validate() const {
  require(nt >= 2, "TimeGrid: nt must be >= 2");
  require(tmax > 0.0 && std::isfinite(tmax), "TimeGrid: tmax must be positive");
}

std::string scheme_label(const SchemeSpec& scheme) {
  std::string family;
  switch (scheme.family) {
    case BoundaryFamily::CQ: family = "CQ"; break;
    case BoundaryFamily::NP: family = fmt::format("NP{}", scheme.pade_order); break;
    case BoundaryFamily::CP: family = fmt::format("CP{}", scheme.pade_order); break;
    case BoundaryFamily::HF: family = "HF"; break;
  }
  return family + (scheme.method == OneStep::BDF1 ? "-BDF1" : "-TR");
}

BoundaryContext make_boundary_context(const SpectralGrid& grid, const TimeGrid& time, OneStep method) {
  const DomainSpec& dom = grid.domain();
  BoundaryContext ctx;
  ctx.method = method;
  ctx.rho = time.rho(method);
  ctx.alpha1 = std::sqrt(ctx.rho / dom.beta1()) * std::polar(1.0, -kPi / 4.0);
  const cplx a2 = alpha_inv_sq(dom.beta_perp(0), ctx.rho);
  const cplx a3 = dom.dim == 3 ? alpha_inv_sq(dom.beta_perp(1), ctx.rho) : cplx{};
  ctx.transverse.resize(grid.mode_count());
  for (std::size_t m = 0; m < grid.mode_count(); ++m) {
    const auto [m2, m3] = grid.mode_index(m);
    ctx.transverse[m] = a2 * static_cast<double>(m2 * m2) + a3 * static_cast<double>(m3 * m3);
  }
  return ctx;
}

namespace {

WallArrays field_traces(const CoeffField& f) {
  WallArrays w{CVec(f.mode_count()), CVec(f.mode_count())};
  for (std::size_t m = 0; m < f.mode_count(); ++m) {
    const WallPair t = wall_traces(f.mode(m));
    w[0][m] = t.left;
    w[1][m] = t.right;
  }
  return w;
}

}  // namespace

Simulation::Simulation(SpectralGrid grid, TimeGrid time, SchemeSpec scheme, CoeffField u0)
    : grid_(std::move(grid)), time_(time), scheme_(scheme), u_(std::move(u0)) {
  time_.validate();
  require(u_.legendre_size() == grid_.legendre_size() && u_.mode_count() == grid_.mode_count(),
          "Simulation: initial field does not match the grid");
  require(grid_.domain().dim == 2 || scheme_.family == BoundaryFamily::NP,
          "Simulation: 3D runs support only the NP boundary maps");
  require(scheme_.family == BoundaryFamily::CQ || scheme_.family == BoundaryFamily::HF ||
              scheme_.pade_order >= 1,
          "Simulation: Pade order must be >= 1");

  const BoundaryContext ctx = make_boundary_context(grid_, time_, scheme_.method);
  alpha1_ = ctx.alpha1;
  const auto capacity = static_cast<std::size_t>(time_.nt);
  bc_ = make_boundary_map(scheme_.family, scheme_.pade_order, ctx, field_traces(u_), capacity);

  const CVec& kappa = bc_->kappa();
  const bool uniform = std::all_of(kappa.begin(), kappa.end(), [&](cplx k) { return k == kappa[0]; });
  std::optional<BoundaryBasis> shared_basis;
  std::optional<BandedOperator> shared_ops;
  if (uniform) {
    shared_basis = build_basis(kappa[0], grid_.order());
    shared_ops = build_operator(*shared_basis);
  }
  modes_.reserve(grid_.mode_count());
  for (std::size_t m = 0; m < grid_.mode_count(); ++m) {
    BoundaryBasis basis = uniform ? *shared_basis : build_basis(kappa[m], grid_.order());
    const BandedOperator ops = uniform ? *shared_ops : build_operator(basis);
    const cplx d = 1.0 + ctx.transverse[m];
    LiftingPair lifting = build_lifting(kappa[m]);
    ModeSolver solver(ops, alpha1_, d);
    modes_.push_back({std::move(basis), lifting, std::move(solver), d});
  }
  v_ = CoeffField(grid_.legendre_size(), grid_.mode_count());
  norm0_ = std::sqrt(grid_.norm_sq(u_));
}

void Simulation::step() {
  const RobinData robin = bc_->emit();
  const std::size_t nm = grid_.mode_count();
  const std::size_t np = grid_.legendre_size();
  const bool tr = scheme_.method == OneStep::TR;

  CoeffField next(np, nm);
  StepTraces traces{{CVec(nm), CVec(nm)}, {CVec(nm), CVec(nm)}};
  double res_max = 0.0;
  double scale_max = 0.0;
  for (std::size_t m = 0; m < nm; ++m) {
    const ModeData& md = modes_[m];
    const WallPair h{robin.history[0][m], robin.history[1][m]};
    const CVec rhs = assemble_rhs(u_.mode(m), h, md.d, alpha1_, md.basis, md.lifting);
    const CVec w = md.solver.solve(rhs);
    const CVec x = reconstruct_mode(w, h, alpha1_, md.basis, md.lifting);

    const WallPair r = schrotbc::robin_residual(x, robin.kappa[m], alpha1_, h);
    res_max = std::max({res_max, std::abs(r.left), std::abs(r.right)});
    double norm_sq = 0.0;
    for (const cplx& c : x) norm_sq += std::norm(c);
    scale_max = std::max(scale_max, std::sqrt(norm_sq));

    auto out = next.mode(m);
    const auto prev = u_.mode(m);
    if (tr) {
      std::copy(x.begin(), x.end(), v_.mode(m).begin());
      for (std::size_t p = 0; p < np; ++p) out[p] = 2.0 * x[p] - prev[p];
      const WallPair tv = wall_traces(x);
      traces.v[0][m] = tv.left;
      traces.v[1][m] = tv.right;
    } else {
      std::copy(x.begin(), x.end(), out.begin());
    }
    const WallPair tu = wall_traces(out);
    traces.u[0][m] = tu.left;
    traces.u[1][m] = tu.right;
  }
  robin_residual_ = scale_max > 0.0 ? res_max / scale_max : res_max;
  bc_->commit(traces);
  u_ = std::move(next);
  ++j_;

  const double norm = std::sqrt(grid_.norm_sq(u_));
  if (!std::isfinite(norm)) {
    throw InstabilityError(fmt::format("non-finite field at step {} (t = {:.6g})", j_, time()));
  }
  if (norm > 1e6 * norm0_ && norm > 0.0) {
    throw InstabilityError(fmt::format("field norm {:.3e} exceeds 1e6 times the initial norm at step {}",
                                       norm, j_));
  }
}

InitialProjection project_initial(const SpectralGrid& grid, std::span<const cplx> samples) {
  require(samples.size() == grid.sample_count(), "project_initial: sample count mismatch");
  InitialProjection out;
  out.field = grid.analyze(samples);
  out.norm = std::sqrt(grid.norm_sq(samples));
  const std::size_t np = grid.legendre_size();
  for (std::size_t t = 0; t < grid.mode_count(); ++t) {
    out.wall_trace = std::max({out.wall_trace, std::abs(samples[t * np]), std::abs(samples[t * np + np - 1])});
  }
  out.wall_warning = out.wall_trace > 1e-10 * out.norm;
  return out;
}

InitialProjection project_initial(const SpectralGrid& grid, const Evaluator& u0) {
  const std::size_t np = grid.legendre_size();
  CVec samples(grid.sample_count());
  for (std::size_t t = 0; t < grid.mode_count(); ++t) {
    const auto xp = grid.x_perp(t);
    for (std::size_t i = 0; i < np; ++i) samples[t * np + i] = u0({grid.x1(i), xp[0], xp[1]});
  }
  return project_initial(grid, samples);
}

}  // namespace schrotbc
