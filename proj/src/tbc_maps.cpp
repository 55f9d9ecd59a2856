#include "schrotbc/tbc_maps.hpp"

#include <string>
#include <utility>

#include "schrotbc/errors.hpp"

namespace schrotbc {

namespace {

void check_walls(const WallArrays& w, std::size_t modes, const char* what) {
  for (const auto& side : w) {
    require(side.size() == modes, std::string(what) + ": trace length does not match mode count");
  }
}

WallArrays zero_walls(std::size_t modes) { return {CVec(modes), CVec(modes)}; }

// Extend a weight table so that it holds at least terms+1 weights.
void ensure_weights(CqTable& t, std::size_t terms) {
  if (t.weights.size() > terms) return;
  t = cq_weights(t.method, t.nu, 2 * terms + 16);
}

}  // namespace

BoundaryMap::BoundaryMap(BoundaryContext ctx) : ctx_(std::move(ctx)) {
  require(ctx_.rho > 0.0, "BoundaryMap: rho must be positive");
  require(!ctx_.transverse.empty(), "BoundaryMap: no transverse modes");
}

RobinData BoundaryMap::emit() {
  require(!pending_, "BoundaryMap::emit: previous step was not committed");
  pending_ = true;
  return {kappa_, history(), ctx_.method == OneStep::TR};
}

void BoundaryMap::commit(const StepTraces& traces) {
  require(pending_, "BoundaryMap::commit: no emitted step to commit");
  check_walls(traces.u, ctx_.modes(), "BoundaryMap::commit");
  if (ctx_.method == OneStep::TR) check_walls(traces.v, ctx_.modes(), "BoundaryMap::commit");
  advance(traces);
  pending_ = false;
  ++step_;
}

// ---- CQ ----------------------------------------------------------------

CqMap::CqMap(BoundaryContext ctx, const WallArrays& initial_u, std::size_t capacity)
    : BoundaryMap(std::move(ctx)),
      weights_(cq_weights(ctx_.method, 0.5, capacity + 1)),
      previous_(zero_walls(ctx_.modes())) {
  check_walls(initial_u, ctx_.modes(), "CqMap");
  const std::size_t n = ctx_.modes();
  kappa_.assign(n, ctx_.alpha1);
  multiplier_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const cplx a = ctx_.transverse[m];
    multiplier_[m] = ctx_.method == OneStep::BDF1 ? 1.0 / (1.0 + a) : (1.0 - a) / (1.0 + a);
  }
  for (std::size_t w = 0; w < 2; ++w) {
    slices_[w].reserve(capacity + 1);
    slices_[w].push_back(initial_u[w]);
  }
}

WallArrays CqMap::history() {
  ensure_weights(weights_, slice_count());
  WallArrays out;
  for (std::size_t w = 0; w < 2; ++w) {
    for (auto& slice : slices_[w]) {
      for (std::size_t m = 0; m < slice.size(); ++m) slice[m] *= multiplier_[m];
    }
    out[w] = history_sum(weights_, slices_[w]);
    if (ctx_.method == OneStep::TR) {
      CVec current = out[w];
      for (std::size_t m = 0; m < current.size(); ++m) out[w][m] = 0.5 * (current[m] + previous_[w][m]);
      previous_[w] = std::move(current);
    }
  }
  return out;
}

void CqMap::advance(const StepTraces& traces) {
  for (std::size_t w = 0; w < 2; ++w) slices_[w].push_back(traces.u[w]);
}

// ---- NP ----------------------------------------------------------------

NpMap::NpMap(BoundaryContext ctx, const PadeTable& table, const WallArrays& initial_u)
    : BoundaryMap(std::move(ctx)),
      c_(np_robin_constants(table, ctx_.rho)),
      m_(static_cast<std::size_t>(table.order)),
      u_last_(initial_u) {
  check_walls(initial_u, ctx_.modes(), "NpMap");
  const std::size_t n = ctx_.modes();
  kappa_.assign(n, ctx_.alpha1 * c_.varpi);
  for (auto& p : phi_) p.assign(n * m_, cplx{});
  inv1a_.resize(n);
  for (std::size_t m = 0; m < n; ++m) inv1a_[m] = 1.0 / (1.0 + ctx_.transverse[m]);
}

cplx NpMap::aux(Wall side, std::size_t mode, std::size_t k) const {
  return on(phi_, side).at(mode * m_ + k);
}

WallArrays NpMap::history() {
  const std::size_t n = ctx_.modes();
  WallArrays out = zero_walls(n);
  double gamma_sum = 0.0;
  for (double g : c_.gamma) gamma_sum += g;
  for (std::size_t w = 0; w < 2; ++w) {
    for (std::size_t m = 0; m < n; ++m) {
      const cplx* phi = &phi_[w][m * m_];
      cplx acc{};
      if (ctx_.method == OneStep::BDF1) {
        for (std::size_t k = 0; k < m_; ++k) acc += c_.gamma[k] * phi[k];
        acc *= inv1a_[m];
      } else {
        const cplx a = ctx_.transverse[m];
        const cplx q = (1.0 - a) * inv1a_[m];
        for (std::size_t k = 0; k < m_; ++k) {
          const double p = (1.0 - c_.eta_bar_sq[k]) / (1.0 + c_.eta_bar_sq[k]);
          acc += (-0.5 * c_.b_bar[k]) * (p * q + 1.0) * phi[k];
        }
        acc += (gamma_sum / c_.rho) * (-a * inv1a_[m]) * u_last_[w][m];
      }
      out[w][m] = acc;
    }
  }
  return out;
}

void NpMap::advance(const StepTraces& traces) {
  const std::size_t n = ctx_.modes();
  const double inv_rho = 1.0 / c_.rho;
  for (std::size_t w = 0; w < 2; ++w) {
    for (std::size_t m = 0; m < n; ++m) {
      cplx* phi = &phi_[w][m * m_];
      if (ctx_.method == OneStep::BDF1) {
        const cplx src = traces.u[w][m] * inv_rho;
        for (std::size_t k = 0; k < m_; ++k) {
          phi[k] = (phi[k] * inv1a_[m] + src) / (1.0 + c_.eta_bar_sq[k]);
        }
      } else {
        const cplx a = ctx_.transverse[m];
        const cplx q = (1.0 - a) * inv1a_[m];
        const cplx src = traces.v[w][m] - a * inv1a_[m] * u_last_[w][m];
        for (std::size_t k = 0; k < m_; ++k) {
          const double den = 1.0 + c_.eta_bar_sq[k];
          const double p = (1.0 - c_.eta_bar_sq[k]) / den;
          phi[k] = p * q * phi[k] + (2.0 * inv_rho / den) * src;
        }
      }
    }
  }
  u_last_ = traces.u;
}

// ---- CP ----------------------------------------------------------------

CpMap::CpMap(BoundaryContext ctx, const PadeTable& table)
    : BoundaryMap(std::move(ctx)),
      c_(np_robin_constants(table, ctx_.rho)),
      m_(static_cast<std::size_t>(table.order)) {
  const std::size_t n = ctx_.modes();
  for (auto& p : phi_) p.assign(n * m_, cplx{});
  gamma_.resize(n * m_);
  denom_.resize(n * m_);
  kappa_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    cplx sum{};
    for (std::size_t k = 0; k < m_; ++k) {
      const cplx den = 1.0 + ctx_.transverse[m] + c_.eta_bar_sq[k];
      denom_[m * m_ + k] = den;
      gamma_[m * m_ + k] = -c_.b_bar[k] / den;
      sum += gamma_[m * m_ + k];
    }
    kappa_[m] = ctx_.alpha1 * (c_.b0_bar + sum / c_.rho);
  }
}

cplx CpMap::aux(Wall side, std::size_t mode, std::size_t k) const {
  return on(phi_, side).at(mode * m_ + k);
}

WallArrays CpMap::history() {
  const std::size_t n = ctx_.modes();
  WallArrays out = zero_walls(n);
  for (std::size_t w = 0; w < 2; ++w) {
    for (std::size_t m = 0; m < n; ++m) {
      cplx acc{};
      for (std::size_t k = 0; k < m_; ++k) acc += gamma_[m * m_ + k] * phi_[w][m * m_ + k];
      out[w][m] = acc;
    }
  }
  return out;
}

void CpMap::advance(const StepTraces& traces) {
  const std::size_t n = ctx_.modes();
  const double inv_rho = 1.0 / c_.rho;
  for (std::size_t w = 0; w < 2; ++w) {
    for (std::size_t m = 0; m < n; ++m) {
      for (std::size_t k = 0; k < m_; ++k) {
        cplx& phi = phi_[w][m * m_ + k];
        const cplx den = denom_[m * m_ + k];
        if (ctx_.method == OneStep::BDF1) {
          phi = (phi + traces.u[w][m] * inv_rho) / den;
        } else {
          phi = (2.0 - den) / den * phi + (2.0 * inv_rho) * traces.v[w][m] / den;
        }
      }
    }
  }
}

// ---- HF ----------------------------------------------------------------

HfMap::HfMap(BoundaryContext ctx, const WallArrays& initial_u, std::size_t capacity)
    : BoundaryMap(std::move(ctx)),
      half_(cq_weights(ctx_.method, 0.5, capacity + 1)),
      neg_half_(cq_weights(ctx_.method, -0.5, capacity + 1)) {
  check_walls(initial_u, ctx_.modes(), "HfMap");
  const std::size_t n = ctx_.modes();
  kappa_.resize(n);
  for (std::size_t m = 0; m < n; ++m) kappa_[m] = ctx_.alpha1 * (1.0 + 0.5 * ctx_.transverse[m]);
  for (std::size_t w = 0; w < 2; ++w) {
    traces_[w].reserve(capacity + 1);
    // TR works on staggered samples with v^0 = 0.
    traces_[w].push_back(ctx_.method == OneStep::BDF1 ? initial_u[w] : CVec(n));
  }
}

WallArrays HfMap::history() {
  ensure_weights(half_, traces_[0].size());
  ensure_weights(neg_half_, traces_[0].size());
  WallArrays out;
  for (std::size_t w = 0; w < 2; ++w) {
    const CVec bp = history_sum(half_, traces_[w]);
    const CVec bm = history_sum(neg_half_, traces_[w]);
    out[w].resize(bp.size());
    for (std::size_t m = 0; m < bp.size(); ++m) out[w][m] = bp[m] + 0.5 * ctx_.transverse[m] * bm[m];
  }
  return out;
}

void HfMap::advance(const StepTraces& traces) {
  for (std::size_t w = 0; w < 2; ++w) {
    traces_[w].push_back(ctx_.method == OneStep::BDF1 ? traces.u[w] : traces.v[w]);
  }
}

std::unique_ptr<BoundaryMap> make_boundary_map(BoundaryFamily family, int pade_order,
                                               const BoundaryContext& ctx,
                                               const WallArrays& initial_u, std::size_t capacity) {
  switch (family) {
    case BoundaryFamily::CQ:
      return std::make_unique<CqMap>(ctx, initial_u, capacity);
    case BoundaryFamily::NP:
      return std::make_unique<NpMap>(ctx, pade_sqrt_table(pade_order), initial_u);
    case BoundaryFamily::CP:
      return std::make_unique<CpMap>(ctx, pade_sqrt_table(pade_order));
    case BoundaryFamily::HF:
      return std::make_unique<HfMap>(ctx, initial_u, capacity);
  }
  throw ContractViolation("make_boundary_map: unknown family");
}

}  // namespace schrotbc
