#include "schrotbc/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "schrotbc/errors.hpp"

namespace schrotbc {

namespace {

double gamma_norm(std::size_t k) { return 2.0 / (2.0 * static_cast<double>(k) + 1.0); }

}  // namespace

BoundaryBasis build_basis(cplx kappa, int order) {
  require(order >= 2, "build_basis: order must be >= 2");
  BoundaryBasis basis;
  basis.kappa = kappa;
  basis.order = order;
  basis.b.resize(static_cast<std::size_t>(order) - 1);
  for (int p = 0; p + 2 <= order; ++p) {
    const cplx den = kappa + (p + 2.0) * (p + 3.0) / 2.0;
    if (std::abs(den) == 0.0) {
      throw NumericalError("build_basis: kappa hits a pole at p=" + std::to_string(p));
    }
    basis.b[p] = -(kappa + p * (p + 1.0) / 2.0) / den;
  }
  return basis;
}

CVec BoundaryBasis::to_legendre(std::span<const cplx> w_hat) const {
  require(w_hat.size() == dim(), "BoundaryBasis::to_legendre: length mismatch");
  CVec u(legendre_size());
  for (std::size_t p = 0; p < dim(); ++p) {
    u[p] += w_hat[p];
    u[p + 2] += b[p] * w_hat[p];
  }
  return u;
}

CVec BoundaryBasis::quadrature(std::span<const cplx> f) const {
  require(f.size() == legendre_size(), "BoundaryBasis::quadrature: length mismatch");
  CVec g(dim());
  for (std::size_t p = 0; p < dim(); ++p) {
    g[p] = gamma_norm(p) * f[p] + b[p] * gamma_norm(p + 2) * f[p + 2];
  }
  return g;
}

LiftingPair build_lifting(cplx kappa) {
  if (std::abs(kappa) == 0.0 || std::abs(kappa + 1.0) == 0.0) {
    throw NumericalError("build_lifting: kappa in {0, -1} makes the lifting singular");
  }
  const cplx c0 = 1.0 / (2.0 * kappa);
  const cplx c1 = 1.0 / (2.0 * (kappa + 1.0));
  return {{-c0, c1}, {c0, c1}};
}

BandedOperator build_operator(const BoundaryBasis& basis) {
  const std::size_t n = basis.dim();
  BandedOperator ops;
  ops.stiffness.resize(n);
  ops.mass_diag.resize(n);
  ops.mass_off.resize(n >= 2 ? n - 2 : 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    const cplx bk = basis.b[k];
    ops.stiffness[k] = -2.0 * (2.0 * kd + 3.0) * bk;
    ops.mass_diag[k] = 2.0 / (2.0 * kd + 1.0) + 2.0 * bk * bk / (2.0 * kd + 5.0);
    if (k + 2 < n) ops.mass_off[k] = 2.0 * bk / (2.0 * kd + 5.0);
  }
  return ops;
}

CVec BandedOperator::apply(cplx alpha1_inv_sq, cplx d_mode, std::span<const cplx> x) const {
  const std::size_t n = dim();
  require(x.size() == n, "BandedOperator::apply: length mismatch");
  CVec y(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx m = mass_diag[k] * x[k];
    if (k + 2 < n) m += mass_off[k] * x[k + 2];
    if (k >= 2) m += mass_off[k - 2] * x[k - 2];
    y[k] = alpha1_inv_sq * stiffness[k] * x[k] + d_mode * m;
  }
  return y;
}

BandedLu::BandedLu(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(2 * kl + ku + 1), band_(n * width_), piv_(n) {}

cplx& BandedLu::at(std::size_t i, std::size_t j) {
  require(i < n_ && j < n_ && j + kl_ >= i && j <= i + ku_, "BandedLu::at: outside band");
  return band_[idx(i, j)];
}

void BandedLu::factor() {
  require(!factored_, "BandedLu::factor: already factored");
  const std::size_t reach = kl_ + ku_;  // upper bandwidth after pivoting
  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    const std::size_t last_col = std::min(n_ - 1, k + reach);
    std::size_t p = k;
    double best = std::abs(band_[idx(k, k)]);
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const double v = std::abs(band_[idx(i, k)]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (!(best > 0.0) || !std::isfinite(best)) {
      throw NumericalError("BandedLu::factor: singular matrix at column " + std::to_string(k));
    }
    piv_[k] = p;
    if (p != k) {
      for (std::size_t j = k; j <= last_col; ++j) std::swap(band_[idx(k, j)], band_[idx(p, j)]);
    }
    const cplx pivot = band_[idx(k, k)];
    for (std::size_t i = k + 1; i <= last_row; ++i) {
      const cplx l = band_[idx(i, k)] / pivot;
      band_[idx(i, k)] = l;
      if (l == cplx{}) continue;
      for (std::size_t j = k + 1; j <= last_col; ++j) band_[idx(i, j)] -= l * band_[idx(k, j)];
    }
  }
  factored_ = true;
}

void BandedLu::solve(std::span<cplx> rhs) const {
  require(factored_, "BandedLu::solve: not factored");
  require(rhs.size() == n_, "BandedLu::solve: length mismatch");
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(rhs[k], rhs[piv_[k]]);
    const std::size_t last_row = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last_row; ++i) rhs[i] -= band_[idx(i, k)] * rhs[k];
  }
  const std::size_t reach = kl_ + ku_;
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t last_col = std::min(n_ - 1, k + reach);
    cplx acc = rhs[k];
    for (std::size_t j = k + 1; j <= last_col; ++j) acc -= band_[idx(k, j)] * rhs[j];
    rhs[k] = acc / band_[idx(k, k)];
  }
}

ModeSolver::ModeSolver(const BandedOperator& ops, cplx alpha1, cplx d_mode) : lu_(ops.dim(), 2, 2) {
  const std::size_t n = ops.dim();
  const cplx a_inv_sq = 1.0 / (alpha1 * alpha1);
  for (std::size_t k = 0; k < n; ++k) {
    lu_.at(k, k) = a_inv_sq * ops.stiffness[k] + d_mode * ops.mass_diag[k];
    if (k + 2 < n) {
      lu_.at(k, k + 2) = d_mode * ops.mass_off[k];
      lu_.at(k + 2, k) = d_mode * ops.mass_off[k];
    }
  }
  lu_.factor();
}

CVec ModeSolver::solve(std::span<const cplx> rhs) const {
  CVec x(rhs.begin(), rhs.end());
  lu_.solve(x);
  return x;
}

CVec solve_mode(const BandedOperator& ops, cplx alpha1, cplx d_mode, std::span<const cplx> rhs) {
  return ModeSolver(ops, alpha1, d_mode).solve(rhs);
}

namespace {

// Lifting coefficients (degrees 0, 1) of alpha1 * (B_l chi_l - B_r chi_r).
std::array<cplx, 2> lifting_coeffs(WallPair h, cplx alpha1, const LiftingPair& lift) {
  return {alpha1 * (h.left * lift.left[0] - h.right * lift.right[0]),
          alpha1 * (h.left * lift.left[1] - h.right * lift.right[1])};
}

}  // namespace

CVec assemble_rhs(std::span<const cplx> u_coeffs, WallPair history, cplx d_mode, cplx alpha1,
                  const BoundaryBasis& basis, const LiftingPair& lifting) {
  require(u_coeffs.size() == basis.legendre_size(), "assemble_rhs: length mismatch");
  CVec f(u_coeffs.begin(), u_coeffs.end());
  const auto c = lifting_coeffs(history, alpha1, lifting);
  f[0] -= d_mode * c[0];
  f[1] -= d_mode * c[1];
  return basis.quadrature(f);
}

CVec reconstruct_mode(std::span<const cplx> w_hat, WallPair history, cplx alpha1,
                      const BoundaryBasis& basis, const LiftingPair& lifting) {
  CVec u = basis.to_legendre(w_hat);
  const auto c = lifting_coeffs(history, alpha1, lifting);
  u[0] += c[0];
  u[1] += c[1];
  return u;
}

WallPair wall_traces(std::span<const cplx> coeffs) {
  WallPair w;
  for (std::size_t p = 0; p < coeffs.size(); ++p) {
    w.right += coeffs[p];
    w.left += (p % 2 == 0) ? coeffs[p] : -coeffs[p];
  }
  return w;
}

WallPair wall_derivatives(std::span<const cplx> coeffs) {
  WallPair w;
  for (std::size_t p = 1; p < coeffs.size(); ++p) {
    const double s = static_cast<double>(p) * (static_cast<double>(p) + 1.0) / 2.0;
    w.right += s * coeffs[p];
    w.left += (p % 2 == 0) ? -s * coeffs[p] : s * coeffs[p];
  }
  return w;
}

WallPair robin_residual(std::span<const cplx> coeffs, cplx kappa, cplx alpha1, WallPair history) {
  const WallPair u = wall_traces(coeffs);
  const WallPair du = wall_derivatives(coeffs);
  return {du.left - kappa * u.left - alpha1 * history.left,
          du.right + kappa * u.right + alpha1 * history.right};
}

}  // namespace schrotbc
