#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "schrotbc/types.hpp"

namespace schrotbc {

/**
 * @brief Robin-adapted Legendre basis phi_p = L_p + b_p L_{p+2}, p = 0..N-2.
 *
 * Each phi_p satisfies (d - kappa) phi|_{-1} = 0 and (d + kappa) phi|_{+1} = 0.
 */
struct BoundaryBasis {
  cplx kappa{};
  int order = 0;  ///< N, highest Legendre degree
  CVec b;         ///< b_p, size N-1

  [[nodiscard]] std::size_t dim() const { return b.size(); }
  [[nodiscard]] std::size_t legendre_size() const { return static_cast<std::size_t>(order) + 1; }

  /// Conversion B: basis coefficients (N-1) to Legendre coefficients (N+1).
  [[nodiscard]] CVec to_legendre(std::span<const cplx> w_hat) const;
  /// Quadrature Q Gamma: Legendre coefficients (N+1) to inner products with phi_p (N-1).
  [[nodiscard]] CVec quadrature(std::span<const cplx> f) const;
};

BoundaryBasis build_basis(cplx kappa, int order);

/// Degree-one liftings with unit Robin data on one wall, zero on the other.
struct LiftingPair {
  std::array<cplx, 2> left;   ///< Legendre coefficients of chi_l
  std::array<cplx, 2> right;  ///< Legendre coefficients of chi_r
};

LiftingPair build_lifting(cplx kappa);

/// Stiffness (diagonal) and mass (offsets -2, 0, +2) matrices of the basis.
struct BandedOperator {
  CVec stiffness;  ///< s_kk
  CVec mass_diag;  ///< m_kk
  CVec mass_off;   ///< m_{k,k+2} = m_{k+2,k}

  [[nodiscard]] std::size_t dim() const { return stiffness.size(); }
  /// (alpha1^{-2} S + d M) x
  [[nodiscard]] CVec apply(cplx alpha1_inv_sq, cplx d_mode, std::span<const cplx> x) const;
};

BandedOperator build_operator(const BoundaryBasis& basis);

/// Banded complex LU factorization with partial pivoting.
class BandedLu {
 public:
  BandedLu(std::size_t n, std::size_t kl, std::size_t ku);

  /// Entry access before factorization; (i, j) must lie inside the band.
  cplx& at(std::size_t i, std::size_t j);

  void factor();
  void solve(std::span<cplx> rhs) const;

  [[nodiscard]] std::size_t size() const { return n_; }

 private:
  [[nodiscard]] std::size_t idx(std::size_t i, std::size_t j) const { return i * width_ + (j + kl_ - i); }

  std::size_t n_, kl_, ku_, width_;
  CVec band_;
  std::vector<std::size_t> piv_;
  bool factored_ = false;
};

/// Factorization of alpha1^{-2} S + d M for one transverse mode.
class ModeSolver {
 public:
  ModeSolver(const BandedOperator& ops, cplx alpha1, cplx d_mode);

  [[nodiscard]] CVec solve(std::span<const cplx> rhs) const;
  [[nodiscard]] std::size_t dim() const { return lu_.size(); }

 private:
  BandedLu lu_;
};

CVec solve_mode(const BandedOperator& ops, cplx alpha1, cplx d_mode, std::span<const cplx> rhs);

/// Robin history values of one mode on both walls.
struct WallPair {
  cplx left{};
  cplx right{};
};

/// Q Gamma F with F = U + lifting corrections scaled by d_mode.
CVec assemble_rhs(std::span<const cplx> u_coeffs, WallPair history, cplx d_mode, cplx alpha1,
                  const BoundaryBasis& basis, const LiftingPair& lifting);

/// Legendre coefficients of B w_hat plus the lifting of the Robin data.
CVec reconstruct_mode(std::span<const cplx> w_hat, WallPair history, cplx alpha1,
                      const BoundaryBasis& basis, const LiftingPair& lifting);

/// Values of a Legendre series at y = -1 and y = +1.
WallPair wall_traces(std::span<const cplx> coeffs);
/// Derivatives of a Legendre series at y = -1 and y = +1.
WallPair wall_derivatives(std::span<const cplx> coeffs);

/// Residuals of (d - kappa)u|_{-1} = alpha1 B_l and (d + kappa)u|_{+1} = -alpha1 B_r.
WallPair robin_residual(std::span<const cplx> coeffs, cplx kappa, cplx alpha1, WallPair history);

}  // namespace schrotbc
