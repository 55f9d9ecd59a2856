#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "schrotbc/galerkin.hpp"
#include "schrotbc/grid.hpp"
#include "schrotbc/tbc_maps.hpp"
#include "schrotbc/types.hpp"

namespace schrotbc {

/// Uniform time grid with nt samples on [0, tmax].
struct TimeGrid {
  double tmax = 5.0;
  int nt = 1025;

  void validate() const;
  [[nodiscard]] double dt() const { return tmax / (nt - 1); }
  [[nodiscard]] double rho(OneStep method) const { return (method == OneStep::BDF1 ? 1.0 : 2.0) / dt(); }
  [[nodiscard]] double time(std::size_t j) const { return static_cast<double>(j) * dt(); }
};

struct SchemeSpec {
  BoundaryFamily family = BoundaryFamily::NP;
  OneStep method = OneStep::TR;
  int pade_order = 50;  ///< used by NP and CP only
};

/// Short label such as "CQ-TR" or "NP50-BDF1".
std::string scheme_label(const SchemeSpec& scheme);

/**
 * @brief Time stepper for one initial-boundary value problem.
 *
 * Holds u^j as Legendre x Fourier coefficients. TR steps solve for the
 * staggered field v^{j+1} = (u^{j+1} + u^j)/2 and reconstruct u^{j+1}.
 */
class Simulation {
 public:
  Simulation(SpectralGrid grid, TimeGrid time, SchemeSpec scheme, CoeffField u0);

  /// Advance one step; throws InstabilityError if the field blows up.
  void step();

  [[nodiscard]] std::size_t step_index() const { return j_; }
  [[nodiscard]] double time() const { return time_.time(j_); }
  [[nodiscard]] const SpectralGrid& grid() const { return grid_; }
  [[nodiscard]] const TimeGrid& time_grid() const { return time_; }
  [[nodiscard]] const SchemeSpec& scheme() const { return scheme_; }
  [[nodiscard]] const CoeffField& field() const { return u_; }
  /// Last solved staggered field (TR); zero before the first step.
  [[nodiscard]] const CoeffField& staggered() const { return v_; }
  [[nodiscard]] const BoundaryMap& boundary() const { return *bc_; }
  [[nodiscard]] cplx alpha1() const { return alpha1_; }

  /// Largest wall Robin residual of the last step over the largest per-mode coefficient norm.
  [[nodiscard]] double robin_residual() const { return robin_residual_; }
  [[nodiscard]] double initial_norm() const { return norm0_; }

 private:
  struct ModeData {
    BoundaryBasis basis;
    LiftingPair lifting;
    ModeSolver solver;
    cplx d;
  };

  SpectralGrid grid_;
  TimeGrid time_;
  SchemeSpec scheme_;
  cplx alpha1_;
  std::unique_ptr<BoundaryMap> bc_;
  std::vector<ModeData> modes_;
  CoeffField u_;
  CoeffField v_;
  std::size_t j_ = 0;
  double norm0_ = 0.0;
  double robin_residual_ = 0.0;
};

/// Boundary context (rho, alpha1, transverse factors) for a grid and scheme.
BoundaryContext make_boundary_context(const SpectralGrid& grid, const TimeGrid& time, OneStep method);

using Evaluator = std::function<cplx(const std::array<double, 3>& x)>;

struct InitialProjection {
  CoeffField field;
  double wall_trace = 0.0;  ///< max |u0| on the two walls
  double norm = 0.0;        ///< L2 norm of u0
  bool wall_warning = false;
};

/// Sample u0 on the grid and project onto Legendre x Fourier coefficients.
InitialProjection project_initial(const SpectralGrid& grid, std::span<const cplx> samples);
InitialProjection project_initial(const SpectralGrid& grid, const Evaluator& u0);

}  // namespace schrotbc
