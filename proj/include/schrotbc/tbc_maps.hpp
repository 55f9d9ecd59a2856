#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "schrotbc/convquad.hpp"
#include "schrotbc/ratapprox.hpp"
#include "schrotbc/types.hpp"

namespace schrotbc {

enum class BoundaryFamily { CQ, NP, CP, HF };

/// Per-wall arrays over the flattened transverse modes.
using WallArrays = std::array<CVec, 2>;

inline CVec& on(WallArrays& w, Wall side) { return w[static_cast<std::size_t>(side)]; }
inline const CVec& on(const WallArrays& w, Wall side) { return w[static_cast<std::size_t>(side)]; }

/// Quantities shared by every boundary map of one simulation.
struct BoundaryContext {
  OneStep method = OneStep::BDF1;
  double rho = 0.0;   ///< 1/dt for BDF1, 2/dt for TR
  cplx alpha1{};      ///< sqrt(rho / beta1) exp(-i pi/4)
  CVec transverse;    ///< a_m = alpha2^{-2} m2^2 (+ alpha3^{-2} m3^2) per mode

  [[nodiscard]] std::size_t modes() const { return transverse.size(); }
};

/// Robin data for one step: (d -+ kappa_m) u = +-alpha1 B_m on the left/right wall.
struct RobinData {
  CVec kappa;          ///< per mode
  WallArrays history;  ///< B_m per wall
  bool staggered = false;
};

/// Wall traces of a freshly solved step; v is only used by TR maps.
struct StepTraces {
  WallArrays u;
  WallArrays v;
};

/**
 * @brief Discrete Robin boundary map with a two-phase step protocol.
 *
 * emit() produces the Robin data for step j -> j+1 from the state at j;
 * commit() then advances the auxiliary state with the traces at j+1.
 */
class BoundaryMap {
 public:
  virtual ~BoundaryMap() = default;
  BoundaryMap(const BoundaryMap&) = delete;
  BoundaryMap& operator=(const BoundaryMap&) = delete;

  RobinData emit();
  void commit(const StepTraces& traces);

  [[nodiscard]] std::size_t step() const { return step_; }
  [[nodiscard]] const CVec& kappa() const { return kappa_; }
  [[nodiscard]] const BoundaryContext& context() const { return ctx_; }

 protected:
  explicit BoundaryMap(BoundaryContext ctx);

  virtual WallArrays history() = 0;
  virtual void advance(const StepTraces& traces) = 0;

  BoundaryContext ctx_;
  CVec kappa_;

 private:
  std::size_t step_ = 0;
  bool pending_ = false;
};

/// Convolution quadrature of the exact DtN map with tau2-propagated slices.
class CqMap final : public BoundaryMap {
 public:
  CqMap(BoundaryContext ctx, const WallArrays& initial_u, std::size_t capacity);

  [[nodiscard]] std::size_t slice_count() const { return slices_[0].size(); }

 private:
  WallArrays history() override;
  void advance(const StepTraces& traces) override;

  std::array<std::vector<CVec>, 2> slices_;
  CVec multiplier_;
  CqTable weights_;
  WallArrays previous_;
};

/// Novel Pade map: M auxiliary fields per wall following transverse propagation.
class NpMap final : public BoundaryMap {
 public:
  NpMap(BoundaryContext ctx, const PadeTable& table, const WallArrays& initial_u);

  [[nodiscard]] const NpRobinConstants& constants() const { return c_; }
  /// phi_k for mode m on one wall.
  [[nodiscard]] cplx aux(Wall side, std::size_t mode, std::size_t k) const;

 private:
  WallArrays history() override;
  void advance(const StepTraces& traces) override;

  NpRobinConstants c_;
  std::size_t m_;
  WallArrays phi_;     // [mode * M + k]
  WallArrays u_last_;  // u^j traces
  CVec inv1a_;         // 1 / (1 + a_m)
};

/// Conventional Pade map with mode-dependent Robin coefficients.
class CpMap final : public BoundaryMap {
 public:
  CpMap(BoundaryContext ctx, const PadeTable& table);

  [[nodiscard]] cplx aux(Wall side, std::size_t mode, std::size_t k) const;

 private:
  WallArrays history() override;
  void advance(const StepTraces& traces) override;

  NpRobinConstants c_;
  std::size_t m_;
  WallArrays phi_;  // [mode * M + k]
  CVec gamma_;      // Gamma_{k,m} at [mode * M + k]
  CVec denom_;      // 1 + a_m + eta_bar_k^2 at [mode * M + k]
};

/// High-frequency map: CQ sums of orders +1/2 and -1/2 over stored traces.
class HfMap final : public BoundaryMap {
 public:
  HfMap(BoundaryContext ctx, const WallArrays& initial_u, std::size_t capacity);

 private:
  WallArrays history() override;
  void advance(const StepTraces& traces) override;

  std::array<std::vector<CVec>, 2> traces_;
  CqTable half_;
  CqTable neg_half_;
};

/// alpha_j^{-2} = i beta_j / rho, independent of the square-root branch.
inline cplx alpha_inv_sq(double beta_j, double rho) { return kImag * beta_j / rho; }

std::unique_ptr<BoundaryMap> make_boundary_map(BoundaryFamily family, int pade_order,
                                               const BoundaryContext& ctx,
                                               const WallArrays& initial_u, std::size_t capacity);

}  // namespace schrotbc
