#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "schrotbc/specfun.hpp"
#include "schrotbc/types.hpp"

namespace schrotbc {

/// Physical domain (x_l, x_r) x [-d2, d2) (x [-d3, d3) in 3D).
struct DomainSpec {
  int dim = 2;
  double x_l = -10.0;
  double x_r = 10.0;
  std::array<double, 2> d{kPi, kPi};  ///< transverse half-widths
  int beta = 1;

  void validate() const;

  [[nodiscard]] double j1() const { return 0.5 * (x_r - x_l); }
  [[nodiscard]] double center() const { return 0.5 * (x_r + x_l); }
  [[nodiscard]] double j_perp(int axis) const { return d[static_cast<std::size_t>(axis)] / kPi; }
  [[nodiscard]] double beta1() const { return 1.0 / (j1() * j1()); }
  [[nodiscard]] double beta_perp(int axis) const {
    const double j = j_perp(axis);
    return beta / (j * j);
  }
};

/// Number of LGL points along x1 and Fourier points per transverse axis.
struct GridSpec {
  int legendre_points = 64;
  std::array<int, 2> fourier{64, 64};
};

/// Legendre x transverse-Fourier coefficients, mode-major: [mode * (N+1) + p].
class CoeffField {
 public:
  CoeffField() = default;
  CoeffField(std::size_t legendre_size, std::size_t modes)
      : legendre_(legendre_size), modes_(modes), data_(legendre_size * modes) {}

  [[nodiscard]] std::size_t legendre_size() const { return legendre_; }
  [[nodiscard]] std::size_t mode_count() const { return modes_; }

  [[nodiscard]] std::span<cplx> mode(std::size_t m) { return {data_.data() + m * legendre_, legendre_}; }
  [[nodiscard]] std::span<const cplx> mode(std::size_t m) const {
    return {data_.data() + m * legendre_, legendre_};
  }

  [[nodiscard]] CVec& data() { return data_; }
  [[nodiscard]] const CVec& data() const { return data_; }

 private:
  std::size_t legendre_ = 0;
  std::size_t modes_ = 0;
  CVec data_;
};

/**
 * @brief Tensor grid of LGL nodes in x1 and equispaced nodes transversally.
 *
 * Physical samples are stored transverse-major: [t * (N+1) + i], with the
 * flattened transverse index t = j2 * N3 + j3 (N3 = 1 in 2D). Mode indices
 * follow the same flattening over ModeIndexSet positions.
 */
class SpectralGrid {
 public:
  SpectralGrid(DomainSpec domain, GridSpec spec);

  [[nodiscard]] const DomainSpec& domain() const { return domain_; }
  [[nodiscard]] const GridSpec& spec() const { return spec_; }
  [[nodiscard]] const LegendreTransform& legendre() const { return legendre_; }

  [[nodiscard]] int order() const { return legendre_.order(); }
  [[nodiscard]] std::size_t legendre_size() const { return legendre_.size(); }
  [[nodiscard]] std::size_t mode_count() const { return n2_ * n3_; }
  [[nodiscard]] std::size_t sample_count() const { return legendre_size() * mode_count(); }
  [[nodiscard]] std::array<std::size_t, 2> transverse_sizes() const { return {n2_, n3_}; }

  /// Integer Fourier indices (m2, m3) of a flattened mode; m3 = 0 in 2D.
  [[nodiscard]] std::array<int, 2> mode_index(std::size_t flat) const;
  [[nodiscard]] double x1(std::size_t i) const;
  [[nodiscard]] std::array<double, 2> x_perp(std::size_t t) const;

  [[nodiscard]] CoeffField analyze(std::span<const cplx> samples) const;
  [[nodiscard]] CVec synthesize(const CoeffField& field) const;

  /// Integral of |f|^2 over the physical domain by LGL x trapezoidal quadrature.
  [[nodiscard]] double norm_sq(std::span<const cplx> samples) const;
  /// Same integral evaluated from coefficients via the discrete norms.
  [[nodiscard]] double norm_sq(const CoeffField& field) const;

 private:
  void transverse(std::span<cplx> data, Direction dir) const;

  DomainSpec domain_;
  GridSpec spec_;
  LegendreTransform legendre_;
  std::size_t n2_, n3_;
  FourierTransform f2_, f3_;
};

}  // namespace schrotbc
