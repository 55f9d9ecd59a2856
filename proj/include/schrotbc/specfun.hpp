#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "schrotbc/types.hpp"

struct fftw_plan_s;

namespace schrotbc {

struct LegendreValue {
  double value;
  double derivative;
};

/// L_n(y) and L_n'(y) by the Bonnet recurrence.
LegendreValue legendre_eval(int n, double y);

/// Legendre-Gauss-Lobatto nodes and weights on [-1, 1].
struct LglGrid {
  int order = 0;  ///< N; the grid has N+1 points
  std::vector<double> nodes;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return nodes.size(); }
};

/**
 * @brief Builds the LGL grid of order N (N+1 points).
 *
 * Interior nodes are the roots of L_N', found by Newton iteration from
 * Chebyshev-Lobatto guesses. Throws NumericalError if Newton stalls.
 */
LglGrid lgl_grid(int order);

/// Fourier index set {-N/2, ..., N/2-1} stored by position 0..N-1.
class ModeIndexSet {
 public:
  explicit ModeIndexSet(int size);

  [[nodiscard]] int size() const { return size_; }
  [[nodiscard]] int index(int position) const { return position - size_ / 2; }
  [[nodiscard]] int position(int index) const { return index + size_ / 2; }
  [[nodiscard]] bool contains(int index) const {
    return index >= -size_ / 2 && index < size_ / 2;
  }

 private:
  int size_;
};

enum class Direction { Analysis, Synthesis };

/// Discrete Legendre transform between LGL samples and Legendre coefficients.
class LegendreTransform {
 public:
  explicit LegendreTransform(LglGrid grid);

  [[nodiscard]] const LglGrid& grid() const { return grid_; }
  [[nodiscard]] int order() const { return grid_.order; }
  [[nodiscard]] std::size_t size() const { return grid_.size(); }

  void analysis(std::span<const cplx> samples, std::span<cplx> coeffs) const;
  void synthesis(std::span<const cplx> coeffs, std::span<cplx> samples) const;
  [[nodiscard]] CVec apply(Direction dir, std::span<const cplx> data) const;

 private:
  LglGrid grid_;
  std::vector<double> vandermonde_;  // L_p(x_j) at [j * (N+1) + p]
  std::vector<double> analysis_;     // w_j L_p(x_j) / gamma_p at [p * (N+1) + j]
};

/**
 * @brief Discrete Fourier transform on y_j = -pi + 2 pi j / N.
 *
 * Coefficients are ordered by ModeIndexSet position. Transforms run through
 * FFTW plans shared between copies; executing them is thread-safe.
 */
class FourierTransform {
 public:
  explicit FourierTransform(int size);

  [[nodiscard]] int size() const { return size_; }

  void analysis(std::span<const cplx> samples, std::span<cplx> coeffs) const;
  void synthesis(std::span<const cplx> coeffs, std::span<cplx> samples) const;
  [[nodiscard]] CVec apply(Direction dir, std::span<const cplx> data) const;

 private:
  // Unnormalized DFT with kernel exp(sign * 2 pi i j k / N), in place.
  void transform(std::span<cplx> data, int sign) const;

  struct PlanDeleter {
    void operator()(fftw_plan_s* plan) const;
  };

  int size_;
  std::shared_ptr<fftw_plan_s> forward_, backward_;
};

/// Direct O(N^2) DFT, kept as a reference.
CVec direct_dft(std::span<const cplx> data, int sign);

/// Physicists' Hermite polynomial H_n(x).
double hermite_eval(int n, double x);

}  // namespace schrotbc
