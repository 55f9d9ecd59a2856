#include "schrotbc/specfun.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <string>
#include <utility>

#include "schrotbc/errors.hpp"

namespace schrotbc {

LegendreValue legendre_eval(int n, double y) {
  require(n >= 0, "legendre_eval: negative degree");
  if (n == 0) return {1.0, 0.0};
  double p_prev = 1.0, p = y;
  double d_prev = 0.0, d = 1.0;
  for (int k = 1; k < n; ++k) {
    const double p_next = ((2.0 * k + 1.0) * y * p - k * p_prev) / (k + 1.0);
    const double d_next = d_prev + (2.0 * k + 1.0) * p;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {p, d};
}

LglGrid lgl_grid(int order) {
  require(order >= 1, "lgl_grid: order must be >= 1");
  const int n = order;
  const double nn1 = n * (n + 1.0);
  LglGrid g;
  g.order = n;
  g.nodes.assign(n + 1, 0.0);
  g.weights.assign(n + 1, 0.0);
  g.nodes[0] = -1.0;
  g.nodes[n] = 1.0;

  // Interior roots of L_N' in the left half; the right half is mirrored.
  for (int j = 1; j <= n / 2; ++j) {
    if (2 * j == n) break;  // centre node of even orders is exactly zero
    double x = -std::cos(kPi * j / n);
    bool converged = false;
    for (int it = 0; it < 100; ++it) {
      const auto [l, dl] = legendre_eval(n, x);
      const double d2l = (2.0 * x * dl - nn1 * l) / (1.0 - x * x);
      const double dx = dl / d2l;
      x -= dx;
      if (std::abs(dx) <= 1e-15) {
        converged = true;
        break;
      }
    }
    const double resid = (1.0 - x * x) * legendre_eval(n, x).derivative;
    // The residual of a correctly rounded root scales with N(N+1).
    if (!converged || std::abs(resid) > 1e-14 * std::max(1.0, nn1)) {
      throw NumericalError("lgl_grid: Newton iteration did not converge for node " +
                           std::to_string(j) + " of order " + std::to_string(n));
    }
    g.nodes[j] = x;
    g.nodes[n - j] = -x;
  }
  for (int j = 0; j <= n; ++j) {
    const double l = legendre_eval(n, g.nodes[j]).value;
    g.weights[j] = 2.0 / (nn1 * l * l);
  }
  return g;
}

ModeIndexSet::ModeIndexSet(int size) : size_(size) {
  require(size > 0 && size % 2 == 0, "ModeIndexSet: size must be positive and even");
}

LegendreTransform::LegendreTransform(LglGrid grid) : grid_(std::move(grid)) {
  const std::size_t np = grid_.size();
  const int n = grid_.order;
  vandermonde_.resize(np * np);
  analysis_.resize(np * np);
  for (std::size_t j = 0; j < np; ++j) {
    const double x = grid_.nodes[j];
    double p_prev = 1.0, p = x;
    for (std::size_t k = 0; k < np; ++k) {
      double value;
      if (k == 0) {
        value = 1.0;
      } else if (k == 1) {
        value = x;
      } else {
        const double km = static_cast<double>(k - 1);
        value = ((2.0 * km + 1.0) * x * p - km * p_prev) / (km + 1.0);
        p_prev = p;
        p = value;
      }
      vandermonde_[j * np + k] = value;
    }
  }
  for (std::size_t k = 0; k < np; ++k) {
    const double norm =
        static_cast<int>(k) == n ? 2.0 / n : 2.0 / (2.0 * static_cast<double>(k) + 1.0);
    for (std::size_t j = 0; j < np; ++j) {
      analysis_[k * np + j] = grid_.weights[j] * vandermonde_[j * np + k] / norm;
    }
  }
}

void LegendreTransform::analysis(std::span<const cplx> samples, std::span<cplx> coeffs) const {
  const std::size_t np = size();
  require(samples.size() == np && coeffs.size() == np,
          "LegendreTransform::analysis: length mismatch");
  for (std::size_t k = 0; k < np; ++k) {
    const double* row = &analysis_[k * np];
    cplx acc{};
    for (std::size_t j = 0; j < np; ++j) acc += row[j] * samples[j];
    coeffs[k] = acc;
  }
}

void LegendreTransform::synthesis(std::span<const cplx> coeffs, std::span<cplx> samples) const {
  const std::size_t np = size();
  require(samples.size() == np && coeffs.size() == np,
          "LegendreTransform::synthesis: length mismatch");
  for (std::size_t j = 0; j < np; ++j) {
    const double* row = &vandermonde_[j * np];
    cplx acc{};
    for (std::size_t k = 0; k < np; ++k) acc += row[k] * coeffs[k];
    samples[j] = acc;
  }
}

CVec LegendreTransform::apply(Direction dir, std::span<const cplx> data) const {
  CVec out(size());
  if (dir == Direction::Analysis) {
    analysis(data, out);
  } else {
    synthesis(data, out);
  }
  return out;
}

CVec direct_dft(std::span<const cplx> data, int sign) {
  const std::size_t n = data.size();
  CVec out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      const double arg = sign * 2.0 * kPi * static_cast<double>((j * k) % n) / n;
      acc += data[j] * cplx(std::cos(arg), std::sin(arg));
    }
    out[k] = acc;
  }
  return out;
}

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void FourierTransform::PlanDeleter::operator()(fftw_plan_s* plan) const {
  const std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

FourierTransform::FourierTransform(int size) : size_(size) {
  require(size > 0 && size % 2 == 0, "FourierTransform: size must be positive and even");
  CVec scratch(static_cast<std::size_t>(size));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  const std::lock_guard lock(fftw_planner_mutex());
  forward_.reset(fftw_plan_dft_1d(size, buf, buf, FFTW_FORWARD, flags), PlanDeleter{});
  backward_.reset(fftw_plan_dft_1d(size, buf, buf, FFTW_BACKWARD, flags), PlanDeleter{});
  if (!forward_ || !backward_) throw NumericalError("FourierTransform: FFTW planning failed");
}

void FourierTransform::transform(std::span<cplx> data, int sign) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(sign < 0 ? forward_.get() : backward_.get(), buf, buf);
}

void FourierTransform::analysis(std::span<const cplx> samples, std::span<cplx> coeffs) const {
  const auto n = static_cast<std::size_t>(size_);
  require(samples.size() == n && coeffs.size() == n,
          "FourierTransform::analysis: length mismatch");
  CVec work(samples.begin(), samples.end());
  transform(work, -1);
  // exp(-i q y_j) = (-1)^q exp(-2 pi i q j / N)
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const int q = static_cast<int>(pos) - size_ / 2;
    const std::size_t k = static_cast<std::size_t>((q + size_) % size_);
    coeffs[pos] = ((q % 2 == 0) ? scale : -scale) * work[k];
  }
}

void FourierTransform::synthesis(std::span<const cplx> coeffs, std::span<cplx> samples) const {
  const auto n = static_cast<std::size_t>(size_);
  require(samples.size() == n && coeffs.size() == n,
          "FourierTransform::synthesis: length mismatch");
  for (std::size_t pos = 0; pos < n; ++pos) {
    const int q = static_cast<int>(pos) - size_ / 2;
    const std::size_t k = static_cast<std::size_t>((q + size_) % size_);
    samples[k] = (q % 2 == 0) ? coeffs[pos] : -coeffs[pos];
  }
  transform(samples, +1);
}

CVec FourierTransform::apply(Direction dir, std::span<const cplx> data) const {
  CVec out(static_cast<std::size_t>(size_));
  if (dir == Direction::Analysis) {
    analysis(data, out);
  } else {
    synthesis(data, out);
  }
  return out;
}

double hermite_eval(int n, double x) {
  require(n >= 0, "hermite_eval: negative degree");
  if (n == 0) return 1.0;
  double h_prev = 1.0, h = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h_next = 2.0 * x * h - 2.0 * k * h_prev;
    h_prev = h;
    h = h_next;
  }
  return h;
}

}  // namespace schrotbc
