#pragma once

// Brute-force Legendre-series helpers used as independent oracles in tests.

#include <cstddef>
#include <span>

#include "schrotbc/specfun.hpp"
#include "schrotbc/types.hpp"

namespace oracle {

using schrotbc::CVec;
using schrotbc::cplx;

/// Coefficients of d/dy of a Legendre series, by the O(N^2) parity sum.
inline CVec derivative(std::span<const cplx> c) {
  CVec d(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    for (std::size_t p = k + 1; p < c.size(); p += 2) d[k] += (2.0 * k + 1.0) * c[p];
  }
  return d;
}

inline cplx evaluate(std::span<const cplx> c, double y) {
  cplx s{};
  for (std::size_t p = 0; p < c.size(); ++p) s += c[p] * schrotbc::legendre_eval(static_cast<int>(p), y).value;
  return s;
}

/// Unconjugated integral of f g over [-1, 1], exact for polynomial degree <= 2 * order - 1.
inline cplx integrate(std::span<const cplx> f, std::span<const cplx> g, int order) {
  const auto q = schrotbc::lgl_grid(order);
  cplx s{};
  for (std::size_t j = 0; j < q.size(); ++j) s += q.weights[j] * evaluate(f, q.nodes[j]) * evaluate(g, q.nodes[j]);
  return s;
}

/// phi_k = L_k + b_k L_{k+2} as a Legendre coefficient vector of length n.
inline CVec basis_function(std::size_t k, cplx b, std::size_t n) {
  CVec v(n);
  v[k] = 1.0;
  v[k + 2] = b;
  return v;
}

}  // namespace oracle
