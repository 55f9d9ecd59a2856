#include "schrotbc/ratapprox.hpp"

#include <algorithm>
#include <cmath>

#include "schrotbc/errors.hpp"

namespace schrotbc {

PadeTable pade_sqrt_table(int order) {
  require(order >= 1, "pade_sqrt_table: order must be >= 1");
  const double denom = 2.0 * order + 1.0;
  PadeTable t;
  t.order = order;
  t.b0 = denom;
  t.b.resize(order);
  t.eta.resize(order);
  for (int k = 1; k <= order; ++k) {
    const double eta = std::tan(k * kPi / denom);
    t.eta[k - 1] = eta;
    t.b[k - 1] = 2.0 * eta * eta * (1.0 + eta * eta) / denom;
  }
  return t;
}

cplx pade_sqrt_eval(const PadeTable& table, cplx z) {
  cplx r = table.b0;
  for (int k = 0; k < table.order; ++k) {
    const cplx den = z + table.eta[k] * table.eta[k];
    if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(z))) throw NumericalError("pade_sqrt_eval: z is a pole");
    r -= table.b[k] / den;
  }
  return r;
}

NpRobinConstants np_robin_constants(const PadeTable& table, double rho) {
  require(rho > 0.0, "np_robin_constants: rho must be positive");
  const double sr = std::sqrt(rho);
  NpRobinConstants c;
  c.rho = rho;
  c.b0_bar = table.b0 / sr;
  c.b_bar.resize(table.order);
  c.eta_bar_sq.resize(table.order);
  c.gamma.resize(table.order);
  double sum = 0.0;
  for (int k = 0; k < table.order; ++k) {
    c.b_bar[k] = table.b[k] / sr;
    c.eta_bar_sq[k] = table.eta[k] * table.eta[k] / rho;
    c.gamma[k] = -c.b_bar[k] / (1.0 + c.eta_bar_sq[k]);
    sum += c.gamma[k];
  }
  c.varpi = c.b0_bar + sum / rho;
  return c;
}

}  // namespace schrotbc
