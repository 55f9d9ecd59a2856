#pragma once

#include <vector>

#include "schrotbc/types.hpp"

namespace schrotbc {

/// Diagonal Pade approximant R_M(z) = b0 - sum_k b_k / (z + eta_k^2) of sqrt(z).
struct PadeTable {
  int order = 0;
  double b0 = 0.0;
  std::vector<double> b;
  std::vector<double> eta;
};

PadeTable pade_sqrt_table(int order);

/// Partial-fraction evaluation; throws NumericalError at a pole.
cplx pade_sqrt_eval(const PadeTable& table, cplx z);

/// Pade constants rescaled by the time-step parameter rho.
struct NpRobinConstants {
  double rho = 0.0;
  double b0_bar = 0.0;              ///< b0 / sqrt(rho)
  std::vector<double> b_bar;        ///< b_k / sqrt(rho)
  std::vector<double> eta_bar_sq;   ///< eta_k^2 / rho
  std::vector<double> gamma;        ///< -b_bar_k / (1 + eta_bar_sq_k)
  double varpi = 0.0;               ///< b0_bar + sum(gamma) / rho = R_M(rho) / sqrt(rho)
};

NpRobinConstants np_robin_constants(const PadeTable& table, double rho);

}  // namespace schrotbc
