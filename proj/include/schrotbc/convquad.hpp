#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "schrotbc/types.hpp"

namespace schrotbc {

/// Convolution-quadrature weights of d_t^nu for a one-step method.
struct CqTable {
  OneStep method = OneStep::BDF1;
  double nu = 0.5;
  std::vector<double> weights;  ///< omega_0 .. omega_n
};

/// Weights omega_0..omega_count (count+1 values).
CqTable cq_weights(OneStep method, double nu, std::size_t count);

/**
 * @brief History part of a CQ sum: sum_{k=1}^{j+1} omega_k * slices[j+1-k].
 *
 * @p slices holds j+1 arrays of equal length (indices 0..j).
 */
CVec history_sum(const CqTable& table, std::span<const CVec> slices);

}  // namespace schrotbc
