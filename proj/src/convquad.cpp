#include "schrotbc/convquad.hpp"

#include "schrotbc/errors.hpp"

namespace schrotbc {

CqTable cq_weights(OneStep method, double nu, std::size_t count) {
  CqTable t{method, nu, std::vector<double>(count + 1, 0.0)};
  auto& w = t.weights;
  w[0] = 1.0;
  if (method == OneStep::BDF1) {
    for (std::size_t k = 1; k <= count; ++k) {
      const auto kd = static_cast<double>(k);
      w[k] = (kd - 1.0 - nu) / kd * w[k - 1];
    }
  } else {
    if (count >= 1) w[1] = -2.0 * nu;
    for (std::size_t k = 1; k < count; ++k) {
      const auto kd = static_cast<double>(k);
      w[k + 1] = ((kd - 1.0) * w[k - 1] - 2.0 * nu * w[k]) / (kd + 1.0);
    }
  }
  return t;
}

CVec history_sum(const CqTable& table, std::span<const CVec> slices) {
  require(!slices.empty(), "history_sum: no slices");
  const std::size_t terms = slices.size();  // j + 1
  require(table.weights.size() > terms, "history_sum: weight table too short");
  const std::size_t len = slices.front().size();
  CVec out(len);
  for (std::size_t k = 1; k <= terms; ++k) {
    const CVec& s = slices[terms - k];
    require(s.size() == len, "history_sum: slice length mismatch");
    const double w = table.weights[k];
    for (std::size_t i = 0; i < len; ++i) out[i] += w * s[i];
  }
  return out;
}

}  // namespace schrotbc
