#pragma once

#include <complex>
#include <vector>

namespace schrotbc {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr cplx kImag{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;

/// One-step method underlying a time discretization.
enum class OneStep { BDF1, TR };

/// Wall of the computational domain normal to x1.
enum class Wall { Left = 0, Right = 1 };

}  // namespace schrotbc
