#pragma once

#include <array>
#include <span>
#include <vector>

#include "schrotbc/grid.hpp"
#include "schrotbc/types.hpp"

namespace schrotbc {

enum class ProfileFamily { FCG, FHG };

struct ProfileTerm {
  double a = 0.4;   ///< envelope width parameter, > 0
  double b = 0.0;   ///< chirp (FCG)
  int order = 0;    ///< Hermite order (FHG)
  int sign = 1;     ///< direction of travel
  int k = 0;        ///< transverse wavenumber in units of pi/d
};

/// Superposition A0 * sum_j G_j of travelling wave packets.
struct ProfileSpec {
  ProfileFamily family = ProfileFamily::FCG;
  std::vector<ProfileTerm> terms;
  double amplitude = 2.0;
  double c0 = 4.0;
  int dim = 2;
  std::array<double, 2> d{kPi, kPi};  ///< transverse half-widths

  [[nodiscard]] double speed(const ProfileTerm& t) const { return t.sign * c0; }
  [[nodiscard]] double zeta(const ProfileTerm& t, int axis) const {
    return kPi / d[static_cast<std::size_t>(axis)] * t.k;
  }
};

/// Chirped Gaussian kernel with initial profile exp(-(a+ib)x^2).
cplx chirped_gaussian(double x, double t, double a, double b);
/// Normalized Hermite-Gaussian kernel of order m.
cplx hermite_gaussian(int m, double x, double t, double a);

cplx fcg_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t);
cplx fhg_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t);
/// Dispatches on spec.family.
cplx profile_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t);

/// Presets of types I and II with A0 = 2; 3D presets share zeta on both axes.
ProfileSpec profile_preset(ProfileFamily family, int type, double c0, int dim,
                           std::array<double, 2> d = {kPi, kPi});

/// Samples on the grid layout of SpectralGrid, using the separable term structure.
CVec sample_profile(const ProfileSpec& spec, const SpectralGrid& grid, double t);

/// Ratio of integral |G(t)|^2 to integral |G(0)|^2 over the computational domain.
double energy_content(const ProfileSpec& spec, const SpectralGrid& grid, double t);
double energy_content(const SpectralGrid& grid, std::span<const cplx> samples_t,
                      std::span<const cplx> samples_0);

}  // namespace schrotbc
