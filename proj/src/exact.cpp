#include "schrotbc/exact.hpp"

#include <cmath>

#include "schrotbc/errors.hpp"
#include "schrotbc/specfun.hpp"

namespace schrotbc {

cplx chirped_gaussian(double x, double t, double a, double b) {
  const cplx ab{a, b};
  const cplx den = 1.0 + 4.0 * kImag * ab * t;
  return std::exp(-ab * x * x / den) / std::sqrt(den);
}

cplx hermite_gaussian(int m, double x, double t, double a) {
  const double w = std::sqrt(1.0 + 16.0 * a * a * t * t);
  const double theta = std::atan2(4.0 * a * t, 1.0);
  const cplx mu = 1.0 / (1.0 / a + 4.0 * kImag * t);
  const double log_gamma_sq = m * std::log(2.0) + std::lgamma(m + 1.0) + 0.5 * std::log(kPi) -
                              0.5 * std::log(2.0 * a);
  const double h = hermite_eval(m, std::sqrt(2.0 * a) * x / w);
  return std::exp(-0.5 * log_gamma_sq) * h * std::sqrt(mu / a) *
         std::exp(-mu * x * x - kImag * (m * theta));
}

namespace {

// Longitudinal factor of one term: envelope times carrier.
cplx longitudinal(const ProfileSpec& spec, const ProfileTerm& term, double x1, double t) {
  const double c = spec.speed(term);
  const double xi = x1 - c * t;
  const cplx env = spec.family == ProfileFamily::FCG ? chirped_gaussian(xi, t, term.a, term.b)
                                                     : hermite_gaussian(term.order, xi, t, term.a);
  return env * std::exp(kImag * (0.5 * c * x1 - 0.25 * c * c * t));
}

cplx transverse(const ProfileSpec& spec, const ProfileTerm& term, double x2, double x3, double t) {
  const double z2 = spec.zeta(term, 0);
  double phase = z2 * x2 - z2 * z2 * t;
  if (spec.dim == 3) {
    const double z3 = spec.zeta(term, 1);
    phase += z3 * x3 - z3 * z3 * t;
  }
  return std::polar(1.0, phase);
}

cplx superpose(const ProfileSpec& spec, const std::array<double, 3>& x, double t) {
  cplx acc{};
  for (const auto& term : spec.terms) {
    acc += longitudinal(spec, term, x[0], t) * transverse(spec, term, x[1], x[2], t);
  }
  return spec.amplitude * acc;
}

}  // namespace

cplx fcg_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t) {
  require(spec.family == ProfileFamily::FCG, "fcg_eval: profile is not FCG");
  return superpose(spec, x, t);
}

cplx fhg_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t) {
  require(spec.family == ProfileFamily::FHG, "fhg_eval: profile is not FHG");
  return superpose(spec, x, t);
}

cplx profile_eval(const ProfileSpec& spec, const std::array<double, 3>& x, double t) {
  return superpose(spec, x, t);
}

ProfileSpec profile_preset(ProfileFamily family, int type, double c0, int dim, std::array<double, 2> d) {
  require(type == 1 || type == 2, "profile_preset: type must be I or II");
  require(dim == 2 || dim == 3, "profile_preset: dim must be 2 or 3");
  require(std::isfinite(c0), "profile_preset: c0 must be finite");
  static constexpr std::array<double, 4> widths{2.5, 2.3, 2.2, 2.4};
  static constexpr std::array<int, 4> signs{+1, -1, +1, -1};
  static constexpr std::array<int, 4> ks{+2, -2, +4, -4};
  static constexpr std::array<int, 4> orders{1, 2, 1, 2};
  ProfileSpec spec;
  spec.family = family;
  spec.amplitude = 2.0;
  spec.c0 = c0;
  spec.dim = dim;
  spec.d = d;
  const int n = type == 1 ? 2 : 4;
  for (int j = 0; j < n; ++j) {
    ProfileTerm term;
    term.a = 1.0 / widths[j];
    term.b = family == ProfileFamily::FCG ? 0.5 : 0.0;
    term.order = family == ProfileFamily::FHG ? orders[j] : 0;
    term.sign = signs[j];
    term.k = ks[j];
    spec.terms.push_back(term);
  }
  return spec;
}

CVec sample_profile(const ProfileSpec& spec, const SpectralGrid& grid, double t) {
  const std::size_t np = grid.legendre_size();
  const std::size_t nt = grid.mode_count();
  CVec out(grid.sample_count());
  CVec along(np), across(nt);
  for (const auto& term : spec.terms) {
    for (std::size_t i = 0; i < np; ++i) along[i] = spec.amplitude * longitudinal(spec, term, grid.x1(i), t);
    for (std::size_t s = 0; s < nt; ++s) {
      const auto xp = grid.x_perp(s);
      across[s] = transverse(spec, term, xp[0], xp[1], t);
    }
    for (std::size_t s = 0; s < nt; ++s) {
      for (std::size_t i = 0; i < np; ++i) out[s * np + i] += along[i] * across[s];
    }
  }
  return out;
}

double energy_content(const SpectralGrid& grid, std::span<const cplx> samples_t,
                      std::span<const cplx> samples_0) {
  const double den = grid.norm_sq(samples_0);
  require(den > 0.0, "energy_content: zero reference energy");
  return grid.norm_sq(samples_t) / den;
}

double energy_content(const ProfileSpec& spec, const SpectralGrid& grid, double t) {
  return energy_content(grid, sample_profile(spec, grid, t), sample_profile(spec, grid, 0.0));
}

}  // namespace schrotbc
