#include "schrotbc/grid.hpp"

#include <cmath>
#include <utility>

#include "schrotbc/errors.hpp"

namespace schrotbc {

void DomainSpec::validate() const {
  require(dim == 2 || dim == 3, "DomainSpec: dim must be 2 or 3");
  require(x_l < x_r, "DomainSpec: x_l must be smaller than x_r");
  require(d[0] > 0.0 && (dim == 2 || d[1] > 0.0), "DomainSpec: transverse half-widths must be positive");
  require(beta == 1 || beta == -1, "DomainSpec: beta must be +1 or -1");
}

namespace {

const DomainSpec& validated(const DomainSpec& d) {
  d.validate();
  return d;
}

int checked_points(const GridSpec& s) {
  require(s.legendre_points >= 3, "GridSpec: need at least 3 LGL points");
  return s.legendre_points;
}

}  // namespace

SpectralGrid::SpectralGrid(DomainSpec domain, GridSpec spec)
    : domain_(validated(domain)),
      spec_(spec),
      legendre_(lgl_grid(checked_points(spec) - 1)),
      n2_(static_cast<std::size_t>(spec.fourier[0])),
      n3_(domain.dim == 3 ? static_cast<std::size_t>(spec.fourier[1]) : 1),
      f2_(spec.fourier[0]),
      f3_(domain.dim == 3 ? spec.fourier[1] : 2) {}

std::array<int, 2> SpectralGrid::mode_index(std::size_t flat) const {
  const auto p2 = static_cast<int>(flat / n3_);
  const auto p3 = static_cast<int>(flat % n3_);
  const int m2 = p2 - static_cast<int>(n2_) / 2;
  const int m3 = domain_.dim == 3 ? p3 - static_cast<int>(n3_) / 2 : 0;
  return {m2, m3};
}

double SpectralGrid::x1(std::size_t i) const {
  return domain_.j1() * legendre_.grid().nodes[i] + domain_.center();
}

std::array<double, 2> SpectralGrid::x_perp(std::size_t t) const {
  const std::size_t j2 = t / n3_;
  const std::size_t j3 = t % n3_;
  const double y2 = -kPi + 2.0 * kPi * static_cast<double>(j2) / static_cast<double>(n2_);
  const double y3 = -kPi + 2.0 * kPi * static_cast<double>(j3) / static_cast<double>(n3_);
  return {domain_.j_perp(0) * y2, domain_.dim == 3 ? domain_.j_perp(1) * y3 : 0.0};
}

void SpectralGrid::transverse(std::span<cplx> data, Direction dir) const {
  // data holds one value per flattened transverse index.
  if (domain_.dim == 3) {
    CVec line(n3_), out(n3_);
    for (std::size_t j2 = 0; j2 < n2_; ++j2) {
      std::span<cplx> row = data.subspan(j2 * n3_, n3_);
      std::copy(row.begin(), row.end(), line.begin());
      if (dir == Direction::Analysis) {
        f3_.analysis(line, out);
      } else {
        f3_.synthesis(line, out);
      }
      std::copy(out.begin(), out.end(), row.begin());
    }
  }
  CVec line(n2_), out(n2_);
  for (std::size_t j3 = 0; j3 < n3_; ++j3) {
    for (std::size_t j2 = 0; j2 < n2_; ++j2) line[j2] = data[j2 * n3_ + j3];
    if (dir == Direction::Analysis) {
      f2_.analysis(line, out);
    } else {
      f2_.synthesis(line, out);
    }
    for (std::size_t j2 = 0; j2 < n2_; ++j2) data[j2 * n3_ + j3] = out[j2];
  }
}

CoeffField SpectralGrid::analyze(std::span<const cplx> samples) const {
  require(samples.size() == sample_count(), "SpectralGrid::analyze: sample count mismatch");
  const std::size_t np = legendre_size();
  const std::size_t nt = mode_count();
  // Transverse analysis per LGL node, then Legendre analysis per mode.
  CVec work(samples.size());
  CVec line(nt);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t t = 0; t < nt; ++t) line[t] = samples[t * np + i];
    transverse(line, Direction::Analysis);
    for (std::size_t t = 0; t < nt; ++t) work[t * np + i] = line[t];
  }
  CoeffField field(np, nt);
  for (std::size_t m = 0; m < nt; ++m) {
    legendre_.analysis(std::span<const cplx>(work).subspan(m * np, np), field.mode(m));
  }
  return field;
}

CVec SpectralGrid::synthesize(const CoeffField& field) const {
  require(field.legendre_size() == legendre_size() && field.mode_count() == mode_count(),
          "SpectralGrid::synthesize: field shape mismatch");
  const std::size_t np = legendre_size();
  const std::size_t nt = mode_count();
  CVec work(sample_count());
  for (std::size_t m = 0; m < nt; ++m) {
    legendre_.synthesis(field.mode(m), std::span<cplx>(work).subspan(m * np, np));
  }
  CVec line(nt);
  for (std::size_t i = 0; i < np; ++i) {
    for (std::size_t t = 0; t < nt; ++t) line[t] = work[t * np + i];
    transverse(line, Direction::Synthesis);
    for (std::size_t t = 0; t < nt; ++t) work[t * np + i] = line[t];
  }
  return work;
}

double SpectralGrid::norm_sq(std::span<const cplx> samples) const {
  require(samples.size() == sample_count(), "SpectralGrid::norm_sq: sample count mismatch");
  const std::size_t np = legendre_size();
  const auto& w = legendre_.grid().weights;
  double acc = 0.0;
  for (std::size_t t = 0; t < mode_count(); ++t) {
    for (std::size_t i = 0; i < np; ++i) acc += w[i] * std::norm(samples[t * np + i]);
  }
  double scale = domain_.j1() * domain_.j_perp(0) * 2.0 * kPi / static_cast<double>(n2_);
  if (domain_.dim == 3) scale *= domain_.j_perp(1) * 2.0 * kPi / static_cast<double>(n3_);
  return acc * scale;
}

double SpectralGrid::norm_sq(const CoeffField& field) const {
  require(field.legendre_size() == legendre_size() && field.mode_count() == mode_count(),
          "SpectralGrid::norm_sq: field shape mismatch");
  const std::size_t np = legendre_size();
  const int n = order();
  double acc = 0.0;
  for (std::size_t m = 0; m < mode_count(); ++m) {
    const auto c = field.mode(m);
    for (std::size_t p = 0; p < np; ++p) {
      const double g = static_cast<int>(p) == n ? 2.0 / n : 2.0 / (2.0 * static_cast<double>(p) + 1.0);
      acc += g * std::norm(c[p]);
    }
  }
  double scale = domain_.j1() * domain_.j_perp(0) * 2.0 * kPi;
  if (domain_.dim == 3) scale *= domain_.j_perp(1) * 2.0 * kPi;
  return acc * scale;
}

}  // namespace schrotbc
