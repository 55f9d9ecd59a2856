#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "legendre_oracle.hpp"
#include "schrotbc/errors.hpp"
#include "schrotbc/galerkin.hpp"

using namespace schrotbc;

namespace {

CVec random_vector(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  CVec v(n);
  for (auto& z : v) z = {dist(gen), dist(gen)};
  return v;
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// A typical complex Robin coefficient alpha1 * varpi with varpi near 1.
const cplx kAlpha1 = std::sqrt(2.0 * 1024 / 5.0 * 100.0) * std::polar(1.0, -kPi / 4.0);

}  // namespace

TEST_CASE("basis coefficients") {
  CHECK(std::abs(build_basis(1.0, 6).b[0] - (-0.25)) <= 1e-15);
  CHECK(std::abs(build_basis(0.0, 6).b[0]) == 0.0);
  const auto ops = build_operator(build_basis(1.0, 6));
  CHECK(std::abs(ops.stiffness[0] - 1.5) <= 1e-15);
  CHECK(build_basis(1.0, 6).dim() == 5);
  CHECK_THROWS_AS(build_basis(-3.0, 6), NumericalError);
  CHECK_THROWS_AS(build_basis(1.0, 1), ContractViolation);
}

TEST_CASE("basis functions satisfy homogeneous Robin conditions") {
  for (cplx kappa : {cplx(1.0), cplx(0.3, -2.0), kAlpha1}) {
    const auto basis = build_basis(kappa, 12);
    for (std::size_t k = 0; k < basis.dim(); ++k) {
      const CVec phi = oracle::basis_function(k, basis.b[k], basis.legendre_size());
      const CVec dphi = oracle::derivative(phi);
      const cplx left = oracle::evaluate(dphi, -1.0) - kappa * oracle::evaluate(phi, -1.0);
      const cplx right = oracle::evaluate(dphi, 1.0) + kappa * oracle::evaluate(phi, 1.0);
      CHECK(std::abs(left) <= 1e-10 * (1.0 + std::abs(kappa)));
      CHECK(std::abs(right) <= 1e-10 * (1.0 + std::abs(kappa)));
    }
  }
}

TEST_CASE("wall traces and derivatives agree with direct evaluation") {
  const CVec c = random_vector(9, 4);
  const CVec dc = oracle::derivative(c);
  const auto u = wall_traces(c);
  const auto du = wall_derivatives(c);
  CHECK(std::abs(u.left - oracle::evaluate(c, -1.0)) <= 1e-12);
  CHECK(std::abs(u.right - oracle::evaluate(c, 1.0)) <= 1e-12);
  CHECK(std::abs(du.left - oracle::evaluate(dc, -1.0)) <= 1e-11);
  CHECK(std::abs(du.right - oracle::evaluate(dc, 1.0)) <= 1e-11);
}

TEST_CASE("lifting functions") {
  const auto lift = build_lifting(1.0);
  CHECK(std::abs(lift.left[0] - (-0.5)) <= 1e-15);
  CHECK(std::abs(lift.left[1] - 0.25) <= 1e-15);
  const CVec chi_l{lift.left[0], lift.left[1]};
  const auto u = wall_traces(chi_l);
  const auto du = wall_derivatives(chi_l);
  CHECK(std::abs(du.left - u.left - 1.0) <= 1e-15);
  CHECK(std::abs(du.right + u.right) <= 1e-15);

  for (cplx kappa : {cplx(2.0), cplx(0.5, 1.5), kAlpha1}) {
    const auto l = build_lifting(kappa);
    CHECK(std::abs(l.right[0] - (l.left[0] + 1.0 / kappa)) <= 1e-14);
    CHECK(std::abs(l.right[1] - l.left[1]) == 0.0);
    const CVec chi_r{l.right[0], l.right[1]};
    const auto ur = wall_traces(chi_r);
    const auto dur = wall_derivatives(chi_r);
    CHECK(std::abs(dur.left - kappa * ur.left) <= 1e-14);
    CHECK(std::abs(dur.right + kappa * ur.right - 1.0) <= 1e-14);
  }
  CHECK_THROWS_AS(build_lifting(0.0), NumericalError);
  CHECK_THROWS_AS(build_lifting(-1.0), NumericalError);
}

TEST_CASE("quadrature matrix") {
  const auto basis = build_basis(1.0, 6);
  CVec f(7);
  f[0] = 1.0;
  CVec g = basis.quadrature(f);
  CHECK(std::abs(g[0] - 2.0) <= 1e-15);
  for (std::size_t p = 1; p < g.size(); ++p) CHECK(std::abs(g[p]) == 0.0);

  f.assign(7, 0.0);
  f[2] = 1.0;
  g = basis.quadrature(f);
  CHECK(std::abs(g[0] - (-0.1)) <= 1e-15);
  CHECK(std::abs(g[2] - 0.4) <= 1e-15);

  // Against numerical inner products with phi_p.
  const auto cb = build_basis(kAlpha1, 10);
  const CVec r = random_vector(11, 8);
  const CVec gq = cb.quadrature(r);
  for (std::size_t p = 0; p < cb.dim(); ++p) {
    const cplx want = oracle::integrate(r, oracle::basis_function(p, cb.b[p], 11), 12);
    CHECK(std::abs(gq[p] - want) <= 1e-12 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("mass and stiffness match numerical integration") {
  for (cplx kappa : {cplx(1.0), cplx(0.7, -0.4), kAlpha1}) {
    const auto basis = build_basis(kappa, 10);
    const auto ops = build_operator(basis);
    const std::size_t n = basis.dim(), np = basis.legendre_size();
    for (std::size_t k = 0; k < n; ++k) {
      const CVec pk = oracle::basis_function(k, basis.b[k], np);
      for (std::size_t j = 0; j < n; ++j) {
        const CVec pj = oracle::basis_function(j, basis.b[j], np);
        const CVec minus_d2 = [&] {
          CVec d2 = oracle::derivative(oracle::derivative(pj));
          for (auto& z : d2) z = -z;
          return d2;
        }();
        const cplx s = oracle::integrate(minus_d2, pk, 12);
        const cplx m = oracle::integrate(pj, pk, 12);
        const cplx s_want = j == k ? ops.stiffness[k] : cplx{};
        cplx m_want{};
        if (j == k) m_want = ops.mass_diag[k];
        if (j == k + 2) m_want = ops.mass_off[k];
        if (k == j + 2) m_want = ops.mass_off[j];
        const double scale = 1.0 + std::abs(kappa);
        CHECK(std::abs(s - s_want) <= 1e-11 * scale * scale);
        CHECK(std::abs(m - m_want) <= 1e-12 * scale);
      }
    }
  }
}

TEST_CASE("BandedLu agrees with a dense solve") {
  std::mt19937 gen(21);
  std::normal_distribution<double> dist;
  for (auto [kl, ku] : {std::pair<std::size_t, std::size_t>{2, 2}, {1, 3}, {0, 1}}) {
    const std::size_t n = 12;
    BandedLu lu(n, kl, ku);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = (i > kl ? i - kl : 0); j <= std::min(n - 1, i + ku); ++j) {
        // Small diagonal forces row exchanges.
        const cplx v{dist(gen), dist(gen)};
        const cplx a = i == j ? 1e-3 * v : v;
        lu.at(i, j) = a;
        dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a;
      }
    }
    CVec rhs = random_vector(n, 9);
    const Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(rhs.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXcd want = dense.partialPivLu().solve(b);
    lu.factor();
    lu.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rhs[i] - want(static_cast<Eigen::Index>(i))) <= 1e-10);
  }
  BandedLu lu(3, 1, 1);
  CHECK_THROWS_AS(lu.at(0, 2), ContractViolation);
  CVec r(3);
  CHECK_THROWS_AS(lu.solve(r), ContractViolation);
  CHECK_THROWS_AS(lu.factor(), NumericalError);
}

TEST_CASE("ModeSolver") {
  const cplx alpha1 = std::polar(1.0, -kPi / 4.0);
  const auto basis = build_basis(1.0, 6);
  const auto ops = build_operator(basis);
  const ModeSolver solver(ops, alpha1, 1.0);
  for (const cplx& z : solver.solve(CVec(ops.dim()))) CHECK(z == cplx{});

  const CVec rhs = random_vector(ops.dim(), 2);
  const CVec x = solver.solve(rhs);
  CHECK(max_abs_diff(ops.apply(1.0 / (alpha1 * alpha1), 1.0, x), rhs) <= 1e-12);
  CHECK(max_abs_diff(solve_mode(ops, alpha1, 1.0, rhs), x) == 0.0);

  const auto big = build_basis(kAlpha1, 63);
  const auto big_ops = build_operator(big);
  const cplx d{1.0, 0.05};
  const CVec r2 = random_vector(big_ops.dim(), 3);
  const CVec x2 = ModeSolver(big_ops, kAlpha1, d).solve(r2);
  CHECK(max_abs_diff(big_ops.apply(1.0 / (kAlpha1 * kAlpha1), d, x2), r2) <= 1e-12);
}

TEST_CASE("reconstruction") {
  const auto basis = build_basis(1.0, 6);
  const auto lift = build_lifting(1.0);
  CVec w(basis.dim());
  w[0] = 1.0;
  const CVec u = reconstruct_mode(w, {}, 1.0, basis, lift);
  CHECK(std::abs(u[0] - 1.0) <= 1e-15);
  CHECK(std::abs(u[2] - (-0.25)) <= 1e-15);
  CHECK(max_abs_diff(u, basis.to_legendre(w)) == 0.0);

  const auto cb = build_basis(kAlpha1, 20);
  const auto cl = build_lifting(kAlpha1);
  const CVec wr = random_vector(cb.dim(), 5);
  const WallPair h{{0.3, -1.1}, {2.0, 0.4}};
  const CVec ur = reconstruct_mode(wr, h, kAlpha1, cb, cl);
  const CVec dur = oracle::derivative(ur);
  const cplx left = oracle::evaluate(dur, -1.0) - kAlpha1 * oracle::evaluate(ur, -1.0) - kAlpha1 * h.left;
  const cplx right = oracle::evaluate(dur, 1.0) + kAlpha1 * oracle::evaluate(ur, 1.0) + kAlpha1 * h.right;
  double scale = 0.0;
  for (const cplx& z : ur) scale += std::abs(z);
  CHECK(std::abs(left) <= 1e-10 * scale * 400.0);
  CHECK(std::abs(right) <= 1e-10 * scale * 400.0);
  const auto r = robin_residual(ur, kAlpha1, kAlpha1, h);
  CHECK(std::abs(r.left) <= 1e-12 * scale * std::abs(kAlpha1));
  CHECK(std::abs(r.right) <= 1e-12 * scale * std::abs(kAlpha1));
}

TEST_CASE("assemble, solve and reconstruct match a dense Galerkin solve") {
  // -alpha1^{-2} u'' + d u = u0 tested against phi_k, with the Robin rows
  // (d - kappa)u(-1) = alpha1 B_l and (d + kappa)u(1) = -alpha1 B_r appended.
  const int order = 16;
  const std::size_t np = order + 1;
  const cplx kappa = kAlpha1 * cplx(1.0, 1e-3);
  const cplx d{1.2, -0.3};
  const WallPair h{{0.5, 0.2}, {-0.7, 1.3}};
  const CVec u0 = random_vector(np, 17);

  const auto basis = build_basis(kappa, order);
  const auto lift = build_lifting(kappa);
  const CVec rhs = assemble_rhs(u0, h, d, kAlpha1, basis, lift);
  const CVec w = ModeSolver(build_operator(basis), kAlpha1, d).solve(rhs);
  const CVec u = reconstruct_mode(w, h, kAlpha1, basis, lift);

  const auto n = static_cast<Eigen::Index>(np);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  const cplx inv_sq = 1.0 / (kAlpha1 * kAlpha1);
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const CVec phi = oracle::basis_function(k, basis.b[k], np);
    for (std::size_t p = 0; p < np; ++p) {
      CVec lp(np);
      lp[p] = 1.0;
      const CVec d2 = oracle::derivative(oracle::derivative(lp));
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(p)) =
          -inv_sq * oracle::integrate(d2, phi, order + 2) + d * oracle::integrate(lp, phi, order + 2);
    }
    b(static_cast<Eigen::Index>(k)) = oracle::integrate(u0, phi, order + 2);
  }
  for (std::size_t p = 0; p < np; ++p) {
    const double pd = static_cast<double>(p);
    const double sign = p % 2 == 0 ? 1.0 : -1.0;
    const double dv = 0.5 * pd * (pd + 1.0);
    a(n - 2, static_cast<Eigen::Index>(p)) = -sign * dv - kappa * sign;
    a(n - 1, static_cast<Eigen::Index>(p)) = dv + kappa;
  }
  b(n - 2) = kAlpha1 * h.left;
  b(n - 1) = -kAlpha1 * h.right;
  const Eigen::VectorXcd want = a.fullPivLu().solve(b);
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(want(i)));
  for (std::size_t p = 0; p < np; ++p) {
    CHECK(std::abs(u[p] - want(static_cast<Eigen::Index>(p))) <= 1e-10 * scale);
  }
}

TEST_CASE("zero data gives a zero rhs") {
  const auto basis = build_basis(kAlpha1, 10);
  const CVec rhs = assemble_rhs(CVec(11), {}, 1.0, kAlpha1, basis, build_lifting(kAlpha1));
  for (const cplx& z : rhs) CHECK(z == cplx{});
  CHECK_THROWS_AS(assemble_rhs(CVec(5), {}, 1.0, kAlpha1, basis, build_lifting(kAlpha1)), ContractViolation);
}
