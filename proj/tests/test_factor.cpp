#include <doctest.h>

#include <cmath>

#include "pencilkit/core.hpp"
#include "pencilkit/errors.hpp"
#include "pencilkit/factor.hpp"
#include "pencilkit/linalg.hpp"
#include "pencilkit/rng.hpp"

#include "oracles.hpp"

using namespace pencilkit;

namespace {

CMatrix scalar(Complex z) {
  CMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

PencilSystem scalar_system(Complex a, double b) {
  const auto [phi, sigma] = embed_defect(scalar(a));
  return PencilSystem{Colligation{scalar(a), phi, sigma}, scalar(b)};
}

// Random system with a valid colligation: A = H + (i/2) phi* sigma phi.
PencilSystem random_system(Rng& rng, Index n, Index channels,
                           double b_scale = 1.0, double defect_scale = 1.0) {
  const CMatrix h = rng.hermitian(n);
  CMatrix phi = std::sqrt(defect_scale) * rng.gaussian_matrix(channels, n);
  CMatrix sigma = CMatrix::Zero(channels, channels);
  for (Index i = 0; i < channels; ++i) sigma(i, i) = (i % 2 == 0) ? 1 : -1;
  CMatrix a = h + 0.5 * kImag * (phi.adjoint() * sigma * phi);
  Colligation c = Colligation::validated(std::move(a), std::move(phi),
                                         std::move(sigma));
  return PencilSystem::validated(std::move(c), rng.hermitian(n, b_scale));
}

double factor_residuals(const PencilSystem& p, const FactoredPencil& f) {
  const double right = spectral_norm(f.X * f.X + p.B * f.X + p.A());
  const double left = spectral_norm(f.Y * f.Y + f.Y * p.B + p.A());
  return std::max(right, left);
}

}  // namespace

TEST_CASE("factor_spectral: scalar pencil lambda^2 - 1") {
  PencilSystem p{Colligation{scalar(-1), CMatrix(0, 1), CMatrix(0, 0)},
                 scalar(0)};
  const FactoredPencil f = factor_spectral(p, SplitRule::halfplane_re);
  CHECK(std::abs(f.X(0, 0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(f.Y(0, 0) - Complex(-1, 0)) < 1e-12);
  CHECK(f.spec_x.separation == doctest::Approx(2.0));
}

TEST_CASE("factor_spectral: scalar b=0, A=i against the quadratic formula") {
  PencilSystem p = scalar_system(Complex(0, 1), 0.0);
  const FactoredPencil f = factor_spectral(p, SplitRule::halfplane_im);
  const auto [r1, r2] = oracles::quadratic_roots(Complex(0, 0), Complex(0, 1));
  const Complex upper = r1.imag() > 0 ? r1 : r2;
  const Complex lower = r1.imag() > 0 ? r2 : r1;
  CHECK(std::abs(f.X(0, 0) - upper) < 1e-12);
  CHECK(std::abs(f.Y(0, 0) - lower) < 1e-12);
  // Explicit values e^{i 3 pi / 4} and e^{-i pi / 4}.
  CHECK(std::abs(f.X(0, 0) - std::polar(1.0, 3 * M_PI / 4)) < 1e-12);
  CHECK(std::abs(f.Y(0, 0) - std::polar(1.0, -M_PI / 4)) < 1e-12);
}

TEST_CASE("factor_spectral: random instances satisfy both root equations") {
  Rng rng(101);
  int accepted = 0;
  while (accepted < 15) {
    const Index n = 2 + accepted % 4;
    PencilSystem p = random_system(rng, n, 2);
    FactoredPencil f;
    try {
      f = factor_spectral(p, SplitRule::largest_gap_re, 1e-3);
    } catch (const Error&) {
      continue;  // gap too small for this draw
    }
    ++accepted;
    CHECK(factor_residuals(p, f) <= 1e-9 * root_equation_scale(p, f.X));
    CHECK(spectral_norm(f.X + f.Y + p.B) <= 1e-10 * root_equation_scale(p, f.X));
    CHECK(spectral_norm(f.Y * f.X - p.A()) <= 1e-9 * root_equation_scale(p, f.X));
    CHECK(spectral_norm(f.K * f.Y - f.X * f.K -
                        CMatrix::Identity(n, n)) <= 1e-9);
  }
}

TEST_CASE("factor_spectral: flipping the split swaps roles and negates K") {
  Rng rng(303);
  PencilSystem p = random_system(rng, 3, 1);
  const FactoredPencil f = factor_spectral(p, SplitRule::largest_gap_re, 1e-3);
  const FactoredPencil g = factor_spectral(
      p,
      [&](Complex z) {
        return spectral_separation({z}, f.spec_y.eigenvalues) <
               spectral_separation({z}, f.spec_x.eigenvalues);
      },
      1e-3);
  CHECK(spectral_separation(g.spec_x.eigenvalues, f.spec_y.eigenvalues) <
        1e-8);
  CHECK(spectral_norm(g.K + f.K) <= 1e-8);
}

TEST_CASE("factor_bernoulli: A = 0 converges immediately to X = 0") {
  PencilSystem p{Colligation{CMatrix::Zero(2, 2), CMatrix(0, 2), CMatrix(0, 0)},
                 4.0 * CMatrix::Identity(2, 2)};
  const FactoredPencil f = factor_bernoulli(p);
  CHECK(spectral_norm(f.X) <= 1e-14);
}

TEST_CASE("factor_bernoulli: scalar b=4, a=1 hits the quadratic-formula root") {
  PencilSystem p{Colligation{scalar(1), CMatrix(0, 1), CMatrix(0, 0)},
                 scalar(4)};
  const FactoredPencil f = factor_bernoulli(p);
  const auto [big, small] = oracles::quadratic_roots(Complex(4), Complex(1));
  CHECK(std::abs(f.X(0, 0) - small) < 1e-10);
  CHECK(f.X(0, 0).real() == doctest::Approx(-0.26795).epsilon(1e-4));
  (void)big;
}

TEST_CASE("factor_bernoulli: near-critical contraction still converges") {
  Rng rng(55);
  // Scale A so that 4 ||B^-1|| ||B^-1 A|| = 0.99.
  const Index n = 2;
  const CMatrix b = 2.0 * CMatrix::Identity(n, n) + rng.hermitian(n, 0.3);
  const CMatrix araw = rng.gaussian_matrix(n, n);
  const CMatrix binv = b.inverse();
  const double factor =
      0.99 / (4.0 * spectral_norm(binv) * spectral_norm(CMatrix(binv * araw)));
  const CMatrix a = factor * araw;
  const auto [phi, sigma] = embed_defect(a);
  PencilSystem p{Colligation{a, phi, sigma}, b};
  const FactoredPencil f = factor_bernoulli(p, 2000, 1e-13);
  CHECK(factor_residuals(p, f) <= 1e-10 * root_equation_scale(p, f.X));
}

TEST_CASE("factor_bernoulli: violated contraction condition is refused") {
  PencilSystem p{Colligation{scalar(5), CMatrix(0, 1), CMatrix(0, 0)},
                 scalar(1)};
  CHECK_THROWS_AS(factor_bernoulli(p), Error);
}

TEST_CASE("bernoulli and schur smallest-modulus roots agree") {
  Rng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 3;
    const CMatrix b = 3.0 * CMatrix::Identity(n, n) + rng.hermitian(n, 0.4);
    const CMatrix a = rng.hermitian(n, 0.4);
    PencilSystem p{Colligation{a, CMatrix(0, n), CMatrix(0, 0)}, b};
    const FactoredPencil fb = factor_bernoulli(p, 500, 1e-14);
    const FactoredPencil fs = factor_spectral(p, SplitRule::smallest_modulus);
    CHECK(spectral_norm(fb.X - fs.X) <= 1e-8);
  }
}

TEST_CASE("coupling K: scalar Sylvester solves") {
  {
    // X = 1, Y = -1: K(-1) - K = 1 gives K = -1/2.
    FactoredPencil f;
    f.X = scalar(1);
    f.Y = scalar(-1);
    CHECK(std::abs(coupling_K_sylvester(f)(0, 0) - Complex(-0.5, 0)) < 1e-14);
  }
  {
    // X = i, Y = -i: K = i/2.
    FactoredPencil f;
    f.X = scalar(Complex(0, 1));
    f.Y = scalar(Complex(0, -1));
    CHECK(std::abs(coupling_K_sylvester(f)(0, 0) - Complex(0, 0.5)) < 1e-14);
  }
}

TEST_CASE("coupling K via contour: residue, swap, and empty cases") {
  PencilSystem p{Colligation{scalar(-1), CMatrix(0, 1), CMatrix(0, 0)},
                 scalar(0)};
  const FactoredPencil f = factor_spectral(p, SplitRule::halfplane_re);

  // Circle around Y = -1 picks the residue of 1/((z-1)(z+1)) there.
  const Complex residue = oracles::simple_pole_residue(1.0, -1.0);
  const CMatrix k =
      coupling_K_contour(p, f, ContourSpec::validated(Complex(-1, 0), 0.5, 64));
  CHECK(std::abs(k(0, 0) - residue) < 1e-12);
  CHECK(std::abs(k(0, 0) - Complex(-0.5, 0)) < 1e-12);

  // Circle around X instead gives the negated operator.
  const CMatrix k1 =
      coupling_K_contour(p, f, ContourSpec::validated(Complex(1, 0), 0.5, 64));
  CHECK(std::abs(k1(0, 0) + k(0, 0)) < 1e-12);

  // Circle enclosing nothing integrates to zero.
  const CMatrix none =
      coupling_K_contour(p, f, ContourSpec::validated(Complex(5, 5), 0.5, 64));
  CHECK(spectral_norm(none) < 1e-12);

  // Contour through an eigenvalue is rejected.
  CHECK_THROWS_AS(
      coupling_K_contour(p, f, ContourSpec::validated(Complex(0, 0), 1.0, 64)),
      Error);
}

TEST_CASE("contour quadrature error drops at least fourfold per doubling") {
  Rng rng(91);
  const Index n = 3;
  const CMatrix b = 3.0 * CMatrix::Identity(n, n) + rng.hermitian(n, 0.4);
  const CMatrix a = rng.hermitian(n, 0.3);
  PencilSystem p{Colligation{a, CMatrix(0, n), CMatrix(0, 0)}, b};
  const FactoredPencil f = factor_spectral(p, SplitRule::smallest_modulus);
  const CMatrix exact = coupling_K_sylvester(f);
  const ContourSpec base = default_contour_around_y(f);
  double prev_err = -1.0;
  for (int nodes = 8; nodes <= 32; nodes *= 2) {
    ContourSpec c = base;
    c.nodes = nodes;
    // Single-shot quadrature at the requested node count.
    const CMatrix k = coupling_K_contour(p, f, c, /*quad_tol=*/0.0,
                                         /*node_cap=*/nodes);
    const double err = spectral_norm(k - exact);
    if (prev_err > 1e-13) CHECK(err <= prev_err / 4.0);
    prev_err = err;
  }
}

TEST_CASE("verify_identities: scalar and random instances") {
  {
    PencilSystem p{Colligation{scalar(-1), CMatrix(0, 1), CMatrix(0, 0)},
                   scalar(0)};
    const FactoredPencil f = factor_spectral(p, SplitRule::halfplane_re);
    const IdentityReport rep = verify_identities(p, f, Complex(0, 2));
    CHECK(rep.resolvent_identity_residual <= 1e-12);
    CHECK(rep.left_root_residual <= 1e-12);
    CHECK_THROWS_AS(verify_identities(p, f, Complex(1, 0)), Error);
  }
  Rng rng(121);
  PencilSystem p = random_system(rng, 4, 2);
  const FactoredPencil f = factor_spectral(p, SplitRule::largest_gap_re, 1e-3);
  for (int k = 0; k < 10; ++k) {
    const Complex lambda = Complex(rng.uniform(-1, 1), rng.uniform(0.5, 3.0));
    const IdentityReport rep = verify_identities(p, f, lambda);
    CHECK(rep.resolvent_identity_residual <= 1e-9);
    CHECK(rep.left_root_residual <= 1e-9);
  }
}

TEST_CASE("split selecting the wrong count is infeasible") {
  PencilSystem p{Colligation{scalar(-1), CMatrix(0, 1), CMatrix(0, 0)},
                 scalar(0)};
  CHECK_THROWS_AS(
      factor_spectral(p, [](Complex) { return true; }),
      Error);
}
