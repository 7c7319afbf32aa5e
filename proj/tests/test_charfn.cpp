#include <doctest.h>

#include <cmath>

#include "pencilkit/charfn.hpp"
#include "pencilkit/core.hpp"
#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"
#include "pencilkit/rng.hpp"

using namespace pencilkit;

namespace {

CMatrix scalar(Complex z) {
  CMatrix m(1, 1);
  m(0, 0) = z;
  return m;
}

// Scalar elementary system: A = lambda1, B = b, phi = beta, sigma = 1.
PencilSystem elementary(double b, Complex lambda1) {
  const double beta = std::sqrt(2.0 * lambda1.imag());
  return PencilSystem{Colligation{scalar(lambda1), scalar(beta), scalar(1)},
                      scalar(b)};
}

PencilSystem random_system(Rng& rng, Index n, Index channels) {
  const CMatrix h = rng.hermitian(n);
  CMatrix phi = rng.gaussian_matrix(channels, n);
  CMatrix sigma = CMatrix::Zero(channels, channels);
  for (Index i = 0; i < channels; ++i) sigma(i, i) = (i % 2 == 0) ? 1 : -1;
  CMatrix a = h + 0.5 * kImag * (phi.adjoint() * sigma * phi);
  Colligation c = Colligation::validated(std::move(a), std::move(phi),
                                         std::move(sigma));
  return PencilSystem::validated(std::move(c), rng.hermitian(n));
}

}  // namespace

TEST_CASE("char_fn_sample: no channels means S = I") {
  Rng rng(5);
  const CMatrix a = rng.hermitian(3);
  PencilSystem p{Colligation{a, CMatrix(0, 3), CMatrix(0, 0)},
                 rng.hermitian(3)};
  const CMatrix s = char_fn_sample(p, Complex(0.3, 1.1)).S;
  CHECK(s.rows() == 0);
}

TEST_CASE("char_fn_sample: scalar elementary values") {
  PencilSystem p = elementary(0.0, Complex(0, 1));
  // S(lambda) = (lambda^2 + conj(lambda1)) / (lambda^2 + lambda1).
  const CMatrix s1 = char_fn_sample(p, Complex(1, 1)).S;
  CHECK(std::abs(s1(0, 0) - Complex(1.0 / 3.0, 0)) <= 1e-14);

  const CMatrix s2 = char_fn_sample(p, Complex(1, 0)).S;
  CHECK(std::abs(s2(0, 0) - Complex(0, -1)) <= 1e-14);
  CHECK(std::abs(std::abs(s2(0, 0)) - 1.0) <= 1e-14);

  CHECK_THROWS_AS(char_fn_sample(p, std::polar(1.0, 3 * M_PI / 4)), Error);
}

TEST_CASE("char_fn_sample: unimodular on the real axis") {
  PencilSystem p = elementary(0.7, Complex(0.4, 0.9));
  for (int k = 0; k < 50; ++k) {
    const double x = -5.0 + 10.0 * k / 49.0;
    const CMatrix s = char_fn_sample(p, Complex(x, 0)).S;
    CHECK(std::abs(std::abs(s(0, 0)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("char_fn_sample: S approaches I at the quadratic rate") {
  Rng rng(61);
  PencilSystem p = random_system(rng, 3, 2);
  double radius = 0.0;
  for (const Complex& z : pencil_spectrum(p))
    radius = std::max(radius, std::abs(z));
  const double big = 10.0 * std::max(radius, 1.0);
  const double bound = 2.0 * spectral_norm(p.phi()) * spectral_norm(p.phi()) *
                       spectral_norm(p.sigma()) / (big * big);
  for (double angle : {0.3, 1.2, 2.5}) {
    const CMatrix s = char_fn_sample(p, std::polar(big, angle)).S;
    CHECK(spectral_norm(s - CMatrix::Identity(2, 2)) <= bound);
  }
}

TEST_CASE("metric relation: degenerate channel and scalar case") {
  Rng rng(67);
  const CMatrix a = rng.hermitian(2);
  PencilSystem closed{Colligation{a, CMatrix(0, 2), CMatrix(0, 0)},
                      rng.hermitian(2)};
  CHECK(metric_relation_residual(closed, Complex(0, 2), Complex(1, 1)) == 0.0);

  PencilSystem p = elementary(0.0, Complex(0, 1));
  CHECK(metric_relation_residual(p, Complex(1, 1), Complex(1, 1)) <= 1e-12);
  CHECK_THROWS_AS(
      metric_relation_residual(p, Complex(1, 1), Complex(1, -1)), Error);
}

TEST_CASE("metric relation: property over random systems and points") {
  Rng rng(71);
  int checked = 0;
  while (checked < 100) {
    PencilSystem p = random_system(rng, 2 + checked % 3, 1 + checked % 2);
    const Complex lambda(rng.uniform(-2, 2), rng.uniform(0.4, 2.5));
    const Complex w(rng.uniform(-2, 2), rng.uniform(0.4, 2.5));
    if (std::abs(lambda - std::conj(w)) < 0.1) continue;
    if (spectral_separation({lambda}, pencil_spectrum(p)) < 0.2) continue;
    if (spectral_separation({w}, pencil_spectrum(p)) < 0.2) continue;
    CHECK(metric_relation_residual(p, lambda, w) <= 1e-9);
    ++checked;
  }
}

TEST_CASE("v_function: scalar oracle for the fractional-linear identity") {
  // b = 0, lambda1 = i: A_R = 0, V(lambda) = beta^2 / lambda^2 = 2 / lambda^2.
  PencilSystem p = elementary(0.0, Complex(0, 1));
  const auto res = v_function(p, Complex(1, 1));
  CHECK(std::abs(res.V(0, 0) - Complex(0, -1)) <= 1e-13);
  REQUIRE(res.identity_residual.has_value());
  CHECK(*res.identity_residual <= 1e-9);
  // Direct second route: 2i (S - 1)(S + 1)^-1 sigma^-1 at S = 1/3.
  const Complex alt = 2.0 * kImag * (Complex(1.0 / 3.0) - 1.0) /
                      (Complex(1.0 / 3.0) + 1.0);
  CHECK(std::abs(res.V(0, 0) - alt) <= 1e-13);
}

TEST_CASE("v_function: no channels degenerates with a flag") {
  Rng rng(73);
  const CMatrix a = rng.hermitian(2);
  PencilSystem closed{Colligation{a, CMatrix(0, 2), CMatrix(0, 0)},
                      rng.hermitian(2)};
  const auto res = v_function(closed, Complex(0, 2));
  CHECK(res.V.rows() == 0);
  CHECK_FALSE(res.identity_residual.has_value());
}

TEST_CASE("v_function: Hermitian symmetry across the real axis when B = 0") {
  Rng rng(79);
  CMatrix phi = rng.gaussian_matrix(2, 3);
  CMatrix sigma = CMatrix::Identity(2, 2);
  CMatrix a = rng.hermitian(3) + 0.5 * kImag * (phi.adjoint() * sigma * phi);
  PencilSystem p{Colligation{a, phi, sigma}, CMatrix::Zero(3, 3)};
  const Complex lambda(0.8, 1.3);
  const CMatrix v1 = v_function(p, lambda).V;
  const CMatrix v2 = v_function(p, std::conj(lambda)).V;
  CHECK(spectral_norm(CMatrix(v1.adjoint()) - v2) <= 1e-12);
}

TEST_CASE("v metric relation: scalar and random") {
  PencilSystem p = elementary(0.0, Complex(0, 1));
  CHECK(v_metric_residual(p, Complex(1, 1), Complex(1, 1)) <= 1e-12);

  Rng rng(83);
  for (int k = 0; k < 20; ++k) {
    PencilSystem q = random_system(rng, 3, 2);
    const Complex lambda(rng.uniform(-2, 2), rng.uniform(0.5, 2.5));
    const Complex w(rng.uniform(-2, 2), rng.uniform(0.5, 2.5));
    if (std::abs(lambda - std::conj(w)) < 0.1) continue;
    CHECK(v_metric_residual(q, lambda, w) <= 1e-9);
  }
}

TEST_CASE("sign_region: single factor table") {
  SignRegionQuery q;
  q.b_list = {0.0};

  q.lambda = Complex(1, 1);  // Im > 0 and Re + b/2 > 0
  CHECK(sign_region(q) == SignClass::positive);
  q.lambda = Complex(-1, 1);
  CHECK(sign_region(q) == SignClass::negative);
  q.lambda = Complex(1, -1);
  CHECK(sign_region(q) == SignClass::negative);
  q.lambda = Complex(2, 0);  // real axis
  CHECK(sign_region(q) == SignClass::zero);
  q.lambda = Complex(0, 0.7);  // Re = -b/2 line
  CHECK(sign_region(q) == SignClass::zero);
  q.lambda = Complex(1e-12, 0.7);  // inside the boundary band but off the line
  CHECK(sign_region(q) == SignClass::boundary);
}

TEST_CASE("sign_region: N = 1 prediction matches the numeric sign") {
  PencilSystem p = elementary(0.8, Complex(0.2, 0.45));
  Rng rng(89);
  for (int k = 0; k < 200; ++k) {
    const Complex lambda(rng.uniform(-3, 3), rng.uniform(-2, 2));
    SignRegionQuery q;
    q.b_list = {0.8};
    q.lambda = lambda;
    q.boundary_band = 1e-6;
    const SignClass cls = sign_region(q);
    if (cls == SignClass::boundary || cls == SignClass::zero) continue;
    const CMatrix s = char_fn_sample(p, lambda).S;
    const double value = 1.0 - std::norm(s(0, 0));
    if (cls == SignClass::positive) CHECK(value > 0);
    if (cls == SignClass::negative) CHECK(value < 0);
  }
}

TEST_CASE("sign_region: multi-factor strip is unclassified") {
  SignRegionQuery q;
  q.b_list = {1.0, -1.0};  // boundaries at Re = -1/2 and Re = +1/2
  q.lambda = Complex(0.0, 1.0);
  CHECK(sign_region(q) == SignClass::unclassified);
  q.lambda = Complex(1.0, 1.0);
  CHECK(sign_region(q) == SignClass::positive);
  q.lambda = Complex(-1.0, 1.0);
  CHECK(sign_region(q) == SignClass::negative);
  q.lambda = Complex(3.0, 0.0);  // real, right of every -b_k/2
  CHECK(sign_region(q) == SignClass::zero);

  SignRegionQuery bad;
  bad.b_list = {-1.0, 1.0};
  bad.lambda = Complex(0, 1);
  CHECK_THROWS_AS(sign_region(bad), Error);
}
