#include "pencilkit/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"
#include "pencilkit/quadrature.hpp"

namespace pencilkit {

CoupledSystem couple(const PencilSystem& p1, const PencilSystem& p2) {
  const Index m = p1.dim_channel();
  if (p2.dim_channel() != m)
    throw infeasible_error("couple: channel dimensions differ");
  if ((p1.sigma() - p2.sigma()).cwiseAbs().maxCoeff() != 0.0)
    throw infeasible_error("couple: sigma operators must coincide exactly");
  const Index n1 = p1.dim_state();
  const Index n2 = p2.dim_state();

  CMatrix a = CMatrix::Zero(n1 + n2, n1 + n2);
  a.topLeftCorner(n1, n1) = p1.A();
  a.bottomRightCorner(n2, n2) = p2.A();
  a.bottomLeftCorner(n2, n1) =
      kImag * (p2.phi().adjoint() * p1.sigma() * p1.phi());

  CMatrix phi(m, n1 + n2);
  phi.leftCols(n1) = p1.phi();
  phi.rightCols(n2) = p2.phi();

  CMatrix b = CMatrix::Zero(n1 + n2, n1 + n2);
  b.topLeftCorner(n1, n1) = p1.B;
  b.bottomRightCorner(n2, n2) = p2.B;

  Colligation c = Colligation::validated(std::move(a), std::move(phi),
                                         p1.sigma());
  PencilSystem combined = PencilSystem::validated(std::move(c), std::move(b));
  return CoupledSystem{std::move(combined), p1, p2};
}

FactoredPencil synthesize_roots(const CoupledSystem& c,
                                const FactoredPencil& f1,
                                const FactoredPencil& f2) {
  const Index n1 = f1.X.rows();
  const Index n2 = f2.X.rows();
  const CMatrix rhs = kImag * (c.second.phi().adjoint() * c.first.sigma() *
                               c.first.phi());
  // gamma: H1 -> H2 solving Y2 gamma - gamma X1 = i phi2* sigma phi1,
  // rewritten as gamma X1 - Y2 gamma = -rhs for the Sylvester solver.
  const CMatrix gamma = solve_sylvester(f2.Y, f1.X, -rhs);

  FactoredPencil f;
  f.X = CMatrix::Zero(n1 + n2, n1 + n2);
  f.X.topLeftCorner(n1, n1) = f1.X;
  f.X.bottomRightCorner(n2, n2) = f2.X;
  f.X.bottomLeftCorner(n2, n1) = gamma;
  f.Y = CMatrix::Zero(n1 + n2, n1 + n2);
  f.Y.topLeftCorner(n1, n1) = f1.Y;
  f.Y.bottomRightCorner(n2, n2) = f2.Y;
  f.Y.bottomLeftCorner(n2, n1) = -gamma;

  f.spec_x.eigenvalues = f1.spec_x.eigenvalues;
  f.spec_x.eigenvalues.insert(f.spec_x.eigenvalues.end(),
                              f2.spec_x.eigenvalues.begin(),
                              f2.spec_x.eigenvalues.end());
  f.spec_y.eigenvalues = f1.spec_y.eigenvalues;
  f.spec_y.eigenvalues.insert(f.spec_y.eigenvalues.end(),
                              f2.spec_y.eigenvalues.begin(),
                              f2.spec_y.eigenvalues.end());
  const double sep =
      spectral_separation(f.spec_x.eigenvalues, f.spec_y.eigenvalues);
  f.spec_x.separation = sep;
  f.spec_y.separation = sep;
  f.method = "synthesized";
  f.K = solve_sylvester(f.X, f.Y,
                        CMatrix::Identity(n1 + n2, n1 + n2));
  return f;
}

ChainSpec ChainSpec::validated(std::vector<ChainFactor> factors, double tol) {
  for (const ChainFactor& f : factors) {
    if (!(f.lambda1.imag() > 0))
      throw validation_error("chain: lambda_1 must lie in the upper half-plane");
    if (!(f.beta > 0))
      throw validation_error("chain: beta must be positive");
    if (std::abs(f.beta * f.beta - 2.0 * f.lambda1.imag()) >
        tol * std::max(1.0, std::abs(f.lambda1)))
      throw validation_error("chain: beta^2 must equal 2 Im(lambda_1)");
  }
  return ChainSpec{std::move(factors)};
}

namespace {

// Roots of lambda^2 + b lambda + lambda1 = 0, upper-half-plane root first.
// Im(lambda1) > 0 rules out real roots.
std::pair<Complex, Complex> factor_roots(double b, Complex lambda1) {
  const Complex disc = std::sqrt(Complex(b * b, 0) - 4.0 * lambda1);
  Complex w1 = 0.5 * (-b + disc);
  Complex w2 = 0.5 * (-b - disc);
  if (w1.imag() < 0) std::swap(w1, w2);
  return {w1, w2};
}

}  // namespace

ChainBuildResult chain_build(const ChainSpec& spec) {
  const Index n = static_cast<Index>(spec.factors.size());
  ChainBuildResult out;
  out.w1.resize(static_cast<size_t>(n));
  out.w2.resize(static_cast<size_t>(n));

  CMatrix a = CMatrix::Zero(n, n);
  CMatrix b = CMatrix::Zero(n, n);
  CMatrix phi(1, n);
  CMatrix sigma = CMatrix::Identity(1, 1);
  for (Index k = 0; k < n; ++k) {
    const ChainFactor& fk = spec.factors[static_cast<size_t>(k)];
    a(k, k) = fk.lambda1;
    b(k, k) = fk.b;
    phi(0, k) = fk.beta;
    for (Index s = 0; s < k; ++s)
      a(k, s) = kImag * fk.beta * spec.factors[static_cast<size_t>(s)].beta;
    auto [w1, w2] = factor_roots(fk.b, fk.lambda1);
    out.w1[static_cast<size_t>(k)] = w1;
    out.w2[static_cast<size_t>(k)] = w2;
  }

  CMatrix x = CMatrix::Zero(n, n);
  CMatrix y = CMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    x(k, k) = out.w1[static_cast<size_t>(k)];
    y(k, k) = out.w2[static_cast<size_t>(k)];
  }
  // gamma_{k,s} filled one sub-diagonal at a time: the recursion for
  // |k - s| = d only consumes entries with smaller offset.
  for (Index d = 1; d < n; ++d) {
    for (Index k = d; k < n; ++k) {
      const Index s = k - d;
      Complex rhs = a(k, s);
      for (Index l = s + 1; l < k; ++l) rhs += x(k, l) * x(l, s);
      const Complex div = out.w2[static_cast<size_t>(k)] -
                          out.w1[static_cast<size_t>(s)];
      if (std::abs(div) <= 1e-12)
        throw infeasible_error("chain: root collision w2^k == w1^s");
      x(k, s) = rhs / div;
      y(k, s) = -x(k, s);
    }
  }

  out.system = PencilSystem{Colligation{std::move(a), std::move(phi),
                                        std::move(sigma)},
                            std::move(b)};
  FactoredPencil f;
  f.X = std::move(x);
  f.Y = std::move(y);
  f.spec_x.eigenvalues = out.w1;
  f.spec_y.eigenvalues = out.w2;
  const double sep = n > 0 ? spectral_separation(out.w1, out.w2) : 0.0;
  f.spec_x.separation = sep;
  f.spec_y.separation = sep;
  f.method = "chain";
  f.K = n > 0 ? solve_sylvester(f.X, f.Y, CMatrix::Identity(n, n))
              : CMatrix(0, 0);
  out.factored = std::move(f);
  return out;
}

Complex blaschke_product_eval(const ChainSpec& spec, Complex lambda) {
  Complex prod(1.0, 0.0);
  for (const ChainFactor& f : spec.factors) {
    const Complex den = lambda * lambda + lambda * f.b + f.lambda1;
    const double scale = std::norm(lambda) + std::abs(lambda * f.b) +
                         std::abs(f.lambda1);
    if (std::abs(den) <= 1e-14 * std::max(scale, 1e-300))
      throw spectral_point_error("blaschke product: lambda at a factor spectrum");
    prod *= (lambda * lambda + lambda * f.b + std::conj(f.lambda1)) / den;
  }
  return prod;
}

ContinuousLimitSpec ContinuousLimitSpec::validated(double l,
                                                   std::vector<double> b,
                                                   std::vector<double> a) {
  if (l < 0) throw validation_error("continuous chain: l must be >= 0");
  if (l > 0 && (b.size() < 2 || a.size() != b.size()))
    throw validation_error(
        "continuous chain: need matching b and a samples (at least two)");
  return ContinuousLimitSpec{l, std::move(b), std::move(a)};
}

namespace {

double sample_at(const std::vector<double>& samples, double l, double t) {
  if (samples.empty()) return 0.0;
  if (samples.size() == 1 || l <= 0.0) return samples.front();
  const double pos =
      std::clamp(t / l, 0.0, 1.0) * static_cast<double>(samples.size() - 1);
  const size_t i0 = std::min(static_cast<size_t>(pos), samples.size() - 2);
  const double frac = pos - static_cast<double>(i0);
  return samples[i0] * (1.0 - frac) + samples[i0 + 1] * frac;
}

}  // namespace

double ContinuousLimitSpec::b_at(double t) const { return sample_at(b, l, t); }
double ContinuousLimitSpec::a_at(double t) const { return sample_at(a, l, t); }

Complex continuous_limit_eval(const ContinuousLimitSpec& spec,
                              Complex lambda) {
  if (spec.l <= 0.0) return Complex(1.0, 0.0);
  const auto integrand = [&](double t) -> Complex {
    const Complex den =
        lambda * lambda + lambda * spec.b_at(t) + spec.a_at(t);
    if (std::abs(den) < 1e-12)
      throw spectral_point_error(
          "continuous chain: integrand singular on [0, l]");
    return 1.0 / den;
  };
  const Complex exponent = adaptive_simpson(integrand, 0.0, spec.l, 1e-10);
  return std::exp(-kImag * exponent);
}

}  // namespace pencilkit
