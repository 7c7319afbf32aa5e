#pragma once

#include <vector>

#include "pencilkit/core.hpp"
#include "pencilkit/factor.hpp"
#include "pencilkit/types.hpp"

namespace pencilkit {

/// Result of coupling two open systems over a shared channel space
/// (the output of the first feeds the input of the second):
///   A~ = [[A1, 0], [i phi2* sigma phi1, A2]],  phi~ = [phi1 phi2],
///   B~ = diag(B1, B2).
struct CoupledSystem {
  PencilSystem combined;
  PencilSystem first;
  PencilSystem second;
};

/// Couple two systems. Requires equal channel dimensions and identical
/// sigma; throws ErrorKind::infeasible otherwise. The combined system
/// passes colligation validation by construction.
CoupledSystem couple(const PencilSystem& p1, const PencilSystem& p2);

/// Roots of the coupled pencil synthesized from the roots of the parts:
/// gamma solves Y2 gamma - gamma X1 = i phi2* sigma phi1, and
///   X~ = [[X1, 0], [gamma, X2]],  Y~ = [[Y1, 0], [-gamma, Y2]].
/// Requires spec(Y2) and spec(X1) disjoint.
FactoredPencil synthesize_roots(const CoupledSystem& c,
                                const FactoredPencil& f1,
                                const FactoredPencil& f2);

/// One scalar elementary factor: state dimension 1 with dissipation b,
/// main coefficient lambda1 in the upper half-plane, and channel gain
/// beta > 0 tied to it by lambda1 - conj(lambda1) = i beta^2.
struct ChainFactor {
  double b = 0.0;
  Complex lambda1;
  double beta = 0.0;
};

struct ChainSpec {
  std::vector<ChainFactor> factors;

  /// Validates Im(lambda1) > 0 and beta^2 = 2 Im(lambda1) for every factor.
  static ChainSpec validated(std::vector<ChainFactor> factors,
                             double tol = 1e-10);
};

/// Chain of N scalar factors coupled in order. Produces the lower-triangular
/// system (A~ has i beta_s beta_k below the diagonal, B~ = diag(b_k)) and
/// its triangular roots: diag(X~) are the upper-half-plane roots w1^k of
/// lambda^2 + lambda b_k + lambda_k = 0, diag(Y~) the lower ones, and the
/// strictly-lower entries gamma_{k,s} solve
///   (w2^k - w1^s) gamma_{k,s} = i beta_s beta_k + sum_{s<l<k} gamma_{k,l} gamma_{l,s},
/// filled one sub-diagonal at a time.
struct ChainBuildResult {
  PencilSystem system;
  FactoredPencil factored;
  std::vector<Complex> w1;  // upper-half-plane roots per factor
  std::vector<Complex> w2;  // lower-half-plane roots per factor
};

ChainBuildResult chain_build(const ChainSpec& spec);

/// Product of the scalar elementary characteristic functions
///   prod_k (lambda^2 + lambda b_k + conj(lambda_k)) / (lambda^2 + lambda b_k + lambda_k).
/// Empty product is 1. Throws ErrorKind::spectral_point when a denominator
/// vanishes.
Complex blaschke_product_eval(const ChainSpec& spec, Complex lambda);

/// Continuous chain limit: bounded real profiles b(t), a(t) sampled
/// uniformly on [0, l] (piecewise-linear in between).
struct ContinuousLimitSpec {
  double l = 0.0;
  std::vector<double> b;
  std::vector<double> a;

  static ContinuousLimitSpec validated(double l, std::vector<double> b,
                                       std::vector<double> a);
  double b_at(double t) const;
  double a_at(double t) const;
};

/// S(lambda) = exp{-i int_0^l dt / (lambda^2 + lambda b(t) + a(t))},
/// with the exponent integrated by adaptive Simpson to abs tol 1e-10.
/// Throws ErrorKind::spectral_point when the integrand is singular on [0, l].
Complex continuous_limit_eval(const ContinuousLimitSpec& spec, Complex lambda);

}  // namespace pencilkit
