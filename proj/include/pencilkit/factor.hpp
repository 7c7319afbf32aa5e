#pragma once

#include <functional>
#include <string>

#include "pencilkit/core.hpp"
#include "pencilkit/types.hpp"

namespace pencilkit {

/// How the 2n pencil eigenvalues are partitioned between the roots X and Y.
/// X always receives exactly n of them.
enum class SplitRule {
  largest_gap_re,   ///< cut at the widest gap in the real parts; X gets Re > cut
  halfplane_re,     ///< X gets Re > 0
  halfplane_im,     ///< X gets Im > 0
  smallest_modulus, ///< X gets the n eigenvalues of smallest modulus
};

SplitRule split_rule_from_name(const std::string& name);

/// Circle contour for resolvent quadrature.
struct ContourSpec {
  Complex center;
  double radius = 0.0;
  int nodes = 64;

  static ContourSpec validated(Complex center, double radius, int nodes);
};

/// Spectral factorization L(lambda) = (lambda I - Y)(lambda I - X) together
/// with the coupling operator K solving K Y - X K = I. Construction certifies
/// X + Y = -B, Y X = A, positive spectral separation, and the K identity.
struct FactoredPencil {
  CMatrix X;
  CMatrix Y;
  CMatrix K;
  SpectrumInfo spec_x;
  SpectrumInfo spec_y;
  std::string method;  // "schur-split" or "bernoulli"
};

/// Residual scale ||X||^2 + ||B|| ||X|| + ||A|| used by the root-equation
/// tolerances.
double root_equation_scale(const PencilSystem& p, const CMatrix& root);

/// Factor the pencil through the invariant subspaces of the companion
/// linearization. The selected half of the spectrum becomes spec(X); the
/// subspace must be a graph over the state space (top block invertible).
/// Throws ErrorKind::infeasible when the split has no positive separation,
/// takes the wrong count, or is not a graph.
FactoredPencil factor_spectral(const PencilSystem& p,
                               SplitRule rule = SplitRule::largest_gap_re,
                               double sep_min = 1e-8);

/// Same, with a caller-supplied predicate choosing spec(X).
FactoredPencil factor_spectral(const PencilSystem& p,
                               const std::function<bool(Complex)>& select,
                               double sep_min = 1e-8);

/// Fixed-point iteration X_{k+1} = -B^{-1} (A + X_k^2) from X_0 = 0.
/// Requires B invertible with 4 ||B^-1|| ||B^-1 A|| < 1 (checked), which
/// guarantees convergence to the small root.
FactoredPencil factor_bernoulli(const PencilSystem& p, int max_iter = 200,
                                double tol = 1e-13);

/// Coupling operator as the unique solution of K Y - X K = I.
CMatrix coupling_K_sylvester(const FactoredPencil& f);

/// Coupling operator as the contour integral of the pencil resolvent over a
/// circle enclosing spec(Y) only (trapezoidal quadrature; node count doubles
/// until two successive values agree to quad_tol, or the cap is reached).
/// A circle around spec(X) instead yields -K; a circle enclosing nothing, 0.
CMatrix coupling_K_contour(const PencilSystem& p, const FactoredPencil& f,
                           const ContourSpec& contour, double quad_tol = 1e-10,
                           int node_cap = 4096);

/// Default contour around spec(Y): centered at the eigenvalue mean with
/// radius 1.5x their spread, shrunk if necessary to keep spec(X) outside.
/// Throws ErrorKind::infeasible when no such circle exists.
ContourSpec default_contour_around_y(const FactoredPencil& f);

/// Residuals of the resolvent identity
///   K (lambda I - Y)^-1 - (lambda I - X)^-1 K = L^-1(lambda)
/// and of the left root relation K Y^2 + B K Y + A K = 0.
struct IdentityReport {
  double resolvent_identity_residual = 0.0;
  double left_root_residual = 0.0;
};

IdentityReport verify_identities(const PencilSystem& p,
                                 const FactoredPencil& f, Complex lambda);

}  // namespace pencilkit
