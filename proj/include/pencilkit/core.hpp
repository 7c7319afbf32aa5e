#pragma once

#include <utility>
#include <vector>

#include "pencilkit/types.hpp"

namespace pencilkit {

/// Triple (A, phi, sigma) with the defect identity  A - A* = i phi* sigma phi.
/// A acts on the internal space H (n x n), phi maps H into the channel space
/// E (m x n), and sigma is the Hermitian channel signature (m x m). All values
/// are immutable after construction; construction enforces the invariants.
struct Colligation {
  CMatrix A;
  CMatrix phi;
  CMatrix sigma;

  Index dim_state() const { return A.rows(); }
  Index dim_channel() const { return phi.rows(); }

  /// Validating factory. Throws ErrorKind::structural on dimension mismatch
  /// and ErrorKind::validation when the defect identity or the hermiticity
  /// of sigma fail their tolerances.
  static Colligation validated(CMatrix A, CMatrix phi, CMatrix sigma,
                               double tol_defect_rel = 1e-10,
                               double tol_sigma_rel = 1e-12);
};

/// A colligation together with a Hermitian dissipation operator B, defining
/// the quadratic pencil L(lambda) = lambda^2 I + lambda B + A.
struct PencilSystem {
  Colligation colligation;
  CMatrix B;

  Index dim_state() const { return colligation.dim_state(); }
  Index dim_channel() const { return colligation.dim_channel(); }
  const CMatrix& A() const { return colligation.A; }
  const CMatrix& phi() const { return colligation.phi; }
  const CMatrix& sigma() const { return colligation.sigma; }

  static PencilSystem validated(Colligation c, CMatrix B,
                                double tol_herm_rel = 1e-12);
};

/// Labeled spectrum half of a factorization, with the certified distance to
/// the complementary half.
struct SpectrumInfo {
  std::vector<Complex> eigenvalues;
  double separation = 0.0;
};

/// Diagnostic report for the colligation invariants.
struct ColligationReport {
  double defect_residual = 0.0;        // ||(A - A*) - i phi* sigma phi||
  double sigma_herm_residual = 0.0;    // ||sigma - sigma*||
  double defect_tolerance = 0.0;
  double sigma_tolerance = 0.0;
  bool defect_pass = false;
  bool sigma_pass = false;
  bool pass() const { return defect_pass && sigma_pass; }
};

/// Measure the defect identity and sigma hermiticity without constructing
/// a Colligation (so failing data can be diagnosed).
ColligationReport validate_colligation(const CMatrix& A, const CMatrix& phi,
                                       const CMatrix& sigma,
                                       double tol_defect_rel = 1e-10,
                                       double tol_sigma_rel = 1e-12);

/// Factor the non-Hermitian part of A into channel form:
/// returns (phi, sigma) with A - A* = i phi* sigma phi, sigma = diag(+/-1).
/// Eigenvalues of (A - A*)/i with magnitude below rank_cutoff_rel * ||A||
/// are dropped, so rank(phi) equals the numerical rank of A - A*. Channels
/// are ordered by decreasing eigenvalue of (A - A*)/i.
std::pair<CMatrix, CMatrix> embed_defect(const CMatrix& A,
                                         double rank_cutoff_rel = 1e-12);

/// L(lambda) = lambda^2 I + lambda B + A.
CMatrix pencil_eval(const PencilSystem& p, Complex lambda);

/// L(lambda)^-1. Throws ErrorKind::spectral_point when L(lambda) is
/// numerically singular (condition estimate above 1/eps).
CMatrix resolvent_eval(const PencilSystem& p, Complex lambda);

/// Eigenvalues of the pencil (where det L(lambda) = 0), computed from the
/// companion linearization acting on col[h, h'].
std::vector<Complex> pencil_spectrum(const PencilSystem& p);

/// Companion linearization [[0, I], [-A, -B]] of the pencil.
CMatrix companion_linearization(const PencilSystem& p);

}  // namespace pencilkit
