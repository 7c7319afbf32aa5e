#include "pencilkit/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"

namespace pencilkit {

ColligationReport validate_colligation(const CMatrix& A, const CMatrix& phi,
                                       const CMatrix& sigma,
                                       double tol_defect_rel,
                                       double tol_sigma_rel) {
  const Index n = A.rows();
  if (A.cols() != n) throw structural_error("colligation: A must be square");
  if (phi.size() > 0 && phi.cols() != n)
    throw structural_error("colligation: phi must have as many columns as A");
  const Index m = phi.rows();
  if (sigma.rows() != m || sigma.cols() != m)
    throw structural_error("colligation: sigma must be m x m with m = rows(phi)");

  ColligationReport rep;
  const double anorm = spectral_norm(A);
  CMatrix defect = A - A.adjoint();
  if (m > 0) defect -= kImag * (phi.adjoint() * sigma * phi);
  rep.defect_residual = spectral_norm(defect);
  rep.sigma_herm_residual = hermiticity_residual(sigma);
  rep.defect_tolerance = tol_defect_rel * std::max(anorm, 1e-300);
  rep.sigma_tolerance = tol_sigma_rel * std::max(spectral_norm(sigma), 1e-300);
  rep.defect_pass = rep.defect_residual <= std::max(rep.defect_tolerance,
                                                    tol_defect_rel);
  rep.sigma_pass = rep.sigma_herm_residual <= std::max(rep.sigma_tolerance,
                                                       tol_sigma_rel);
  return rep;
}

Colligation Colligation::validated(CMatrix A, CMatrix phi, CMatrix sigma,
                                   double tol_defect_rel,
                                   double tol_sigma_rel) {
  const ColligationReport rep =
      validate_colligation(A, phi, sigma, tol_defect_rel, tol_sigma_rel);
  if (!rep.sigma_pass)
    throw validation_error("colligation: sigma is not Hermitian");
  if (!rep.defect_pass)
    throw validation_error("colligation: defect identity A - A* = i phi* sigma phi fails");
  return Colligation{std::move(A), std::move(phi), std::move(sigma)};
}

PencilSystem PencilSystem::validated(Colligation c, CMatrix B,
                                     double tol_herm_rel) {
  if (B.rows() != c.dim_state() || B.cols() != c.dim_state())
    throw structural_error("pencil system: B must match the state dimension");
  const double res = hermiticity_residual(B);
  const double tol = tol_herm_rel * std::max(spectral_norm(B), 1e-300);
  if (res > std::max(tol, tol_herm_rel))
    throw validation_error("pencil system: B is not Hermitian");
  return PencilSystem{std::move(c), std::move(B)};
}

std::pair<CMatrix, CMatrix> embed_defect(const CMatrix& A,
                                         double rank_cutoff_rel) {
  const Index n = A.rows();
  if (A.cols() != n) throw structural_error("embed_defect: A must be square");
  // (A - A*)/i is Hermitian; its spectral factorization gives the channels.
  CMatrix m = (A - A.adjoint()) / kImag;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  const RVector d = es.eigenvalues();
  const CMatrix u = es.eigenvectors();

  const double cutoff = rank_cutoff_rel * std::max(spectral_norm(A), 1e-300);
  std::vector<Index> keep;
  for (Index i = 0; i < n; ++i)
    if (std::abs(d(i)) > cutoff) keep.push_back(i);
  // Decreasing eigenvalue: positive channels first.
  std::sort(keep.begin(), keep.end(),
            [&](Index a, Index b) { return d(a) > d(b); });

  const Index r = static_cast<Index>(keep.size());
  CMatrix phi(r, n);
  CMatrix sigma = CMatrix::Zero(r, r);
  for (Index k = 0; k < r; ++k) {
    const Index i = keep[static_cast<size_t>(k)];
    phi.row(k) = std::sqrt(std::abs(d(i))) * u.col(i).adjoint();
    sigma(k, k) = d(i) > 0 ? 1.0 : -1.0;
  }
  return {phi, sigma};
}

CMatrix pencil_eval(const PencilSystem& p, Complex lambda) {
  const Index n = p.dim_state();
  return lambda * lambda * CMatrix::Identity(n, n) + lambda * p.B + p.A();
}

CMatrix resolvent_eval(const PencilSystem& p, Complex lambda) {
  const CMatrix l = pencil_eval(p, lambda);
  Eigen::PartialPivLU<CMatrix> lu(l);
  // Singularity is judged against the pencil's own coefficient scale, so a
  // well-scaled but nearly singular L(lambda) is still rejected.
  const double pencil_scale =
      std::max(std::norm(lambda) + std::abs(lambda) * spectral_norm(p.B) +
                   spectral_norm(p.A()),
               1e-300);
  const double rc = lu.rcond();
  const double smallest_sv_est = rc > 0 ? spectral_norm(l) * rc : 0.0;
  if (smallest_sv_est <= std::numeric_limits<double>::epsilon() * pencil_scale)
    throw spectral_point_error(
        "resolvent: lambda is at (or too close to) the pencil spectrum");
  return lu.solve(CMatrix::Identity(p.dim_state(), p.dim_state()));
}

CMatrix companion_linearization(const PencilSystem& p) {
  const Index n = p.dim_state();
  CMatrix c = CMatrix::Zero(2 * n, 2 * n);
  c.topRightCorner(n, n) = CMatrix::Identity(n, n);
  c.bottomLeftCorner(n, n) = -p.A();
  c.bottomRightCorner(n, n) = -p.B;
  return c;
}

std::vector<Complex> pencil_spectrum(const PencilSystem& p) {
  return eigenvalues_of(companion_linearization(p));
}

}  // namespace pencilkit
