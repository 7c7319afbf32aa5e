#include "pencilkit/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pencilkit/errors.hpp"

namespace pencilkit {

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const double frob = m.norm();
  if (frob == 0.0) return 0.0;
  CVector v = CVector::Ones(m.cols());
  v /= v.norm();
  double sigma = 0.0;
  double prev = -1.0;
  for (int it = 0; it < 60; ++it) {
    CVector w = m.adjoint() * (m * v);
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    sigma = std::sqrt(wn);
    v = w / wn;
    if (prev >= 0.0 && std::abs(sigma - prev) <= 1e-10 * sigma) return sigma;
    prev = sigma;
  }
  // Not settled; the Frobenius norm is a safe upper bound for tolerances.
  return frob;
}

double hermiticity_residual(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return spectral_norm(m - m.adjoint());
}

CMatrix solve_sylvester(const CMatrix& x, const CMatrix& y, const CMatrix& c) {
  const Index n = x.rows();
  const Index p = y.rows();
  if (x.cols() != n || y.cols() != p || c.rows() != n || c.cols() != p)
    throw structural_error("solve_sylvester: dimension mismatch");
  if (n == 0 || p == 0) return CMatrix::Zero(n, p);

  Eigen::ComplexSchur<CMatrix> sx(x), sy(y);
  const CMatrix& tx = sx.matrixT();
  const CMatrix& ty = sy.matrixT();
  const CMatrix& qx = sx.matrixU();
  const CMatrix& qy = sy.matrixU();

  // K Y - X K = C  becomes  Kh Ty - Tx Kh = Ch with Kh = Qx* K Qy.
  CMatrix ch = qx.adjoint() * c * qy;
  CMatrix kh = CMatrix::Zero(n, p);
  const double scale = spectral_norm(x) + spectral_norm(y);
  const double tiny = 1e-14 * (scale > 0 ? scale : 1.0);
  for (Index j = 0; j < p; ++j) {
    CVector rhs = ch.col(j);
    for (Index i = 0; i < j; ++i) rhs -= ty(i, j) * kh.col(i);
    CMatrix coef = ty(j, j) * CMatrix::Identity(n, n) - tx;
    // coef is upper triangular; back-substitute.
    for (Index i = n - 1; i >= 0; --i) {
      Complex s = rhs(i);
      for (Index k = i + 1; k < n; ++k) s -= coef(i, k) * kh(k, j);
      if (std::abs(coef(i, i)) <= tiny)
        throw infeasible_error(
            "solve_sylvester: spectra of X and Y overlap, no unique solution");
      kh(i, j) = s / coef(i, i);
    }
  }
  return qx * kh * qy.adjoint();
}

namespace {

// Swap the diagonal entries at positions (k, k+1) of an upper-triangular T
// by a unitary similarity, accumulating the transform into Q.
void swap_schur_entries(CMatrix& t, CMatrix& q, Index k) {
  const Complex t11 = t(k, k);
  const Complex t22 = t(k + 1, k + 1);
  const Complex t12 = t(k, k + 1);
  if (std::abs(t11 - t22) == 0.0) return;  // identical eigenvalues, nothing to do
  // Eigenvector of [[t11, t12], [0, t22]] for t22 is (t12, t22 - t11).
  const Complex a = t12;
  const Complex b = t22 - t11;
  const double nrm = std::sqrt(std::norm(a) + std::norm(b));
  const Complex c1 = a / nrm;
  const Complex c2 = b / nrm;
  CMatrix g(2, 2);
  g << c1, -std::conj(c2), c2, std::conj(c1);
  t.middleCols(k, 2) = t.middleCols(k, 2) * g;
  t.middleRows(k, 2) = g.adjoint() * t.middleRows(k, 2);
  q.middleCols(k, 2) = q.middleCols(k, 2) * g;
  t(k + 1, k) = Complex(0, 0);
}

}  // namespace

CMatrix invariant_subspace(const CMatrix& m,
                           const std::function<bool(Complex)>& select,
                           std::vector<Complex>& eigs_in,
                           std::vector<Complex>& eigs_out) {
  const Index n = m.rows();
  if (m.cols() != n) throw structural_error("invariant_subspace: matrix not square");
  Eigen::ComplexSchur<CMatrix> schur(m);
  if (schur.info() != Eigen::Success)
    throw divergence_error("invariant_subspace: Schur factorization failed");
  CMatrix t = schur.matrixT();
  CMatrix q = schur.matrixU();

  // Bubble all selected eigenvalues to the leading block.
  Index front = 0;
  for (Index i = 0; i < n; ++i) {
    if (!select(t(i, i))) continue;
    for (Index k = i; k > front; --k) swap_schur_entries(t, q, k - 1);
    ++front;
  }
  eigs_in.clear();
  eigs_out.clear();
  for (Index i = 0; i < n; ++i) {
    if (i < front)
      eigs_in.push_back(t(i, i));
    else
      eigs_out.push_back(t(i, i));
  }
  return q.leftCols(front);
}

double spectral_separation(const std::vector<Complex>& a,
                           const std::vector<Complex>& b) {
  double sep = std::numeric_limits<double>::infinity();
  for (const Complex& za : a)
    for (const Complex& zb : b) sep = std::min(sep, std::abs(za - zb));
  return sep;
}

std::vector<Complex> eigenvalues_of(const CMatrix& m) {
  if (m.rows() == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> es(m, /*computeEigenvectors=*/false);
  std::vector<Complex> out(m.rows());
  for (Index i = 0; i < m.rows(); ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double condition_estimate(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  Eigen::PartialPivLU<CMatrix> lu(m);
  const double rc = lu.rcond();
  if (!(rc > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / rc;
}

}  // namespace pencilkit
