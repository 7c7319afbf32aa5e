#pragma once

#include <functional>
#include <vector>

#include "pencilkit/types.hpp"

namespace pencilkit {

/// Spectral norm estimate by power iteration on M*M, started from a fixed
/// deterministic vector. Falls back to the Frobenius norm (an upper bound)
/// if the iteration has not settled. Used wherever a tolerance is stated
/// relative to an operator norm, so that tolerance checks are reproducible.
double spectral_norm(const CMatrix& m);

/// Hermiticity defect ||M - M*||.
double hermiticity_residual(const CMatrix& m);

/// Unique solution K of the Sylvester relation  K*Y - X*K = C,
/// by complex Schur reduction of X and Y and back-substitution.
/// Throws ErrorKind::infeasible when spec(X) and spec(Y) intersect
/// (a diagonal coefficient Ty(j,j) - Tx(i,i) vanishes numerically).
CMatrix solve_sylvester(const CMatrix& x, const CMatrix& y, const CMatrix& c);

/// Invariant subspace of a square matrix for a selected subset of its
/// spectrum, via complex Schur factorization with eigenvalue reordering.
/// Returns an orthonormal basis (columns) of the subspace spanned by the
/// Schur vectors whose eigenvalues satisfy `select`; `eigs_in`/`eigs_out`
/// receive the selected and complementary eigenvalues.
CMatrix invariant_subspace(const CMatrix& m,
                           const std::function<bool(Complex)>& select,
                           std::vector<Complex>& eigs_in,
                           std::vector<Complex>& eigs_out);

/// Minimal distance between two point sets in the complex plane.
double spectral_separation(const std::vector<Complex>& a,
                           const std::vector<Complex>& b);

/// All eigenvalues of a general complex matrix.
std::vector<Complex> eigenvalues_of(const CMatrix& m);

/// Condition-number estimate ||M|| * ||M^-1|| via LU; returns +inf when the
/// factorization is numerically singular.
double condition_estimate(const CMatrix& m);

}  // namespace pencilkit
