#pragma once

#include <optional>
#include <vector>

#include "pencilkit/types.hpp"

namespace pencilkit {

/// Quadrature discretization of a weighted function space on the real line:
/// nodes x_i with positive masses w_i, a real multiplier b(x_i) per node,
/// channel values v (one row per node, one column per channel), and the
/// +/-1 channel signature J. Operators on the grid act on coordinate
/// vectors (f(x_i))_i; adjoints are taken in the weighted inner product
/// <f, g> = sum_i w_i f_i conj(g_i).
struct GridModel {
  RVector nodes;
  RVector weights;
  RVector mult_b;  // may be empty (treated as zero)
  CMatrix v;       // N x r channel values; may be empty
  RVector jdiag;   // r entries, each +1 or -1

  Index size() const { return nodes.size(); }
  static GridModel validated(RVector nodes, RVector weights,
                             RVector mult_b = RVector(), CMatrix v = CMatrix(),
                             RVector jdiag = RVector());
};

/// Node-sampled Hermitian kernel: K(i, j) ~ K(x_i, x_j) with
/// K(x, t)* = K(t, x), i.e. the sample matrix is Hermitian.
struct KernelOnGrid {
  CMatrix K;
  static KernelOnGrid validated(CMatrix K, double tol = 1e-12);
};

/// Rank-r kernel K(x_i, x_j) = sum_ab v_ia J_ab conj(v_jb) built from the
/// grid's channel data.
KernelOnGrid kernel_from_channels(const GridModel& g);

/// Adjoint in the weighted inner product: W^-1 M* W.
CMatrix weighted_adjoint(const CMatrix& m, const RVector& weights);
/// ||M - W^-1 M* W||.
double weighted_hermiticity_residual(const CMatrix& m, const RVector& weights);

/// Discrete principal-value Hilbert transform solving the commutator
/// equation [X, diag(x)] = i K~ on the off-diagonal:
///   X_ij = n_i delta_ij + i K_ij w_j / (x_j - x_i)   (j != i).
/// The diagonal of the kernel term is omitted (principal value).
CMatrix hilbert_root(const GridModel& g, const KernelOnGrid& k,
                     const RVector& n_mult = RVector());

/// Model quadruple in the spectral representation of the right root:
/// X~ = diag(x), B~ = diag(b) - (PV kernel term), Y~ = diag(-b-x) + (PV
/// kernel term), A~ = Y~ X~. X~ + Y~ = -B~ holds exactly.
struct ModelQuadruple {
  CMatrix X;
  CMatrix B;
  CMatrix Y;
  CMatrix A;
};

ModelQuadruple model_quadruple(const GridModel& g, const KernelOnGrid& k);

/// Discrete Stieltjes-transform solution of {D, diag(x)} = -K~ on a grid
/// with strictly positive nodes:
///   D_ij = -K_ij w_j / (x_j + x_i).
/// The (x + t) factor cancels in the anticommutator, so the identity holds
/// to rounding.
CMatrix stieltjes_anticommutator(const GridModel& g, const KernelOnGrid& k);

/// General signed-grid solution of {D, diag(x)} = -K~: the Stieltjes term
/// plus a swap term n(x_i) f(-x_i) on antipodal node pairs. Pairs must have
/// equal weights and even n; a nonzero n on an unpaired node is an error.
/// Antipodal kernel entries (x_i + x_j = 0) are annihilated by the
/// anticommutator and are skipped, mirroring the principal-value convention.
CMatrix anticommutator_general(const GridModel& g, const KernelOnGrid& k,
                               const RVector& n_sym = RVector());

/// Canonical form of an anti-commuting Hermitian pair {D, B} = 0:
/// orthonormal bases of the paired blocks G+ and G- and the untouched block
/// G0, the positive block B- (restriction of -B to G-), the commuting
/// modulus |Gamma| >= 0 of the off-diagonal coupling, and the pairing
/// unitary (reduced to the identity by the basis gauge chosen here).
struct AnticommutingDecomposition {
  CMatrix q_plus;    // n x r basis of G+
  CMatrix q_minus;   // n x r basis of G-
  CMatrix q_zero;    // n x (n - 2r) basis of G0
  CMatrix b_minus;   // r x r Hermitian positive
  CMatrix gamma_abs; // r x r, diag of singular values >= 0
  CMatrix v_map;     // r x r unitary G- -> G+ (identity in this gauge)
  CMatrix b_zero;    // block of B on G0
  CMatrix d_zero;    // block of D on G0
  double corner_residual = 0.0;  // max ||P+ D P+||, ||P- D P-||
};

AnticommutingDecomposition anticommuting_canonical_form(
    const CMatrix& B, const CMatrix& D, double tol_rel = 1e-10);

/// Reassemble (B, D) from the canonical blocks; used for the round-trip
/// residual check.
std::pair<CMatrix, CMatrix> reconstruct_anticommuting(
    const AnticommutingDecomposition& dec);

/// Discretized triangular model of the continuous chain factor on [0, l]:
/// left-rectangle nodes x_i = i h, cumulative integrals by the strictly
/// lower-triangular left rule, roots w1/w2 of lambda^2 + lambda b + a per
/// node and the closed-form coupling kernel
///   K(x, t) = 1 / (w2(x) - w1(t) - i int_t^x dxi / (w2 - w1)).
struct VolterraModel {
  double l = 0.0;
  RVector x;        // nodes i*h
  double h = 0.0;   // spacing l/N
  RVector a;
  RVector b;
  CVector w1;
  CVector w2;
  CMatrix kernel;   // strictly lower triangle meaningful
  CMatrix A;        // diag(a) + i * cumulative
  CMatrix B;        // diag(b)
  CMatrix X;        // diag(w1) + i K h (strictly lower)
  CMatrix Y;        // diag(w2) - i K h (strictly lower)
};

struct ContinuousLimitSpec;  // from coupling.hpp

VolterraModel volterra_build(const ContinuousLimitSpec& spec, Index n_nodes);

/// Characteristic function of the (A, B) Volterra model at lambda, with the
/// channel map integrating over [0, l] (sigma = 1).
Complex volterra_charfn(const VolterraModel& m, Complex lambda);

/// Max over strictly-lower grid pairs of the kernel-equation residual
///   |(w2(x_i) - w1(x_j)) K_ij - i sum_{j<=k<i} K_ik K_kj h - 1|.
double volterra_kernel_residual(const VolterraModel& m);

/// Scalar rank-one boundary-problem data on [a, b]: uniform midpoint grid,
/// channel profile v, multiplier b(x), signature J = +/-1. Derived fields:
/// omega = J |v|^2 and zeta(lambda, x) = lambda + x + b(x).
struct RiemannProblemData {
  double a = 0.0;
  double b = 0.0;
  RVector x;        // midpoints
  double h = 0.0;
  CVector v;
  RVector b_of_x;
  double J = 1.0;
  RVector omega;    // J |v|^2

  static RiemannProblemData validated(double a, double b, Index nodes,
                                      CVector v, RVector b_of_x, double J);
};

/// Characteristic function by the boundary-problem route: the canonical
/// function of the scalar jump d = (zeta - pi omega)/(zeta + pi omega) is
/// built from the log-Cauchy integral of d (branch unwrapped along the
/// grid, anchored by d -> 1 off the support), the square root
/// [zeta^2 - pi^2 omega^2]^{1/2} shares that branch, and the polynomial
/// term is zero under the S(infinity) = 1 normalization.
Complex riemann_charfn_scalar(const RiemannProblemData& r, Complex lambda);

/// Same quantity through the grid resolvent of the model pair
/// (diag(x), -diag(x+b) + PV kernel term): S = 1 - i phi (lambda - X)^-1
/// (lambda - Y)^-1 phi* J. Used as the cross-check route.
Complex riemann_direct_charfn(const RiemannProblemData& r, Complex lambda);

}  // namespace pencilkit
