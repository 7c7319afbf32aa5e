#include "pencilkit/models.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "pencilkit/coupling.hpp"
#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"

namespace pencilkit {

GridModel GridModel::validated(RVector nodes, RVector weights, RVector mult_b,
                               CMatrix v, RVector jdiag) {
  const Index n = nodes.size();
  if (weights.size() != n)
    throw grid_error("grid: node and weight counts differ");
  for (Index i = 0; i + 1 < n; ++i)
    if (!(nodes(i) < nodes(i + 1)))
      throw grid_error("grid: nodes must be strictly increasing");
  for (Index i = 0; i < n; ++i)
    if (!(weights(i) > 0)) throw grid_error("grid: weights must be positive");
  if (mult_b.size() != 0 && mult_b.size() != n)
    throw grid_error("grid: multiplier length mismatch");
  if (v.size() != 0 && v.rows() != n)
    throw grid_error("grid: channel data must have one row per node");
  if (v.size() != 0 && jdiag.size() != v.cols())
    throw grid_error("grid: signature length must match channel count");
  for (Index i = 0; i < jdiag.size(); ++i)
    if (jdiag(i) != 1.0 && jdiag(i) != -1.0)
      throw grid_error("grid: signature entries must be +1 or -1");
  return GridModel{std::move(nodes), std::move(weights), std::move(mult_b),
                   std::move(v), std::move(jdiag)};
}

KernelOnGrid KernelOnGrid::validated(CMatrix K, double tol) {
  if (K.rows() != K.cols()) throw grid_error("kernel: must be square");
  const double res = hermiticity_residual(K);
  if (res > tol * std::max(1.0, spectral_norm(K)))
    throw grid_error("kernel: K(x,t)* = K(t,x) violated");
  return KernelOnGrid{std::move(K)};
}

KernelOnGrid kernel_from_channels(const GridModel& g) {
  const Index n = g.size();
  if (g.v.size() == 0) return KernelOnGrid{CMatrix::Zero(n, n)};
  CMatrix k = g.v * g.jdiag.asDiagonal().toDenseMatrix().cast<Complex>() *
              g.v.adjoint();
  return KernelOnGrid{std::move(k)};
}

CMatrix weighted_adjoint(const CMatrix& m, const RVector& weights) {
  CMatrix out = m.adjoint();
  for (Index i = 0; i < out.rows(); ++i)
    for (Index j = 0; j < out.cols(); ++j)
      out(i, j) *= weights(j) / weights(i);
  return out;
}

double weighted_hermiticity_residual(const CMatrix& m, const RVector& weights) {
  return spectral_norm(m - weighted_adjoint(m, weights));
}

namespace {

void require_kernel_size(const GridModel& g, const KernelOnGrid& k) {
  if (k.K.rows() != g.size())
    throw grid_error("kernel size does not match the grid");
}

}  // namespace

CMatrix hilbert_root(const GridModel& g, const KernelOnGrid& k,
                     const RVector& n_mult) {
  require_kernel_size(g, k);
  const Index n = g.size();
  if (n_mult.size() != 0 && n_mult.size() != n)
    throw grid_error("hilbert_root: multiplier length mismatch");
  CMatrix x = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    if (n_mult.size() != 0) x(i, i) = n_mult(i);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      x(i, j) = kImag * k.K(i, j) * g.weights(j) / (g.nodes(j) - g.nodes(i));
    }
  }
  return x;
}

ModelQuadruple model_quadruple(const GridModel& g, const KernelOnGrid& k) {
  require_kernel_size(g, k);
  const Index n = g.size();
  ModelQuadruple q;
  q.X = CMatrix::Zero(n, n);
  q.B = CMatrix::Zero(n, n);
  q.Y = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const double bi = g.mult_b.size() ? g.mult_b(i) : 0.0;
    q.X(i, i) = g.nodes(i);
    q.B(i, i) = bi;
    q.Y(i, i) = -bi - g.nodes(i);
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Complex pv =
          kImag * k.K(i, j) * g.weights(j) / (g.nodes(j) - g.nodes(i));
      q.B(i, j) = -pv;
      q.Y(i, j) = pv;
    }
  }
  q.A = q.Y * q.X;
  return q;
}

CMatrix stieltjes_anticommutator(const GridModel& g, const KernelOnGrid& k) {
  require_kernel_size(g, k);
  const Index n = g.size();
  for (Index i = 0; i < n; ++i)
    if (!(g.nodes(i) > 0))
      throw Error(ErrorKind::grid,
                  "stieltjes: all nodes must be strictly positive");
  CMatrix d(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      d(i, j) = -k.K(i, j) * g.weights(j) / (g.nodes(j) + g.nodes(i));
  return d;
}

CMatrix anticommutator_general(const GridModel& g, const KernelOnGrid& k,
                               const RVector& n_sym) {
  require_kernel_size(g, k);
  const Index n = g.size();
  const double scale = g.nodes.cwiseAbs().maxCoeff();
  const double tol = 1e-12 * std::max(scale, 1.0);
  if (n_sym.size() != 0 && n_sym.size() != n)
    throw grid_error("anticommutator: swap multiplier length mismatch");

  std::vector<Index> pair(static_cast<size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    if (std::abs(g.nodes(i)) <= tol)
      throw grid_error("anticommutator: nodes must avoid zero");
    for (Index j = 0; j < n; ++j)
      if (std::abs(g.nodes(i) + g.nodes(j)) <= tol) pair[static_cast<size_t>(i)] = j;
  }

  CMatrix d = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index p = pair[static_cast<size_t>(i)];
    const double ni = n_sym.size() ? n_sym(i) : 0.0;
    if (ni != 0.0) {
      if (p < 0)
        throw grid_error("anticommutator: swap term requested on an unpaired node");
      if (std::abs(g.weights(i) - g.weights(p)) > tol)
        throw grid_error("anticommutator: paired nodes must carry equal weights");
      if (n_sym.size() && std::abs(ni - n_sym(p)) > tol)
        throw grid_error("anticommutator: swap multiplier must be even");
      if (!(ni >= 0))
        throw grid_error("anticommutator: swap multiplier must be nonnegative");
      d(i, p) += ni;
    }
    for (Index j = 0; j < n; ++j) {
      if (p == j) continue;  // annihilated by the anticommutator
      d(i, j) -= k.K(i, j) * g.weights(j) / (g.nodes(j) + g.nodes(i));
    }
  }
  return d;
}

AnticommutingDecomposition anticommuting_canonical_form(const CMatrix& B,
                                                        const CMatrix& D,
                                                        double tol_rel) {
  const Index n = B.rows();
  if (B.cols() != n || D.rows() != n || D.cols() != n)
    throw structural_error("anticommuting form: square matrices of equal size required");
  const double scale =
      std::max({spectral_norm(B), spectral_norm(D), 1e-300});
  if (hermiticity_residual(B) > tol_rel * scale ||
      hermiticity_residual(D) > tol_rel * scale)
    throw validation_error("anticommuting form: B and D must be Hermitian");
  const double anti_scale = std::max(spectral_norm(B) * spectral_norm(D), 1.0);
  if (spectral_norm(D * B + B * D) > 10 * tol_rel * anti_scale)
    throw validation_error("anticommuting form: {D, B} != 0 beyond tolerance");

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (B + B.adjoint()));
  const RVector mu = es.eigenvalues();
  const CMatrix u = es.eigenvectors();
  const double ker_tol = tol_rel * std::max(spectral_norm(B), 1e-300);

  std::vector<Index> plus, minus, zero;
  for (Index i = 0; i < n; ++i) {
    if (mu(i) > ker_tol)
      plus.push_back(i);
    else if (mu(i) < -ker_tol)
      minus.push_back(i);
    else
      zero.push_back(i);
  }
  const auto gather = [&](const std::vector<Index>& idx) {
    CMatrix m(n, static_cast<Index>(idx.size()));
    for (size_t c = 0; c < idx.size(); ++c) m.col(static_cast<Index>(c)) = u.col(idx[c]);
    return m;
  };
  CMatrix hp = gather(plus);
  CMatrix hm = gather(minus);
  CMatrix h0 = gather(zero);

  // Hermitian corner blocks of D on the signed subspaces must vanish.
  double corner = 0.0;
  if (hp.cols() > 0) corner = std::max(corner, spectral_norm(CMatrix(hp.adjoint() * D * hp)));
  if (hm.cols() > 0) corner = std::max(corner, spectral_norm(CMatrix(hm.adjoint() * D * hm)));

  // Coupling block and its singular structure. Full factors so the
  // uncoupled directions of both signed subspaces are recoverable.
  CMatrix gblock = hp.adjoint() * D * hm;
  CMatrix usv = CMatrix::Identity(hp.cols(), hp.cols());
  CMatrix vsv = CMatrix::Identity(hm.cols(), hm.cols());
  RVector singulars = RVector::Zero(std::min(hp.cols(), hm.cols()));
  if (gblock.size() > 0) {
    Eigen::JacobiSVD<CMatrix> svd(gblock,
                                  Eigen::ComputeFullU | Eigen::ComputeFullV);
    usv = svd.matrixU();
    vsv = svd.matrixV();
    singulars = svd.singularValues();
  }
  const double sv_tol = tol_rel * std::max(spectral_norm(D), 1e-300);
  Index r = 0;
  for (Index i = 0; i < singulars.size(); ++i)
    if (singulars(i) > sv_tol) ++r;

  AnticommutingDecomposition dec;
  dec.corner_residual = corner;
  dec.q_plus = hp * usv.leftCols(r);
  dec.q_minus = hm * vsv.leftCols(r);
  dec.gamma_abs = CMatrix::Zero(r, r);
  for (Index i = 0; i < r; ++i) dec.gamma_abs(i, i) = singulars(i);
  dec.v_map = CMatrix::Identity(r, r);
  dec.b_minus = -(dec.q_minus.adjoint() * B * dec.q_minus);

  // Everything not coupled by Gamma joins G0 (kernel of B plus the
  // uncoupled signed directions).
  const Index extra_p = hp.cols() - r;
  const Index extra_m = hm.cols() - r;
  CMatrix q0(n, h0.cols() + extra_p + extra_m);
  Index col = 0;
  for (Index i = 0; i < h0.cols(); ++i) q0.col(col++) = h0.col(i);
  if (extra_p > 0) {
    CMatrix rest = hp * usv.rightCols(extra_p);
    for (Index i = 0; i < extra_p; ++i) q0.col(col++) = rest.col(i);
  }
  if (extra_m > 0) {
    CMatrix rest = hm * vsv.rightCols(extra_m);
    for (Index i = 0; i < extra_m; ++i) q0.col(col++) = rest.col(i);
  }
  dec.q_zero = q0;
  dec.b_zero = q0.adjoint() * B * q0;
  dec.d_zero = q0.adjoint() * D * q0;
  return dec;
}

std::pair<CMatrix, CMatrix> reconstruct_anticommuting(
    const AnticommutingDecomposition& dec) {
  const Index n = dec.q_plus.rows();
  CMatrix b = CMatrix::Zero(n, n);
  CMatrix d = CMatrix::Zero(n, n);
  const CMatrix bp = dec.v_map * dec.b_minus * dec.v_map.adjoint();
  b += dec.q_plus * bp * dec.q_plus.adjoint();
  b -= dec.q_minus * dec.b_minus * dec.q_minus.adjoint();
  const CMatrix vg = dec.v_map * dec.gamma_abs;
  d += dec.q_plus * vg * dec.q_minus.adjoint();
  d += dec.q_minus * vg.adjoint() * dec.q_plus.adjoint();
  if (dec.q_zero.cols() > 0) {
    b += dec.q_zero * dec.b_zero * dec.q_zero.adjoint();
    d += dec.q_zero * dec.d_zero * dec.q_zero.adjoint();
  }
  return {b, d};
}

namespace {

// Roots of lambda^2 + b lambda + a = 0 with a, b real. Complex pair: upper
// half-plane root first. Real pair: larger root first.
std::pair<Complex, Complex> real_quadratic_roots(double b, double a) {
  const double disc = b * b - 4.0 * a;
  if (disc >= 0) {
    const double r = std::sqrt(disc);
    return {Complex(0.5 * (-b + r), 0), Complex(0.5 * (-b - r), 0)};
  }
  const double im = 0.5 * std::sqrt(-disc);
  return {Complex(-0.5 * b, im), Complex(-0.5 * b, -im)};
}

}  // namespace

VolterraModel volterra_build(const ContinuousLimitSpec& spec, Index n_nodes) {
  if (n_nodes < 1) throw grid_error("volterra: need at least one node");
  VolterraModel m;
  m.l = spec.l;
  m.h = spec.l / static_cast<double>(n_nodes);
  m.x.resize(n_nodes);
  m.a.resize(n_nodes);
  m.b.resize(n_nodes);
  m.w1.resize(n_nodes);
  m.w2.resize(n_nodes);
  for (Index i = 0; i < n_nodes; ++i) {
    m.x(i) = static_cast<double>(i) * m.h;
    m.a(i) = spec.a_at(m.x(i));
    m.b(i) = spec.b_at(m.x(i));
    auto [w1, w2] = real_quadratic_roots(m.b(i), m.a(i));
    m.w1(i) = w1;
    m.w2(i) = w2;
    if (std::abs(w2 - w1) <= 1e-10 * std::max(1.0, std::abs(w1)))
      throw Error(ErrorKind::infeasible,
                  "volterra: degenerate roots (2 sqrt(a) == -b) at a node");
  }

  // Cumulative left-rectangle integral of 1/(w2 - w1) up to each node.
  CVector cum = CVector::Zero(n_nodes);
  for (Index i = 1; i < n_nodes; ++i)
    cum(i) = cum(i - 1) + m.h / (m.w2(i - 1) - m.w1(i - 1));

  m.kernel = CMatrix::Zero(n_nodes, n_nodes);
  for (Index i = 0; i < n_nodes; ++i)
    for (Index j = 0; j <= i; ++j)
      m.kernel(i, j) =
          1.0 / (m.w2(i) - m.w1(j) - kImag * (cum(i) - cum(j)));

  m.A = CMatrix::Zero(n_nodes, n_nodes);
  m.B = CMatrix::Zero(n_nodes, n_nodes);
  m.X = CMatrix::Zero(n_nodes, n_nodes);
  m.Y = CMatrix::Zero(n_nodes, n_nodes);
  for (Index i = 0; i < n_nodes; ++i) {
    m.A(i, i) = m.a(i);
    m.B(i, i) = m.b(i);
    m.X(i, i) = m.w1(i);
    m.Y(i, i) = m.w2(i);
    for (Index j = 0; j < i; ++j) {
      m.A(i, j) = kImag * m.h;
      m.X(i, j) = kImag * m.kernel(i, j) * m.h;
      m.Y(i, j) = -m.X(i, j);
    }
  }
  return m;
}

Complex volterra_charfn(const VolterraModel& m, Complex lambda) {
  const Index n = m.x.size();
  CMatrix l = lambda * lambda * CMatrix::Identity(n, n) + lambda * m.B + m.A;
  Eigen::PartialPivLU<CMatrix> lu(l);
  if (!(lu.rcond() > 1e-14))
    throw spectral_point_error("volterra charfn: lambda at the model spectrum");
  // phi integrates over [0, l] (row of weights); phi* is the constant 1.
  const CVector ones = CVector::Ones(n);
  const CVector sol = lu.solve(ones);
  Complex acc(0, 0);
  for (Index i = 0; i < n; ++i) acc += m.h * sol(i);
  return Complex(1, 0) - kImag * acc;
}

double volterra_kernel_residual(const VolterraModel& m) {
  const Index n = m.x.size();
  double worst = 0.0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < i; ++j) {
      Complex conv(0, 0);
      for (Index k = j; k < i; ++k)
        conv += m.kernel(i, k) * m.kernel(k, j) * m.h;
      const Complex res =
          (m.w2(i) - m.w1(j)) * m.kernel(i, j) - kImag * conv - 1.0;
      worst = std::max(worst, std::abs(res));
    }
  return worst;
}

RiemannProblemData RiemannProblemData::validated(double a, double b,
                                                 Index nodes, CVector v,
                                                 RVector b_of_x, double J) {
  if (!(a < b)) throw grid_error("riemann: need a < b");
  if (nodes < 2) throw grid_error("riemann: need at least two nodes");
  if (v.size() != nodes || b_of_x.size() != nodes)
    throw grid_error("riemann: v and b samples must match the node count");
  if (J != 1.0 && J != -1.0) throw grid_error("riemann: J must be +1 or -1");
  RiemannProblemData r;
  r.a = a;
  r.b = b;
  r.h = (b - a) / static_cast<double>(nodes);
  r.x.resize(nodes);
  for (Index i = 0; i < nodes; ++i)
    r.x(i) = a + (static_cast<double>(i) + 0.5) * r.h;
  r.v = std::move(v);
  r.b_of_x = std::move(b_of_x);
  r.J = J;
  r.omega.resize(nodes);
  for (Index i = 0; i < nodes; ++i) r.omega(i) = J * std::norm(r.v(i));
  return r;
}

namespace {

struct RiemannPointData {
  CVector zeta;
  CVector d;
  CVector logd;  // branch-continuous along the grid
};

RiemannPointData riemann_point_data(const RiemannProblemData& r,
                                    Complex lambda) {
  const Index n = r.x.size();
  RiemannPointData out;
  out.zeta.resize(n);
  out.d.resize(n);
  out.logd.resize(n);
  const double scale = std::max(1.0, std::abs(lambda));
  double arg_prev = 0.0;
  for (Index i = 0; i < n; ++i) {
    const Complex zeta = lambda + r.x(i) + r.b_of_x(i);
    const Complex denom = zeta + M_PI * r.omega(i);
    const Complex numer = zeta - M_PI * r.omega(i);
    if (std::abs(denom) < 1e-12 * scale || std::abs(numer) < 1e-12 * scale)
      throw boundary_error(
          "riemann: zeta +/- pi omega vanishes on the grid; lambda inadmissible");
    out.zeta(i) = zeta;
    const Complex d = numer / denom;
    out.d(i) = d;
    // Unwrap the argument relative to the previous node; the first node
    // takes its principal value (d == 1 off the support anchors the branch).
    double arg = std::arg(d);
    if (i > 0) {
      const double step = std::arg(d / out.d(i - 1));
      arg = arg_prev + step;
    }
    out.logd(i) = Complex(std::log(std::abs(d)), arg);
    arg_prev = arg;
  }
  return out;
}

}  // namespace

Complex riemann_charfn_scalar(const RiemannProblemData& r, Complex lambda) {
  const Index n = r.x.size();
  if (std::abs(lambda.imag()) < 1e-12 && lambda.real() >= r.a - 1e-12 &&
      lambda.real() <= r.b + 1e-12)
    throw boundary_error("riemann: lambda must lie off the support interval");
  const RiemannPointData pd = riemann_point_data(r, lambda);

  // Gamma(lambda, lambda): smooth Cauchy integral of log d.
  Complex i1(0, 0);
  for (Index j = 0; j < n; ++j) i1 += r.h * pd.logd(j) / (r.x(j) - lambda);

  // d/dx of log d for the diagonal of the subtracted PV integrand.
  CVector dlogd(n);
  for (Index j = 0; j < n; ++j) {
    if (j == 0)
      dlogd(j) = (pd.logd(1) - pd.logd(0)) / r.h;
    else if (j == n - 1)
      dlogd(j) = (pd.logd(n - 1) - pd.logd(n - 2)) / r.h;
    else
      dlogd(j) = (pd.logd(j + 1) - pd.logd(j - 1)) / (2.0 * r.h);
  }

  const Complex two_pi_i(0, 2.0 * M_PI);
  Complex s(1, 0);
  for (Index i = 0; i < n; ++i) {
    if (r.omega(i) == 0.0) continue;
    // PV integral of log d(t) / (t - x_i) by the subtraction rule.
    Complex i2(0, 0);
    for (Index j = 0; j < n; ++j) {
      if (j == i)
        i2 += r.h * dlogd(i);
      else
        i2 += r.h * (pd.logd(j) - pd.logd(i)) / (r.x(j) - r.x(i));
    }
    i2 += pd.logd(i) * std::log((r.b - r.x(i)) / (r.x(i) - r.a));

    const Complex exponent = (i1 - i2) / two_pi_i;
    // 1/[zeta^2 - pi^2 omega^2]^{1/2} with the branch tied to log d:
    // d^{-1/2} / (zeta + pi omega).
    const Complex inv_root =
        std::exp(-0.5 * pd.logd(i)) / (pd.zeta(i) + M_PI * r.omega(i));
    s += kImag * r.h * r.omega(i) * inv_root * std::exp(exponent) /
         (r.x(i) - lambda);
  }
  return s;
}

Complex riemann_direct_charfn(const RiemannProblemData& r, Complex lambda) {
  const Index n = r.x.size();
  CMatrix y = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    y(i, i) = -(r.x(i) + r.b_of_x(i));
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      y(i, j) += kImag * r.J * r.v(i) * std::conj(r.v(j)) * r.h /
                 (r.x(j) - r.x(i));
    }
  }
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix lx = lambda * id;
  for (Index i = 0; i < n; ++i) lx(i, i) -= r.x(i);
  Eigen::PartialPivLU<CMatrix> lu_x(lx);
  Eigen::PartialPivLU<CMatrix> lu_y(lambda * id - y);
  if (!(lu_x.rcond() > 1e-14) || !(lu_y.rcond() > 1e-14))
    throw spectral_point_error("riemann direct: lambda at a model spectrum");

  CVector phi_star(n);
  for (Index i = 0; i < n; ++i) phi_star(i) = r.v(i);
  const CVector t = lu_x.solve(lu_y.solve(phi_star * r.J).eval());
  Complex acc(0, 0);
  for (Index j = 0; j < n; ++j) acc += r.h * std::conj(r.v(j)) * t(j);
  return Complex(1, 0) - kImag * acc;
}

}  // namespace pencilkit
