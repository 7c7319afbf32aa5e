#include "pencilkit/dynamics.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "pencilkit/charfn.hpp"
#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"
#include "pencilkit/quadrature.hpp"

namespace pencilkit {

namespace {

bool uniform_spacing(const RVector& times, double& dt) {
  if (times.size() < 2) {
    dt = 0.0;
    return true;
  }
  dt = times(1) - times(0);
  for (Index k = 1; k + 1 < times.size(); ++k) {
    const double step = times(k + 1) - times(k);
    if (std::abs(step - dt) > 1e-9 * std::max(std::abs(dt), 1.0)) return false;
  }
  return true;
}

// e^{t_k M} for every sample time. Uniform grids use one Pade exponential
// per step and accumulate by multiplication.
std::vector<CMatrix> propagators(const CMatrix& m, const RVector& times) {
  const size_t count = static_cast<size_t>(times.size());
  std::vector<CMatrix> out(count);
  if (count == 0) return out;
  double dt = 0.0;
  if (uniform_spacing(times, dt) && count > 1) {
    const CMatrix step = (dt * m).exp();
    out[0] = (times(0) * m).exp();
    for (size_t k = 1; k < count; ++k) out[k] = step * out[k - 1];
  } else {
    for (size_t k = 0; k < count; ++k)
      out[k] = (times(static_cast<Index>(k)) * m).exp();
  }
  return out;
}

CMatrix output_from(const CMatrix& phi, const CMatrix& h, const CMatrix& u) {
  if (phi.size() == 0) return CMatrix(0, h.cols());
  CMatrix v = -kImag * (phi * h);
  if (u.size() > 0) v += u;
  return v;
}

PencilSystem system_from_roots(const FactoredPencil& f, const CMatrix& phi,
                               const CMatrix& sigma) {
  // Trusted aggregate: callers of the root-based solvers may supply channel
  // data that does not satisfy the colligation identity.
  CMatrix a = f.Y * f.X;
  CMatrix b = -(f.X + f.Y);
  return PencilSystem{Colligation{std::move(a), phi, sigma}, std::move(b)};
}

}  // namespace

Trajectory solve_homogeneous(const FactoredPencil& f, const CVector& h0,
                             const CVector& h1, const RVector& times,
                             const CMatrix& phi) {
  const Index n = f.X.rows();
  if (h0.size() != n || h1.size() != n)
    throw structural_error("solve_homogeneous: initial data dimension mismatch");
  const CVector gt = h1 - f.X * h0;
  const CVector g = h0 - f.K * gt;

  const std::vector<CMatrix> ex = propagators(f.X, times);
  const std::vector<CMatrix> ey = propagators(f.Y, times);

  Trajectory traj;
  traj.times = times;
  traj.h.resize(n, times.size());
  traj.hdot.resize(n, times.size());
  traj.u = CMatrix::Zero(phi.rows(), times.size());
  for (Index k = 0; k < times.size(); ++k) {
    const CVector a = ex[static_cast<size_t>(k)] * g;
    const CVector b = ey[static_cast<size_t>(k)] * gt;
    traj.h.col(k) = a + f.K * b;
    traj.hdot.col(k) = f.X * a + f.K * (f.Y * b);
  }
  traj.v = output_from(phi, traj.h, traj.u);
  return traj;
}

Trajectory solve_forced(const FactoredPencil& f, const CMatrix& phi,
                        const CMatrix& sigma, const CMatrix& u,
                        const RVector& times) {
  const Index n = f.X.rows();
  const Index count = times.size();
  if (u.cols() != count)
    throw structural_error("solve_forced: input must be sampled at the output times");
  if (count > 0 && std::abs(times(0)) > 1e-12)
    throw structural_error("solve_forced: time grid must start at 0");
  double dt = 0.0;
  if (!uniform_spacing(times, dt))
    throw structural_error("solve_forced: time grid must be uniform");

  CMatrix q(n, count);
  if (phi.size() > 0)
    q = phi.adjoint() * sigma * u;
  else
    q.setZero();

  const std::vector<CMatrix> ex = propagators(f.X, times);
  const std::vector<CMatrix> ey = propagators(f.Y, times);
  const CMatrix kq = f.K * q;

  Trajectory traj;
  traj.times = times;
  traj.h = CMatrix::Zero(n, count);
  traj.hdot = CMatrix::Zero(n, count);
  traj.u = u;
  for (Index k = 1; k < count; ++k) {
    const std::vector<double> w = prefix_quadrature_weights(k, dt);
    CVector ix = CVector::Zero(n);
    CVector iy = CVector::Zero(n);
    for (Index j = 0; j <= k; ++j) {
      const double wj = w[static_cast<size_t>(j)];
      if (wj == 0.0) continue;
      ix += wj * (ex[static_cast<size_t>(k - j)] * kq.col(j));
      iy += wj * (ey[static_cast<size_t>(k - j)] * q.col(j));
    }
    traj.h.col(k) = -ix + f.K * iy;
    traj.hdot.col(k) = -(f.X * ix) + f.K * (f.Y * iy);
  }
  traj.v = output_from(phi, traj.h, traj.u);
  return traj;
}

Trajectory solve_cauchy(const FactoredPencil& f, const CMatrix& phi,
                        const CMatrix& sigma, const CVector& h0,
                        const CVector& h1, const CMatrix& u,
                        const RVector& times) {
  Trajectory a = solve_homogeneous(f, h0, h1, times, phi);
  Trajectory b = solve_forced(f, phi, sigma, u, times);
  Trajectory out;
  out.times = times;
  out.h = a.h + b.h;
  out.hdot = a.hdot + b.hdot;
  out.u = u;
  out.v = output_from(phi, out.h, out.u);
  return out;
}

PlaneWaveResponse plane_wave_response(const FactoredPencil& f,
                                      const CMatrix& phi, const CMatrix& sigma,
                                      Complex lambda, const CVector& u0) {
  const PencilSystem ps = system_from_roots(f, phi, sigma);
  PlaneWaveResponse r;
  const CVector rhs = phi.size() > 0 ? CVector(phi.adjoint() * sigma * u0)
                                     : CVector(CVector::Zero(f.X.rows()));
  r.h0 = resolvent_eval(ps, lambda) * rhs;
  r.h1 = lambda * r.h0;
  r.v0 = phi.size() > 0 ? CVector(char_fn_sample(ps, lambda).S * u0)
                        : CVector(u0);
  return r;
}

Trajectory solve_plane_wave(const FactoredPencil& f, const CMatrix& phi,
                            const CMatrix& sigma, const CVector& h0,
                            const CVector& h1, Complex lambda,
                            const CVector& u0, const RVector& times) {
  const Index n = f.X.rows();
  const PencilSystem ps = system_from_roots(f, phi, sigma);
  const CMatrix id = CMatrix::Identity(n, n);
  const CVector q = phi.size() > 0 ? CVector(phi.adjoint() * sigma * u0)
                                   : CVector(CVector::Zero(n));
  const CVector steady = resolvent_eval(ps, lambda) * q;
  // Transient amplitudes chosen so that h(0) = h0 and h'(0) = h1:
  //   h(t) = e^{tX} ax + K e^{tY} ay + e^{lambda t} L^-1(lambda) q.
  const CVector ay = h1 - f.X * h0 -
                     (lambda * id - f.Y).partialPivLu().solve(q);
  const CVector ax = h0 - f.K * (h1 - f.X * h0) +
                     (lambda * id - f.X).partialPivLu().solve(f.K * q);

  const std::vector<CMatrix> ex = propagators(f.X, times);
  const std::vector<CMatrix> ey = propagators(f.Y, times);

  Trajectory traj;
  traj.times = times;
  traj.h.resize(n, times.size());
  traj.hdot.resize(n, times.size());
  traj.u.resize(u0.size(), times.size());
  for (Index k = 0; k < times.size(); ++k) {
    const Complex ph = std::exp(lambda * times(k));
    const CVector a = ex[static_cast<size_t>(k)] * ax;
    const CVector b = ey[static_cast<size_t>(k)] * ay;
    traj.h.col(k) = a + f.K * b + ph * steady;
    traj.hdot.col(k) = f.X * a + f.K * (f.Y * b) + lambda * ph * steady;
    traj.u.col(k) = ph * u0;
  }
  traj.v = output_from(phi, traj.h, traj.u);
  return traj;
}

Trajectory rk4_simulate(const PencilSystem& p,
                        const std::function<CVector(double)>& u_of_t,
                        const CVector& h0, const CVector& h1,
                        const RVector& times) {
  const Index n = p.dim_state();
  const Index m = p.dim_channel();
  const auto deriv = [&](double t, const CVector& z) {
    CVector dz(2 * n);
    dz.head(n) = z.tail(n);
    CVector force = CVector::Zero(n);
    if (m > 0) force = p.phi().adjoint() * p.sigma() * u_of_t(t);
    dz.tail(n) = force - p.B * z.tail(n) - p.A() * z.head(n);
    return dz;
  };

  Trajectory traj;
  traj.times = times;
  traj.h.resize(n, times.size());
  traj.hdot.resize(n, times.size());
  traj.u.resize(m, times.size());

  CVector z(2 * n);
  z.head(n) = h0;
  z.tail(n) = h1;
  for (Index k = 0; k < times.size(); ++k) {
    traj.h.col(k) = z.head(n);
    traj.hdot.col(k) = z.tail(n);
    if (m > 0) traj.u.col(k) = u_of_t(times(k));
    if (k + 1 == times.size()) break;
    const double t = times(k);
    const double dt = times(k + 1) - t;
    const CVector k1 = deriv(t, z);
    const CVector k2 = deriv(t + 0.5 * dt, z + (0.5 * dt) * k1);
    const CVector k3 = deriv(t + 0.5 * dt, z + (0.5 * dt) * k2);
    const CVector k4 = deriv(t + dt, z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  traj.v = output_from(p.phi(), traj.h, traj.u);
  return traj;
}

double conservation_residual_exact(const PencilSystem& p, const CVector& h,
                                   const CVector& hdot, const CVector& hddot,
                                   const CVector& u) {
  const Index m = p.dim_channel();
  double lhs = 0.0;
  if (m > 0) {
    const CVector v = u - kImag * (p.phi() * h);
    lhs = std::real(u.dot(p.sigma() * u)) - std::real(v.dot(p.sigma() * v));
  }
  // <x, y> below is conjugate-linear in its second slot, i.e. h.dot(y)
  // computes <y, h> in the sesquilinear convention used by the identity.
  const double rhs =
      2.0 * std::imag(h.dot(hddot)) + 2.0 * std::imag(h.dot(p.B * hdot));
  return std::abs(lhs - rhs);
}

ConservationReport conservation_report(const Trajectory& traj,
                                       const PencilSystem& p) {
  const Index count = traj.times.size();
  if (count < 3)
    throw structural_error("conservation_report: need at least three samples");
  double dt = 0.0;
  if (!uniform_spacing(traj.times, dt))
    throw structural_error("conservation_report: time grid must be uniform");
  const Index m = traj.u.rows();

  ConservationReport rep;
  rep.times = traj.times;
  rep.lhs.resize(count);
  rep.rhs.resize(count);
  rep.residual.resize(count);

  RVector g(count);  // 2 Im<h', h>
  RVector loss(count);
  for (Index k = 0; k < count; ++k) {
    const CVector h = traj.h.col(k);
    const CVector hd = traj.hdot.col(k);
    g(k) = 2.0 * std::imag(h.dot(hd));
    loss(k) = 2.0 * std::imag(h.dot(p.B * hd));
    double lhs = 0.0;
    if (m > 0) {
      const CVector u = traj.u.col(k);
      const CVector v = traj.v.col(k);
      lhs = std::real(u.dot(p.sigma() * u)) - std::real(v.dot(p.sigma() * v));
    }
    rep.lhs(k) = lhs;
  }
  for (Index k = 0; k < count; ++k) {
    double dg;
    if (k == 0)
      dg = (-3.0 * g(0) + 4.0 * g(1) - g(2)) / (2.0 * dt);
    else if (k == count - 1)
      dg = (3.0 * g(k) - 4.0 * g(k - 1) + g(k - 2)) / (2.0 * dt);
    else
      dg = (g(k + 1) - g(k - 1)) / (2.0 * dt);
    rep.rhs(k) = dg + loss(k);
    rep.residual(k) = std::abs(rep.lhs(k) - rep.rhs(k));
    rep.max_residual = std::max(rep.max_residual, rep.residual(k));
  }

  // Integrated form, with B split into its positive and negative parts.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(p.B);
  CMatrix bplus = CMatrix::Zero(p.dim_state(), p.dim_state());
  CMatrix bminus = bplus;
  for (Index i = 0; i < p.dim_state(); ++i) {
    const double mu = es.eigenvalues()(i);
    const CMatrix proj =
        es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    if (mu > 0)
      bplus += mu * proj;
    else
      bminus += -mu * proj;
  }
  const std::vector<double> w = prefix_quadrature_weights(count - 1, dt);
  double in_u = 0.0, out_v = 0.0, loss_plus = 0.0, loss_minus = 0.0;
  for (Index k = 0; k < count; ++k) {
    const double wk = w[static_cast<size_t>(k)];
    const CVector h = traj.h.col(k);
    const CVector hd = traj.hdot.col(k);
    if (m > 0) {
      in_u += wk * std::real(traj.u.col(k).dot(p.sigma() * traj.u.col(k)));
      out_v += wk * std::real(traj.v.col(k).dot(p.sigma() * traj.v.col(k)));
    }
    loss_plus += wk * 2.0 * std::imag(h.dot(bplus * hd));
    loss_minus += wk * 2.0 * std::imag(h.dot(bminus * hd));
  }
  const double e0 = 2.0 * std::imag(traj.h.col(0).dot(traj.hdot.col(0)));
  const double eT =
      2.0 * std::imag(traj.h.col(count - 1).dot(traj.hdot.col(count - 1)));
  rep.integral_in = in_u + e0 + loss_minus;
  rep.integral_out = out_v + eT + loss_plus;
  rep.integral_residual = std::abs(rep.integral_in - rep.integral_out);
  return rep;
}

}  // namespace pencilkit
