#include "pencilkit/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"

namespace pencilkit {

CharFnSample char_fn_sample(const PencilSystem& p, Complex lambda) {
  const Index m = p.dim_channel();
  CharFnSample s;
  s.lambda = lambda;
  if (m == 0 || p.dim_state() == 0) {
    s.S = CMatrix::Identity(m, m);
    return s;
  }
  const CMatrix linv = resolvent_eval(p, lambda);
  s.S = CMatrix::Identity(m, m) -
        kImag * (p.phi() * linv * p.phi().adjoint() * p.sigma());
  return s;
}

namespace {

PencilSystem hermitian_part_system(const PencilSystem& p) {
  // The defect of (A + A*)/2 is zero, so the channel data collapses.
  CMatrix ar = 0.5 * (p.A() + p.A().adjoint());
  Colligation c{std::move(ar), CMatrix(0, p.dim_state()), CMatrix(0, 0)};
  return PencilSystem{std::move(c), p.B};
}

}  // namespace

double metric_relation_residual(const PencilSystem& p, Complex lambda,
                                Complex w) {
  if (std::abs(lambda - std::conj(w)) < 1e-12)
    throw spectral_point_error(
        "metric relation: lambda == conj(w) is a removable singularity; "
        "evaluate at a nearby point");
  const Index m = p.dim_channel();
  if (m == 0) return 0.0;
  const Index n = p.dim_state();
  const CMatrix sl = char_fn_sample(p, lambda).S;
  const CMatrix sw = char_fn_sample(p, w).S;
  const CMatrix& sigma = p.sigma();
  const CMatrix lhs = kImag / (lambda - std::conj(w)) *
                      (sigma - sw.adjoint() * sigma * sl);
  const CMatrix linv = resolvent_eval(p, lambda);
  const CMatrix lwinv_adj = resolvent_eval(p, w).adjoint();
  const CMatrix mid =
      (lambda + std::conj(w)) * CMatrix::Identity(n, n) + p.B;
  const CMatrix rhs =
      sigma * p.phi() * lwinv_adj * mid * linv * p.phi().adjoint() * sigma;
  return spectral_norm(lhs - rhs);
}

VFunctionResult v_function(const PencilSystem& p, Complex lambda) {
  const Index m = p.dim_channel();
  const PencilSystem pr = hermitian_part_system(p);
  VFunctionResult res;
  if (m == 0) {
    res.V = CMatrix(0, 0);
    return res;
  }
  const CMatrix lrinv = resolvent_eval(pr, lambda);
  res.V = p.phi() * lrinv * p.phi().adjoint();

  // Advisory cross-check against 2i (S - I)(S + I)^-1 sigma^-1; skipped when
  // S + I or sigma is not safely invertible.
  try {
    const CMatrix s = char_fn_sample(p, lambda).S;
    const CMatrix id = CMatrix::Identity(m, m);
    Eigen::PartialPivLU<CMatrix> lu_sp(s + id);
    Eigen::PartialPivLU<CMatrix> lu_sigma(p.sigma());
    const double eps = std::numeric_limits<double>::epsilon();
    if (lu_sp.rcond() > 1e3 * eps && lu_sigma.rcond() > 1e3 * eps) {
      const CMatrix alt =
          2.0 * kImag * (s - id) * lu_sp.solve(lu_sigma.solve(id).eval());
      res.identity_residual = spectral_norm(res.V - alt);
    }
  } catch (const Error&) {
    // lambda on the full pencil spectrum: V is still defined, no cross-check.
  }
  return res;
}

double v_metric_residual(const PencilSystem& p, Complex lambda, Complex w) {
  if (std::abs(lambda - std::conj(w)) < 1e-12)
    throw spectral_point_error(
        "v metric relation: lambda == conj(w) is a removable singularity");
  const Index m = p.dim_channel();
  if (m == 0) return 0.0;
  const Index n = p.dim_state();
  const PencilSystem pr = hermitian_part_system(p);
  const CMatrix vl = p.phi() * resolvent_eval(pr, lambda) * p.phi().adjoint();
  const CMatrix vw = p.phi() * resolvent_eval(pr, w) * p.phi().adjoint();
  const CMatrix lhs = (vl - vw.adjoint()) / (lambda - std::conj(w));
  const CMatrix mid =
      (lambda + std::conj(w)) * CMatrix::Identity(n, n) + p.B;
  const CMatrix rhs = -p.phi() * resolvent_eval(pr, w).adjoint() * mid *
                      resolvent_eval(pr, lambda) * p.phi().adjoint();
  return spectral_norm(lhs - rhs);
}

SignClass sign_region(const SignRegionQuery& q) {
  if (q.b_list.empty())
    throw structural_error("sign_region: empty chain");
  if (!std::is_sorted(q.b_list.rbegin(), q.b_list.rend()))
    throw structural_error("sign_region: b_list must be non-increasing");
  const double b_first = q.b_list.front();
  const double b_last = q.b_list.back();
  const double re = q.lambda.real();
  const double im = q.lambda.imag();
  const double band = q.boundary_band;

  const bool near_real = std::abs(im) < band;
  const bool near_first = std::abs(re + 0.5 * b_first) < band;
  const bool near_last = std::abs(re + 0.5 * b_last) < band;

  if (q.b_list.size() == 1) {
    if (near_real || near_first) {
      // On the boundary set itself the value is exactly zero; within the
      // band but not on it we refuse to call the sign.
      if (im == 0.0 || re + 0.5 * b_first == 0.0) return SignClass::zero;
      return SignClass::boundary;
    }
    return im * (re + 0.5 * b_first) > 0 ? SignClass::positive
                                         : SignClass::negative;
  }

  if (near_real || near_first || near_last) {
    if (im == 0.0 && (re < -0.5 * b_first || re > -0.5 * b_last))
      return SignClass::zero;
    return SignClass::boundary;
  }
  const bool all_pos = re + 0.5 * b_last > 0;   // Re > -b_k/2 for every k
  const bool all_neg = re + 0.5 * b_first < 0;  // Re < -b_k/2 for every k
  if ((im > 0 && all_pos) || (im < 0 && all_neg)) return SignClass::positive;
  if ((im > 0 && all_neg) || (im < 0 && all_pos)) return SignClass::negative;
  return SignClass::unclassified;
}

}  // namespace pencilkit
