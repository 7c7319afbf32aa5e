#pragma once

#include <functional>

#include "pencilkit/core.hpp"
#include "pencilkit/factor.hpp"
#include "pencilkit/types.hpp"

namespace pencilkit {

/// Sampled solution of the second-order open system
///   h'' + B h' + A h = phi* sigma u,   v = u - i phi h.
/// Columns of h / hdot / v correspond to entries of `times`. `v` (and `u`)
/// have zero rows when the run carried no channel data.
struct Trajectory {
  RVector times;
  CMatrix h;
  CMatrix hdot;
  CMatrix v;
  CMatrix u;
};

/// Solution of the homogeneous problem (u = 0) through the factored closed
/// form  F0(t) = e^{tX} g + K e^{tY} gt  with  gt = h1 - X h0,
/// g = h0 - K gt, so that F0(0) = h0 and F0'(0) = h1.
/// `phi` may be empty; when supplied, v = -i phi h is recorded.
Trajectory solve_homogeneous(const FactoredPencil& f, const CVector& h0,
                             const CVector& h1, const RVector& times,
                             const CMatrix& phi = CMatrix());

/// Solution with zero initial data driven by an input sampled on a uniform
/// grid (`u` is m x T, columns matching `times`):
///   F1(t) = -int_0^t e^{(t-s)X} K phi* sigma u(s) ds
///           + K int_0^t e^{(t-s)Y} phi* sigma u(s) ds,
/// with the convolutions evaluated by composite Simpson on the grid.
Trajectory solve_forced(const FactoredPencil& f, const CMatrix& phi,
                        const CMatrix& sigma, const CMatrix& u,
                        const RVector& times);

/// Full Cauchy solution h = F0 + F1 for initial data (h0, h1) and sampled
/// input u.
Trajectory solve_cauchy(const FactoredPencil& f, const CMatrix& phi,
                        const CMatrix& sigma, const CVector& h0,
                        const CVector& h1, const CMatrix& u,
                        const RVector& times);

/// Steady response to the plane wave u = e^{lambda t} u0:
/// h0 = L^-1(lambda) phi* sigma u0, h1 = lambda h0, and v0 = S(lambda) u0
/// evaluated through the characteristic-function module.
struct PlaneWaveResponse {
  CVector h0;
  CVector h1;
  CVector v0;
};

PlaneWaveResponse plane_wave_response(const FactoredPencil& f,
                                      const CMatrix& phi, const CMatrix& sigma,
                                      Complex lambda, const CVector& u0);

/// Exact trajectory for plane-wave input with arbitrary initial data,
/// assembled from the transient terms e^{tX}, K e^{tY} and the steady part
/// e^{lambda t} L^-1(lambda) phi* sigma u0.
Trajectory solve_plane_wave(const FactoredPencil& f, const CMatrix& phi,
                            const CMatrix& sigma, const CVector& h0,
                            const CVector& h1, Complex lambda,
                            const CVector& u0, const RVector& times);

/// Classical RK4 integration of the first-order form on col[h, h'].
/// Plays the role of an alternative solver for the CLI; the oracle used by
/// the test suite is a separate implementation living in test code.
Trajectory rk4_simulate(const PencilSystem& p,
                        const std::function<CVector(double)>& u_of_t,
                        const CVector& h0, const CVector& h1,
                        const RVector& times);

/// Pointwise balance of the energy rate identity
///   <sigma u, u> - <sigma v, v> = d/dt 2 Im<h', h> + 2 Im<B h', h>,
/// with the time derivative taken by second-order finite differences, plus
/// the time-integrated form split by the positive/negative parts of B.
struct ConservationReport {
  RVector times;
  RVector lhs;       // <sigma u, u> - <sigma v, v>
  RVector rhs;       // FD d/dt 2Im<h',h> + 2Im<B h',h>
  RVector residual;  // |lhs - rhs|
  double max_residual = 0.0;
  // Integrated form: initial energy + input + negative-part losses vs
  // final energy + output + positive-part losses.
  double integral_in = 0.0;
  double integral_out = 0.0;
  double integral_residual = 0.0;
};

ConservationReport conservation_report(const Trajectory& traj,
                                       const PencilSystem& p);

/// Exact-rate residual at one instant, given the second derivative
/// (for analytically differentiable inputs such as plane waves):
/// |<sigma u,u> - <sigma v,v> - 2 Im<h'',h> - 2 Im<B h',h>| with v = u - i phi h.
double conservation_residual_exact(const PencilSystem& p, const CVector& h,
                                   const CVector& hdot, const CVector& hddot,
                                   const CVector& u);

}  // namespace pencilkit
