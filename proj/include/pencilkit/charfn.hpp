#pragma once

#include <optional>
#include <vector>

#include "pencilkit/core.hpp"
#include "pencilkit/types.hpp"

namespace pencilkit {

/// One evaluation of the characteristic function
///   S(lambda) = I - i phi L^-1(lambda) phi* sigma   (m x m).
struct CharFnSample {
  Complex lambda;
  CMatrix S;
};

CharFnSample char_fn_sample(const PencilSystem& p, Complex lambda);

/// Residual of the metric relation
///   i/(lambda - conj(w)) (sigma - S*(w) sigma S(lambda))
///     = sigma phi (L*(w))^-1 [(lambda + conj(w)) I + B] L^-1(lambda) phi* sigma.
/// Throws ErrorKind::spectral_point when lambda == conj(w) (the relation
/// degenerates to a derivative there; probe a nearby point instead).
double metric_relation_residual(const PencilSystem& p, Complex lambda,
                                Complex w);

/// V(lambda) = phi L_R^-1(lambda) phi* for the Hermitian-part pencil
/// L_R(lambda) = lambda^2 I + lambda B + (A + A*)/2, together with an
/// advisory check of the fractional-linear identity
///   V = 2i (S - I)(S + I)^-1 sigma^-1.
/// The identity residual is absent when S + I or sigma is singular.
struct VFunctionResult {
  CMatrix V;
  std::optional<double> identity_residual;
};

VFunctionResult v_function(const PencilSystem& p, Complex lambda);

/// Metric relation of V against the Hermitian-part pencil:
///   (V(lambda) - V*(w)) / (lambda - conj(w))
///     = -phi (L_R*(w))^-1 [(lambda + conj(w)) I + B] L_R^-1(lambda) phi*.
double v_metric_residual(const PencilSystem& p, Complex lambda, Complex w);

/// Sign of 1 - |S|^2 predicted by the region tables of a scalar chain with
/// dissipation constants b_1 >= ... >= b_N.  For N >= 2 the strip
/// -b_1/2 < Re < -b_N/2 off the real axis is not classified by the tables.
enum class SignClass { positive, zero, negative, boundary, unclassified };

struct SignRegionQuery {
  Complex lambda;
  std::vector<double> b_list;  // non-increasing
  double boundary_band = 1e-10;
};

SignClass sign_region(const SignRegionQuery& q);

}  // namespace pencilkit
