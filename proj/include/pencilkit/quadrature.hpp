#pragma once

#include <functional>
#include <vector>

#include "pencilkit/types.hpp"

namespace pencilkit {

/// Adaptive Simpson quadrature of a complex-valued integrand on [a, b]
/// to absolute tolerance `abs_tol`.
Complex adaptive_simpson(const std::function<Complex(double)>& f, double a,
                         double b, double abs_tol, int max_depth = 40);

/// Quadrature weights for integrating over the first `k+1` samples of a
/// uniform grid with spacing `h` (i.e. over [t0, t0 + k*h]).
/// Composite Simpson for even k; odd k is handled by a 3/8 block so the
/// rule stays fourth order, except k == 1 which falls back to the trapezoid.
std::vector<double> prefix_quadrature_weights(Index k, double h);

}  // namespace pencilkit
