#include "pencilkit/quadrature.hpp"

#include <cmath>

namespace pencilkit {

namespace {

Complex simpson_once(const std::function<Complex(double)>& f, double a,
                     double b, Complex fa, Complex fm, Complex fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

Complex adaptive_step(const std::function<Complex(double)>& f, double a,
                      double b, Complex fa, Complex fm, Complex fb,
                      Complex whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Complex flm = f(0.5 * (a + m));
  const Complex frm = f(0.5 * (m + b));
  const Complex left = simpson_once(f, a, m, fa, flm, fm);
  const Complex right = simpson_once(f, m, b, fm, frm, fb);
  const Complex delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

Complex adaptive_simpson(const std::function<Complex(double)>& f, double a,
                         double b, double abs_tol, int max_depth) {
  if (a == b) return Complex(0, 0);
  const Complex fa = f(a);
  const Complex fb = f(b);
  const Complex fm = f(0.5 * (a + b));
  const Complex whole = simpson_once(f, a, b, fa, fm, fb);
  return adaptive_step(f, a, b, fa, fm, fb, whole, abs_tol, max_depth);
}

std::vector<double> prefix_quadrature_weights(Index k, double h) {
  std::vector<double> w(static_cast<size_t>(k) + 1, 0.0);
  if (k == 0) return w;
  if (k == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  Index start = 0;
  if (k % 2 == 1) {
    // Simpson 3/8 on the first three intervals keeps the rule O(h^4).
    const double c = 3.0 * h / 8.0;
    w[0] += c;
    w[1] += 3.0 * c;
    w[2] += 3.0 * c;
    w[3] += c;
    start = 3;
  }
  for (Index j = start; j + 2 <= k; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
  return w;
}

}  // namespace pencilkit
