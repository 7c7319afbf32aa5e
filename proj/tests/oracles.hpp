// Independent reference computations for the test suite. Everything here is
// deliberately written against plain Eigen types and does not reuse the
// library's solver paths, so agreement between the two is meaningful.
#pragma once

#include <complex>
#include <functional>
#include <utility>

#include <Eigen/Dense>

namespace oracles {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Roots of z^2 + b z + c = 0 by the quadratic formula, with the
// numerically stable pairing (larger-magnitude root first).
inline std::pair<Complex, Complex> quadratic_roots(Complex b, Complex c) {
  const Complex disc = std::sqrt(b * b - 4.0 * c);
  Complex r1 = 0.5 * (-b + disc);
  Complex r2 = 0.5 * (-b - disc);
  if (std::abs(r1) < std::abs(r2)) std::swap(r1, r2);
  if (std::abs(r1) > 0.0) r2 = c / r1;
  return {r1, r2};
}

// Classical RK4 on the first-order reduction z = [h; h'] of
// h'' + B h' + A h = f(t), fixed step over the given span.
struct Rk4Result {
  std::vector<double> t;
  std::vector<CVector> h;
  std::vector<CVector> hdot;
};

inline Rk4Result rk4_second_order(const CMatrix& A, const CMatrix& B,
                                  const std::function<CVector(double)>& force,
                                  const CVector& h0, const CVector& h1,
                                  double t_end, double dt) {
  const Index n = A.rows();
  const auto rhs = [&](double t, const CVector& z) {
    CVector dz(2 * n);
    dz.head(n) = z.tail(n);
    dz.tail(n) = force(t) - B * z.tail(n) - A * z.head(n);
    return dz;
  };
  Rk4Result out;
  CVector z(2 * n);
  z.head(n) = h0;
  z.tail(n) = h1;
  double t = 0.0;
  const auto record = [&]() {
    out.t.push_back(t);
    out.h.push_back(z.head(n));
    out.hdot.push_back(z.tail(n));
  };
  record();
  const int steps = static_cast<int>(std::llround(t_end / dt));
  for (int k = 0; k < steps; ++k) {
    const CVector k1 = rhs(t, z);
    const CVector k2 = rhs(t + 0.5 * dt, z + (0.5 * dt) * k1);
    const CVector k3 = rhs(t + 0.5 * dt, z + (0.5 * dt) * k2);
    const CVector k4 = rhs(t + dt, z + dt * k3);
    z += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
    record();
  }
  return out;
}

// Residue of the scalar rational function 1 / ((z - x)(z - y)) at z = y.
inline Complex simple_pole_residue(Complex x, Complex y) {
  return 1.0 / (y - x);
}

}  // namespace oracles
