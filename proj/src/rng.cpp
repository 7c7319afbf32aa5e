#include "pencilkit/rng.hpp"

#include <cmath>

#include <Eigen/QR>

#include "pencilkit/linalg.hpp"

namespace pencilkit {

double Rng::uniform() {
  // Top 53 bits of one 64-bit draw.
  return (gen_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Complex Rng::cnormal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = cnormal();
  return m;
}

CMatrix Rng::hermitian(Index n, double scale) {
  CMatrix g = gaussian_matrix(n, n);
  CMatrix h = 0.5 * (g + g.adjoint());
  const double nrm = spectral_norm(h);
  if (nrm > 0.0) h *= scale / nrm;
  return h;
}

CMatrix Rng::unitary(Index n) {
  CMatrix g = gaussian_matrix(n, n);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase so the distribution does not depend on QR conventions.
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CVector Rng::gaussian_vector(Index n) {
  CVector v(n);
  for (Index i = 0; i < n; ++i) v(i) = cnormal();
  return v;
}

}  // namespace pencilkit
