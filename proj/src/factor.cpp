#include "pencilkit/factor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "pencilkit/errors.hpp"
#include "pencilkit/linalg.hpp"

namespace pencilkit {

SplitRule split_rule_from_name(const std::string& name) {
  if (name == "gap") return SplitRule::largest_gap_re;
  if (name == "halfplane-re") return SplitRule::halfplane_re;
  if (name == "halfplane-im") return SplitRule::halfplane_im;
  if (name == "smallmod") return SplitRule::smallest_modulus;
  throw structural_error("unknown split rule: " + name);
}

ContourSpec ContourSpec::validated(Complex center, double radius, int nodes) {
  if (!(radius > 0.0)) throw structural_error("contour: radius must be positive");
  if (nodes < 16) throw structural_error("contour: at least 16 nodes required");
  return ContourSpec{center, radius, nodes};
}

double root_equation_scale(const PencilSystem& p, const CMatrix& root) {
  const double r = spectral_norm(root);
  return r * r + spectral_norm(p.B) * r + spectral_norm(p.A()) + 1.0;
}

namespace {

FactoredPencil assemble_factored(const PencilSystem& p, CMatrix x,
                                 std::vector<Complex> eigs_x,
                                 std::vector<Complex> eigs_y,
                                 const std::string& method, double sep_min) {
  FactoredPencil f;
  f.X = std::move(x);
  f.Y = -p.B - f.X;
  f.spec_x.eigenvalues = std::move(eigs_x);
  f.spec_y.eigenvalues = std::move(eigs_y);
  const double sep =
      spectral_separation(f.spec_x.eigenvalues, f.spec_y.eigenvalues);
  if (!(sep > sep_min))
    throw infeasible_error("factorization: spectral separation below minimum");
  f.spec_x.separation = sep;
  f.spec_y.separation = sep;
  f.method = method;
  f.K = solve_sylvester(f.X, f.Y, CMatrix::Identity(p.dim_state(), p.dim_state()));
  return f;
}

std::function<bool(Complex)> predicate_for(const PencilSystem& p,
                                           SplitRule rule) {
  switch (rule) {
    case SplitRule::halfplane_re:
      return [](Complex z) { return z.real() > 0.0; };
    case SplitRule::halfplane_im:
      return [](Complex z) { return z.imag() > 0.0; };
    case SplitRule::largest_gap_re: {
      // A root takes exactly half of the 2n eigenvalues, so the admissible
      // real-part cut is the balanced one between the n-th and (n+1)-th
      // sorted values; its width is the gap being certified.
      std::vector<Complex> eigs = pencil_spectrum(p);
      std::vector<double> re(eigs.size());
      for (size_t i = 0; i < eigs.size(); ++i) re[i] = eigs[i].real();
      std::sort(re.begin(), re.end());
      const size_t half = re.size() / 2;
      const double cut = 0.5 * (re[half - 1] + re[half]);
      return [cut](Complex z) { return z.real() > cut; };
    }
    case SplitRule::smallest_modulus: {
      std::vector<Complex> eigs = pencil_spectrum(p);
      std::vector<double> mod(eigs.size());
      for (size_t i = 0; i < eigs.size(); ++i) mod[i] = std::abs(eigs[i]);
      std::sort(mod.begin(), mod.end());
      const size_t n = eigs.size() / 2;
      // Threshold between the n-th and (n+1)-th modulus.
      const double cut = (n == 0 || n >= mod.size())
                             ? std::numeric_limits<double>::infinity()
                             : 0.5 * (mod[n - 1] + mod[n]);
      return [cut](Complex z) { return std::abs(z) < cut; };
    }
  }
  throw structural_error("unknown split rule");
}

}  // namespace

FactoredPencil factor_spectral(const PencilSystem& p,
                               const std::function<bool(Complex)>& select,
                               double sep_min) {
  const Index n = p.dim_state();
  const CMatrix c = companion_linearization(p);
  std::vector<Complex> in, out;
  const CMatrix basis = invariant_subspace(c, select, in, out);
  if (basis.cols() != n)
    throw infeasible_error(
        "factorization: split selects " + std::to_string(basis.cols()) +
        " of " + std::to_string(2 * n) + " eigenvalues; expected half");
  const CMatrix u1 = basis.topRows(n);
  const CMatrix u2 = basis.bottomRows(n);
  if (condition_estimate(u1) > 1e12)
    throw infeasible_error(
        "factorization: invariant subspace is not a graph (top block singular)");
  // The subspace is the graph of X: columns are [u; X u].
  const CMatrix x = u2 * u1.inverse();
  return assemble_factored(p, x, std::move(in), std::move(out), "schur-split",
                           sep_min);
}

FactoredPencil factor_spectral(const PencilSystem& p, SplitRule rule,
                               double sep_min) {
  return factor_spectral(p, predicate_for(p, rule), sep_min);
}

FactoredPencil factor_bernoulli(const PencilSystem& p, int max_iter,
                                double tol) {
  const Index n = p.dim_state();
  Eigen::PartialPivLU<CMatrix> lu(p.B);
  if (!(lu.rcond() > std::numeric_limits<double>::epsilon()))
    throw infeasible_error("bernoulli: B is not invertible");
  const CMatrix binv = lu.solve(CMatrix::Identity(n, n));
  const CMatrix binv_a = lu.solve(p.A());
  const double cond = 4.0 * spectral_norm(binv) * spectral_norm(binv_a);
  if (!(cond < 1.0))
    throw infeasible_error(
        "bernoulli: 4 ||B^-1|| ||B^-1 A|| = " + std::to_string(cond) +
        " >= 1, iteration not certified");

  CMatrix x = CMatrix::Zero(n, n);
  for (int it = 0; it < max_iter; ++it) {
    const CMatrix next = -binv_a - binv * x * x;
    const double step = spectral_norm(next - x);
    x = next;
    if (step <= tol) {
      const std::vector<Complex> ex = eigenvalues_of(x);
      const std::vector<Complex> ey = eigenvalues_of(-p.B - x);
      return assemble_factored(p, x, ex, ey, "bernoulli", 0.0);
    }
  }
  throw divergence_error("bernoulli: no convergence within the iteration budget");
}

CMatrix coupling_K_sylvester(const FactoredPencil& f) {
  const Index n = f.X.rows();
  return solve_sylvester(f.X, f.Y, CMatrix::Identity(n, n));
}

namespace {

CMatrix contour_quadrature(const PencilSystem& p, const ContourSpec& c,
                           int nodes) {
  const Index n = p.dim_state();
  CMatrix sum = CMatrix::Zero(n, n);
  for (int k = 0; k < nodes; ++k) {
    const double theta = 2.0 * M_PI * k / nodes;
    const Complex e(std::cos(theta), std::sin(theta));
    const Complex zeta = c.center + c.radius * e;
    sum += resolvent_eval(p, zeta) * e;
  }
  return (c.radius / nodes) * sum;
}

}  // namespace

CMatrix coupling_K_contour(const PencilSystem& p, const FactoredPencil& f,
                           const ContourSpec& contour, double quad_tol,
                           int node_cap) {
  // Refuse contours passing through (or hugging) the pencil spectrum.
  std::vector<Complex> all = f.spec_x.eigenvalues;
  all.insert(all.end(), f.spec_y.eigenvalues.begin(),
             f.spec_y.eigenvalues.end());
  for (const Complex& z : all) {
    const double dist = std::abs(std::abs(z - contour.center) - contour.radius);
    if (dist < 1e-10 * std::max(1.0, contour.radius))
      throw infeasible_error("contour: circle touches the pencil spectrum");
  }

  int nodes = contour.nodes;
  CMatrix prev = contour_quadrature(p, contour, nodes);
  while (nodes < node_cap) {
    nodes *= 2;
    CMatrix next = contour_quadrature(p, contour, nodes);
    if (spectral_norm(next - prev) <= quad_tol) return next;
    prev = next;
  }
  return prev;
}

ContourSpec default_contour_around_y(const FactoredPencil& f) {
  const std::vector<Complex>& ys = f.spec_y.eigenvalues;
  if (ys.empty()) throw infeasible_error("contour: spec(Y) is empty");
  Complex center(0, 0);
  for (const Complex& z : ys) center += z;
  center /= static_cast<double>(ys.size());
  double spread = 0.0;
  for (const Complex& z : ys) spread = std::max(spread, std::abs(z - center));
  double nearest_other = std::numeric_limits<double>::infinity();
  for (const Complex& z : f.spec_x.eigenvalues)
    nearest_other = std::min(nearest_other, std::abs(z - center));
  double radius = std::max(1.5 * spread, 1e-3);
  if (radius >= nearest_other) radius = 0.5 * (spread + nearest_other);
  if (!(radius > spread) || !(radius < nearest_other))
    throw infeasible_error(
        "contour: no circle separates spec(Y) from spec(X) around their mean");
  return ContourSpec::validated(center, radius, 64);
}

IdentityReport verify_identities(const PencilSystem& p,
                                 const FactoredPencil& f, Complex lambda) {
  const Index n = p.dim_state();
  const CMatrix id = CMatrix::Identity(n, n);
  const double dist_x =
      spectral_separation({lambda}, f.spec_x.eigenvalues);
  const double dist_y =
      spectral_separation({lambda}, f.spec_y.eigenvalues);
  if (dist_x < 1e-12 || dist_y < 1e-12)
    throw spectral_point_error("verify_identities: lambda lies on a root spectrum");

  const CMatrix ry = (lambda * id - f.Y).partialPivLu().solve(id);
  const CMatrix rx = (lambda * id - f.X).partialPivLu().solve(id);
  const CMatrix linv = resolvent_eval(p, lambda);

  IdentityReport rep;
  rep.resolvent_identity_residual =
      spectral_norm(f.K * ry - rx * f.K - linv);
  rep.left_root_residual =
      spectral_norm(f.K * f.Y * f.Y + p.B * f.K * f.Y + p.A() * f.K);
  return rep;
}

}  // namespace pencilkit
