#include "gfb/grassmann.hpp"

#include "gfb/errors.hpp"

#include <cmath>
#include <numbers>

namespace gfb {

Plane Plane::from_span(int m, int n, const CMatrix& spanning, const Tolerance& tol) {
  if (spanning.rows() != m + n) fail(ErrorKind::InvalidMatrix, "plane basis has wrong ambient dimension");
  Plane p;
  p.m_ = m;
  p.n_ = n;
  p.basis_ = column_space(spanning, tol);
  return p;
}

Plane Plane::from_basis(int m, int n, const CMatrix& basis, const Tolerance& tol) {
  if (basis.rows() != m + n) fail(ErrorKind::InvalidMatrix, "plane basis has wrong ambient dimension");
  require_finite(basis, "plane basis");
  const CMatrix gram = basis.adjoint() * basis;
  if ((gram - CMatrix::Identity(basis.cols(), basis.cols())).norm() > std::max(tol.residual_abs, 1e-9))
    fail(ErrorKind::InvalidFrame, "plane basis columns are not orthonormal");
  Plane p;
  p.m_ = m;
  p.n_ = n;
  p.basis_ = basis;
  return p;
}

Plane plane_from_graph(const CMatrix& gamma) {
  require_finite(gamma, "graph map");
  const int n = static_cast<int>(gamma.rows());
  const int m = static_cast<int>(gamma.cols());
  CMatrix stacked(m + n, m);
  stacked << CMatrix::Identity(m, m), gamma;
  const CMatrix gram = CMatrix::Identity(m, m) + gamma.adjoint() * gamma;
  return Plane::from_basis(m, n, stacked * hermitian_inv_sqrt(gram));
}

Plane plane_from_annihilator(const CMatrix& b_star, const CMatrix& d_star, const Tolerance& tol) {
  if (b_star.rows() != d_star.rows()) fail(ErrorKind::InvalidMatrix, "b* and d* row counts differ");
  require_finite(b_star, "b*");
  require_finite(d_star, "d*");
  const int r = static_cast<int>(b_star.rows());
  const int m = static_cast<int>(b_star.cols());
  const int n = static_cast<int>(d_star.cols());
  CMatrix rows(r, m + n);
  rows << b_star, d_star;
  if ((rows * rows.adjoint() - CMatrix::Identity(r, r)).norm() > std::max(tol.residual_abs, 1e-9))
    fail(ErrorKind::InvalidFrame, "annihilator rows are not orthonormal");
  return Plane::from_basis(m, n, null_space(rows, tol));
}

CMatrix annihilator_rows(const Plane& g, const Tolerance& tol) {
  return complement(g.basis(), g.m() + g.n(), tol).adjoint();
}

CMatrix b_star(const Plane& g, const Tolerance& tol) { return annihilator_rows(g, tol).leftCols(g.m()); }
CMatrix d_star(const Plane& g, const Tolerance& tol) { return annihilator_rows(g, tol).rightCols(g.n()); }

bool is_graph(const Plane& g, const Tolerance& tol) {
  return g.k() == g.m() && numeric_rank(g.first_block(), tol) == g.m();
}

CMatrix graph_map(const Plane& g, const Tolerance& tol) {
  if (!is_graph(g, tol)) fail(ErrorKind::InvalidFrame, "plane is not a graph over the first summand");
  const CMatrix top = g.first_block();
  return g.second_block() * top.inverse();
}

IntersectionDims intersection_dims(const Plane& g, const Tolerance& tol) {
  // Vectors of g with zero second component form the kernel of the second block.
  IntersectionDims d;
  d.s = g.k() - numeric_rank(g.second_block(), tol);
  d.t = g.k() - numeric_rank(g.first_block(), tol);
  return d;
}

CMatrix moment_right(const Plane& g, const Tolerance& tol) {
  const CMatrix bs = b_star(g, tol);
  const CMatrix bb = bs.adjoint() * bs;  // b b*
  const CMatrix id = CMatrix::Identity(g.m(), g.m());
  return cd(0.0, 0.5) * (-id + 2.0 * bb);
}

CMatrix moment_left(const Plane& g, const Tolerance& tol) {
  const CMatrix ds = d_star(g, tol);
  const CMatrix dd = ds.adjoint() * ds;
  const CMatrix id = CMatrix::Identity(g.n(), g.n());
  return cd(0.0, 0.5) * (-id + 2.0 * dd);
}

CMatrix moment_right_graph(const CMatrix& gamma) {
  const Eigen::Index m = gamma.cols();
  const CMatrix id = CMatrix::Identity(m, m);
  const CMatrix gg = gamma.adjoint() * gamma;
  return cd(0.0, 0.5) * (-id + gg) * (id + gg).inverse();
}

CMatrix moment_left_graph(const CMatrix& gamma) {
  const Eigen::Index n = gamma.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix gg = gamma * gamma.adjoint();
  return cd(0.0, 0.5) * (id - gg) * (id + gg).inverse();
}

Plane act_first(const CMatrix& u, const Plane& g) {
  CMatrix b = g.basis();
  b.topRows(g.m()) = u * b.topRows(g.m());
  return Plane::from_span(g.m(), g.n(), b);
}

Plane act_second(const CMatrix& v, const Plane& g) {
  CMatrix b = g.basis();
  b.bottomRows(g.n()) = v * b.bottomRows(g.n());
  return Plane::from_span(g.m(), g.n(), b);
}

double plane_distance(const Plane& a, const Plane& b) {
  if (a.k() != b.k()) return std::numbers::pi / 2;
  return max_principal_angle(a.basis(), b.basis());
}

std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

PluckerVector plucker_of_columns(const CMatrix& cols) {
  const int ambient = static_cast<int>(cols.rows());
  const int k = static_cast<int>(cols.cols());
  if (binomial(ambient, k) > kPluckerCap) fail(ErrorKind::TooLarge, "Plücker vector exceeds the desk-scale cap");
  PluckerVector pv;
  pv.k = k;
  pv.ambient = ambient;
  const auto subs = subsets(ambient, k);
  pv.coords.resize(static_cast<Eigen::Index>(subs.size()));
  CMatrix minor(k, k);
  for (std::size_t s = 0; s < subs.size(); ++s) {
    for (int i = 0; i < k; ++i) minor.row(i) = cols.row(subs[s][i]);
    pv.coords(static_cast<Eigen::Index>(s)) = k == 0 ? cd(1.0, 0.0) : minor.determinant();
  }
  return pv;
}

PluckerVector plucker_of_rows(const CMatrix& rows) { return plucker_of_columns(rows.transpose()); }

PluckerVector normalize_gauge(PluckerVector v, double zero_tol) {
  const double nrm = v.coords.norm();
  if (!(nrm > 0.0)) fail(ErrorKind::InvalidFrame, "Plücker vector is identically zero");
  v.coords /= nrm;
  for (Eigen::Index i = 0; i < v.coords.size(); ++i) {
    const double a = std::abs(v.coords(i));
    if (a > zero_tol) {
      v.coords *= std::conj(v.coords(i)) / a;
      v.coords(i) = cd(v.coords(i).real(), 0.0);
      break;
    }
  }
  return v;
}

PluckerVector plucker(const Plane& g) { return normalize_gauge(plucker_of_columns(g.basis())); }

double projective_distance(const PluckerVector& a, const PluckerVector& b) {
  if (a.coords.size() != b.coords.size()) return 1.0;
  const double na = a.coords.norm(), nb = b.coords.norm();
  if (!(na > 0.0) || !(nb > 0.0)) return 1.0;
  const CVector ua = a.coords / na, ub = b.coords / nb;
  return (ub - ua * ua.dot(ub)).norm();
}

}  // namespace gfb
