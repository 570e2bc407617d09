#include "gfb/linalg.hpp"

#include "gfb/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gfb {

void Tolerance::validate() const {
  if (!(rank_rel > 0) || !(residual_abs > 0) || !(rank_abs >= 0) || rank_rel > 1e-6)
    fail(ErrorKind::InvalidMatrix, "tolerances must be positive with rank_rel <= 1e-6");
}

bool is_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const cd z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

void require_finite(const CMatrix& m, const char* what) {
  if (!is_finite(m)) fail(ErrorKind::InvalidMatrix, std::string(what) + " has non-finite entries");
}

namespace {

RVector singular_values(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return RVector(0);
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues();
}

double cutoff_for(const RVector& sv, const Tolerance& tol) {
  return sv.size() == 0 ? tol.rank_abs : std::max(tol.rank_rel * sv(0), tol.rank_abs);
}

}  // namespace

RankInfo rank_info(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "rank input");
  RankInfo info;
  const RVector sv = singular_values(m);
  if (sv.size() == 0 || sv(0) == 0.0) return info;
  const double cut = cutoff_for(sv, tol);
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++info.rank;
    if ((i > 0 || cut > tol.rank_rel * sv(0)) && sv(i) > cut / 10.0 && sv(i) < cut * 10.0) info.ambiguous = true;
  }
  return info;
}

int numeric_rank(const CMatrix& m, const Tolerance& tol) { return rank_info(m, tol).rank; }

int checked_rank(const CMatrix& m, const Tolerance& tol) {
  const RankInfo info = rank_info(m, tol);
  if (info.ambiguous) fail(ErrorKind::RankAmbiguous, "singular value within 10x of the rank cutoff");
  return info.rank;
}

CMatrix column_space(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "column_space input");
  if (m.rows() == 0 || m.cols() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const RVector sv = svd.singularValues();
  if (sv(0) == 0.0) return CMatrix(m.rows(), 0);
  const double cut = cutoff_for(sv, tol);
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

CMatrix null_space(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "null_space input");
  const Eigen::Index c = m.cols();
  if (m.rows() == 0 || c == 0) return CMatrix::Identity(c, c);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  int r = 0;
  if (sv(0) > 0.0) {
    const double cut = cutoff_for(sv, tol);
    while (r < sv.size() && sv(r) > cut) ++r;
  }
  return svd.matrixV().rightCols(c - r);
}

CMatrix complement(const CMatrix& basis, int dim, const Tolerance& tol) {
  if (basis.cols() == 0) return CMatrix::Identity(dim, dim);
  return null_space(basis.adjoint(), tol);
}

CMatrix intersect(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  if (a.cols() == 0 || b.cols() == 0) return CMatrix(a.rows(), 0);
  const CMatrix qa = column_space(a, tol);
  const CMatrix qb = column_space(b, tol);
  if (qa.cols() == 0 || qb.cols() == 0) return CMatrix(a.rows(), 0);
  CMatrix stacked(qa.rows(), qa.cols() + qb.cols());
  stacked << qa, -qb;
  const CMatrix ker = null_space(stacked, tol);
  if (ker.cols() == 0) return CMatrix(a.rows(), 0);
  return column_space(qa * ker.topRows(qa.cols()), tol);
}

int intersection_dim(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  CMatrix both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return numeric_rank(a, tol) + numeric_rank(b, tol) - numeric_rank(both, tol);
}

RVector principal_angles(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.cols() || a.rows() != b.rows())
    fail(ErrorKind::InvalidMatrix, "principal angles need subspaces of equal dimension");
  if (a.cols() == 0) return RVector(0);
  Eigen::HouseholderQR<CMatrix> qra(a), qrb(b);
  const CMatrix qa = qra.householderQ() * CMatrix::Identity(a.rows(), a.cols());
  const CMatrix qb = qrb.householderQ() * CMatrix::Identity(b.rows(), b.cols());
  // Sines from the residual of projecting b onto a; accurate for tiny angles.
  const CMatrix resid = qb - qa * (qa.adjoint() * qb);
  RVector s = singular_values(resid);
  RVector angles(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) angles(i) = std::asin(std::min(1.0, s(i)));
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

double max_principal_angle(const CMatrix& a, const CMatrix& b) {
  const RVector ang = principal_angles(a, b);
  return ang.size() == 0 ? 0.0 : ang.maxCoeff();
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

bool is_unitary(const CMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).norm() <= tol;
}

bool is_hermitian(const CMatrix& h, double tol) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).norm() <= tol;
}

CMatrix hermitian_sqrt(const CMatrix& h) {
  return hermitian_function(h, [](double x) { return std::sqrt(std::max(0.0, x)); });
}

CMatrix hermitian_inv_sqrt(const CMatrix& h) {
  const RVector ev = eigenvalues_desc(h);
  if (ev.size() > 0 && !(ev(ev.size() - 1) > 0.0))
    fail(ErrorKind::SingularMatrix, "inverse square root of a non-positive matrix");
  return hermitian_function(h, [](double x) { return 1.0 / std::sqrt(x); });
}

CMatrix exp_2pi_i(const CMatrix& delta) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(delta));
  const RVector ev = es.eigenvalues();
  CVector ph(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) ph(i) = std::polar(1.0, 2.0 * std::numbers::pi * ev(i));
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix principal_log_unitary(const CMatrix& u, const Tolerance& tol) {
  require_finite(u, "principal_log_unitary input");
  if (!is_unitary(u, tol.residual_abs)) fail(ErrorKind::InvalidMatrix, "input is not unitary");
  const Eigen::Index n = u.rows();
  if (n == 0) return CMatrix(0, 0);
  // Schur form of a normal matrix is diagonal with a unitary factor, also
  // when eigenvalues cluster.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  RVector theta(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cd lam = t(i, i);
    if (std::abs(lam + 1.0) <= tol.residual_abs)
      fail(ErrorKind::BranchAmbiguous, "eigenvalue -1: logarithm branch undefined");
    theta(i) = std::arg(lam) / (2.0 * std::numbers::pi);
  }
  return hermitian_part(q * theta.cast<cd>().asDiagonal() * q.adjoint());
}

CMatrix polar_positive_factor(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "polar input");
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidMatrix, "polar factor needs a square matrix");
  if (m.rows() == 0) return m;
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > tol.rank_rel * sv(0))) fail(ErrorKind::SingularMatrix, "matrix is singular");
  const CMatrix& uu = svd.matrixU();
  return hermitian_part(uu * sv.cast<cd>().asDiagonal() * uu.adjoint());
}

CMatrix polar_unitary_factor(const CMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorKind::InvalidMatrix, "polar factor needs a square matrix");
  if (m.rows() == 0) return m;
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CMatrix m(rows, cols);
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double re = nd(rng);
      const double im = nd(rng);
      m(i, j) = cd(re * s, im * s);
    }
  return m;
}

CMatrix haar_unitary(int n, Rng& rng) {
  const CMatrix z = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cd d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0 ? d / a : cd(1.0, 0.0));
  }
  return q;
}

std::vector<int> random_ints(int count, int lo, int hi, Rng& rng) {
  std::uniform_int_distribution<int> ud(lo, hi);
  std::vector<int> out(count);
  for (int& v : out) v = ud(rng);
  return out;
}

RVector eigenvalues_desc(const CMatrix& h) {
  if (h.rows() == 0) return RVector(0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  RVector ev = es.eigenvalues();
  return ev.reverse();
}

std::vector<int> cluster_sizes(const RVector& v, double tol) {
  std::vector<int> sizes;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0 && std::abs(v(i) - v(i - 1)) <= tol)
      ++sizes.back();
    else
      sizes.push_back(1);
  }
  return sizes;
}

}  // namespace gfb
