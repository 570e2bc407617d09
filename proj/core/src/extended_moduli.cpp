#include "gfb/extended_moduli.hpp"

#include "gfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gfb {

namespace {

constexpr double kBoundaryTol = 1e-7;
constexpr int kMaxAttempts = 200;

CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b * a.adjoint() * b.adjoint(); }

void check_unitary_seq(const std::vector<CMatrix>& v, int n, const char* name, double tol) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].rows() != n || v[i].cols() != n)
      fail(ErrorKind::InvalidMatrix, std::string(name) + "[" + std::to_string(i) + "] has the wrong shape");
    require_finite(v[i], name);
    if (!is_unitary(v[i], tol)) fail(ErrorKind::InvalidMatrix, std::string(name) + "[" + std::to_string(i) + "] is not unitary");
  }
}

// Product of the commutators and the conjugated exponentials with i ≥ 2.
CMatrix commutator_part(const EMPoint& pt) {
  CMatrix p = CMatrix::Identity(pt.n, pt.n);
  for (int j = 0; j < pt.genus; ++j) p = p * commutator(pt.A[j], pt.B[j]);
  return p;
}

CMatrix tail_part(const EMPoint& pt) {
  CMatrix q = CMatrix::Identity(pt.n, pt.n);
  for (int i = 1; i < pt.ell(); ++i) q = q * pt.C[i] * exp_2pi_i(pt.delta[i]) * pt.C[i].adjoint();
  return q;
}

CMatrix random_hermitian(int n, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  const CMatrix q = haar_unitary(n, rng);
  CVector d(n);
  for (int j = 0; j < n; ++j) d(j) = u(rng);
  return q * d.asDiagonal() * q.adjoint();
}

int boundary_count(const CMatrix& delta, double sign) {
  const RVector ev = eigenvalues_desc(delta);
  int c = 0;
  for (Eigen::Index j = 0; j < ev.size(); ++j)
    if (std::abs(ev(j) - sign * 0.5) <= kBoundaryTol) ++c;
  return c;
}

}  // namespace

void EMPoint::validate(const Tolerance& tol) const {
  if (n < 1 || genus < 0) fail(ErrorKind::InvalidMatrix, "EM point needs n >= 1 and genus >= 0");
  if (static_cast<int>(A.size()) != genus || static_cast<int>(B.size()) != genus)
    fail(ErrorKind::InvalidMatrix, "A and B must have genus entries");
  if (C.empty()) fail(ErrorKind::InvalidMatrix, "EM point needs at least one marked point");
  if (delta.size() != C.size()) fail(ErrorKind::InvalidMatrix, "delta and C lengths differ");
  const double ut = std::max(tol.residual_abs, 1e-9);
  check_unitary_seq(A, n, "A", ut);
  check_unitary_seq(B, n, "B", ut);
  check_unitary_seq(C, n, "C", ut);
  if ((C[0] - CMatrix::Identity(n, n)).norm() > ut) fail(ErrorKind::InvalidMatrix, "C_1 must be the identity");
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (delta[i].rows() != n || delta[i].cols() != n) fail(ErrorKind::InvalidMatrix, "delta has the wrong shape");
    require_finite(delta[i], "delta");
    if (!is_hermitian(delta[i], ut)) fail(ErrorKind::InvalidMatrix, "delta must be Hermitian");
    const RVector ev = eigenvalues_desc(delta[i]);
    if (ev(0) > 0.5 + kBoundaryTol || ev(n - 1) < -0.5 - kBoundaryTol)
      fail(ErrorKind::InvalidMatrix, "delta eigenvalues must lie in [-1/2, 1/2]");
  }
}

void GMPoint::validate(const Tolerance& tol) const {
  em.validate(tol);
  if (planes.size() != em.C.size()) fail(ErrorKind::InvalidMatrix, "one plane per marked point required");
  for (const auto& p : planes)
    if (p.m() != em.n || p.n() != em.n || p.k() != em.n)
      fail(ErrorKind::InvalidMatrix, "planes must be n-planes in C^n ⊕ C^n");
}

CMatrix relation_lhs(const EMPoint& pt) {
  return commutator_part(pt) * exp_2pi_i(pt.delta[0]) * tail_part(pt);
}

double relation_residual(const EMPoint& pt) {
  return (relation_lhs(pt) - CMatrix::Identity(pt.n, pt.n)).norm();
}

EMPoint solve_delta1(EMPoint pt, const Tolerance& tol) {
  if (pt.delta.size() != pt.C.size()) pt.delta.resize(pt.C.size(), CMatrix::Zero(pt.n, pt.n));
  if (pt.delta[0].rows() != pt.n) pt.delta[0] = CMatrix::Zero(pt.n, pt.n);
  const CMatrix isolated = commutator_part(pt).adjoint() * tail_part(pt).adjoint();
  pt.delta[0] = principal_log_unitary(isolated, tol);
  return pt;
}

std::vector<CMatrix> em_moment(const EMPoint& pt) { return pt.delta; }

EMPoint conjugate(const EMPoint& pt, const CMatrix& u) {
  EMPoint out = pt;
  auto conj = [&u](CMatrix& m) { m = u * m * u.adjoint(); };
  for (auto& m : out.A) conj(m);
  for (auto& m : out.B) conj(m);
  for (std::size_t i = 1; i < out.C.size(); ++i) conj(out.C[i]);
  for (auto& m : out.delta) conj(m);
  return out;
}

double gm_level_residual(const GMPoint& pt, const Tolerance& tol) {
  const int n = pt.em.n;
  const CMatrix id = CMatrix::Identity(n, n);
  double worst = 0.0;
  for (std::size_t i = 0; i < pt.planes.size(); ++i) {
    const CMatrix bs = b_star(pt.planes[i], tol);
    const CMatrix rhs = 0.5 * (id - 2.0 * bs.adjoint() * bs);
    worst = std::max(worst, (pt.em.delta[i] - rhs).norm());
  }
  return worst;
}

std::vector<CMatrix> gm_right_moment(const GMPoint& pt, const Tolerance& tol) {
  const int n = pt.em.n;
  const CMatrix id = CMatrix::Identity(n, n);
  std::vector<CMatrix> out;
  for (const auto& g : pt.planes) {
    const CMatrix ds = d_star(g, tol);
    out.push_back(cd(0.0, 0.5) * (id - 2.0 * ds.adjoint() * ds));
  }
  return out;
}

TraceReport trace_checks(const GMPoint& pt, std::int64_t delta0, const Tolerance& tol) {
  (void)tol;
  const int n = pt.em.n;
  const int ell = pt.em.ell();
  TraceReport r;
  for (const auto& d : pt.em.delta) {
    r.trace_sum += d.trace().real();
    r.s.push_back(boundary_count(d, 1.0));
    r.t.push_back(boundary_count(d, -1.0));
  }
  r.integral = std::abs(r.trace_sum - std::round(r.trace_sum)) <= 1e-8;
  r.matches_degree = std::abs(r.trace_sum + static_cast<double>(delta0)) <= 1e-8;
  const double shifted = r.trace_sum + 0.5 * n * ell;
  r.shifted_identity = std::abs(shifted - (0.5 * n * ell - static_cast<double>(delta0))) <= 1e-8;
  const cd phase = std::exp(cd(0.0, 2.0 * std::numbers::pi * r.trace_sum));
  r.det_residual = std::abs(relation_lhs(pt.em).determinant() - phase);
  int ss = 0, tt = 0;
  for (int i = 0; i < ell; ++i) {
    ss += r.s[i];
    tt += r.t[i];
  }
  // 2Σs ≤ ℓn − 2δ₀ keeps the comparison in integers.
  r.s_bound = 2 * static_cast<std::int64_t>(ss) <= static_cast<std::int64_t>(ell) * n - 2 * delta0;
  r.t_bound = 2 * static_cast<std::int64_t>(tt) <= static_cast<std::int64_t>(ell) * n + 2 * delta0;
  return r;
}

LevelSetReport level_set_identity(const GMPoint& pt, const Tolerance& tol) {
  const int n = pt.em.n;
  LevelSetReport r;
  r.holds = true;
  for (std::size_t i = 0; i < pt.planes.size(); ++i) {
    r.plus_half.push_back(boundary_count(pt.em.delta[i], 1.0));
    r.minus_half.push_back(boundary_count(pt.em.delta[i], -1.0));
    r.kernel_b.push_back(n - checked_rank(b_star(pt.planes[i], tol), tol));
    r.kernel_d.push_back(n - checked_rank(d_star(pt.planes[i], tol), tol));
    r.holds = r.holds && r.plus_half.back() == r.kernel_b.back() && r.minus_half.back() == r.kernel_d.back();
  }
  return r;
}

int generated_algebra_dim(const std::vector<CMatrix>& gens, int depth, const Tolerance& tol) {
  if (gens.empty()) return 1;
  const Eigen::Index n = gens.front().rows();
  const Eigen::Index nn = n * n;
  // Orthonormal basis of the span so far, as vectorized matrices.
  CMatrix basis(nn, 0);
  auto try_add = [&](const CMatrix& m) {
    CVector v = Eigen::Map<const CVector>(m.data(), nn);
    const double scale = v.norm();
    if (scale == 0.0) return false;
    v /= scale;
    for (int pass = 0; pass < 2; ++pass) v -= basis * (basis.adjoint() * v);
    const double res = v.norm();
    if (res <= std::max(tol.rank_rel, 1e-10) * 1e2) return false;
    basis.conservativeResize(nn, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v / res;
    return true;
  };
  std::vector<CMatrix> frontier{CMatrix::Identity(n, n)};
  try_add(frontier.front());
  for (int d = 0; d < depth && !frontier.empty() && basis.cols() < nn; ++d) {
    std::vector<CMatrix> next;
    for (const auto& w : frontier)
      for (const auto& g : gens) {
        CMatrix prod = w * g;
        if (try_add(prod)) next.push_back(std::move(prod));
      }
    frontier = std::move(next);
  }
  return static_cast<int>(basis.cols());
}

SmoothnessFlags smoothness_hypotheses(const GMPoint& pt, const Tolerance& tol) {
  SmoothnessFlags f;
  for (const auto& d : pt.em.delta) {
    const RVector ev = eigenvalues_desc(d);
    bool all_inside = true;
    for (Eigen::Index j = 0; j < ev.size(); ++j) {
      const bool boundary = std::abs(std::abs(ev(j)) - 0.5) <= kBoundaryTol;
      if (boundary) all_inside = false;
      else f.non_boundary = true;
    }
    f.interior_point = f.interior_point || all_inside;
  }
  std::vector<CMatrix> gens;
  for (const auto& m : pt.em.A) gens.push_back(m);
  for (const auto& m : pt.em.B) gens.push_back(m);
  for (int i = 0; i < pt.em.ell(); ++i) gens.push_back(pt.em.C[i] * pt.em.delta[i] * pt.em.C[i].adjoint());
  f.algebra_dim = generated_algebra_dim(gens, kWordDepth, tol);
  f.irreducible = f.algebra_dim == pt.em.n * pt.em.n;
  return f;
}

Plane level_plane(const CMatrix& delta, const CMatrix& W, const CMatrix& Y, const Tolerance& tol) {
  // Eigenvalues within residual_abs of ±1/2 are snapped so the square roots
  // vanish exactly instead of turning rounding into ~1e-8 singular values.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (delta + delta.adjoint()));
  const RVector ev = es.eigenvalues();
  RVector minus(ev.size()), plus(ev.size());
  for (Eigen::Index j = 0; j < ev.size(); ++j) {
    if (std::abs(ev(j)) > 0.5 + tol.residual_abs)
      fail(ErrorKind::InvalidMatrix, "delta has an eigenvalue outside [-1/2, 1/2]");
    double x = std::clamp(ev(j), -0.5, 0.5);
    if (0.5 - x <= tol.residual_abs) x = 0.5;
    if (x + 0.5 <= tol.residual_abs) x = -0.5;
    minus(j) = std::sqrt(0.5 - x);
    plus(j) = std::sqrt(0.5 + x);
  }
  const CMatrix& v = es.eigenvectors();
  const CMatrix bstar = W.adjoint() * v * minus.cast<cd>().asDiagonal() * v.adjoint();
  const CMatrix dstar = W.adjoint() * v * plus.cast<cd>().asDiagonal() * v.adjoint() * Y.adjoint();
  return plane_from_annihilator(bstar, dstar, tol);
}

RandomEM random_em_point(int n, int genus, int ell, std::uint64_t seed, const Tolerance& tol) {
  if (n < 1 || genus < 0 || ell < 1) fail(ErrorKind::InvalidMatrix, "random point needs n >= 1, genus >= 0, ell >= 1");
  Rng rng(seed);
  EMPoint pt;
  pt.n = n;
  pt.genus = genus;
  for (int j = 0; j < genus; ++j) {
    pt.A.push_back(haar_unitary(n, rng));
    pt.B.push_back(haar_unitary(n, rng));
  }
  pt.C.push_back(CMatrix::Identity(n, n));
  pt.delta.push_back(CMatrix::Zero(n, n));
  for (int i = 1; i < ell; ++i) {
    pt.C.push_back(haar_unitary(n, rng));
    pt.delta.push_back(random_hermitian(n, -0.45, 0.45, rng));
  }
  pt = solve_delta1(std::move(pt), tol);
  double tr = 0.0;
  for (const auto& d : pt.delta) tr += d.trace().real();
  return {pt, -static_cast<std::int64_t>(std::llround(tr))};
}

GMPoint random_gm_point(int n, int genus, int ell, std::int64_t delta0, std::uint64_t seed, const Tolerance& tol) {
  if (n < 1 || genus < 0 || ell < 1) fail(ErrorKind::InvalidMatrix, "random point needs n >= 1, genus >= 0, ell >= 1");
  if (2 * std::abs(delta0) >= static_cast<std::int64_t>(ell) * n)
    fail(ErrorKind::InfeasibleDegree, "degree " + std::to_string(delta0) + " needs |delta0| < n*ell/2");
  Rng rng(seed);
  // Bias the free spectra toward the average trace the degree asks for.
  const double center = std::clamp(-static_cast<double>(delta0) / (n * ell), -0.3, 0.3);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    EMPoint pt;
    pt.n = n;
    pt.genus = genus;
    for (int j = 0; j < genus; ++j) {
      pt.A.push_back(haar_unitary(n, rng));
      pt.B.push_back(haar_unitary(n, rng));
    }
    pt.C.push_back(CMatrix::Identity(n, n));
    pt.delta.push_back(CMatrix::Zero(n, n));
    const double spread = attempt < kMaxAttempts / 2 ? 0.15 : 0.45 - std::abs(center);
    for (int i = 1; i < ell; ++i) {
      pt.C.push_back(haar_unitary(n, rng));
      pt.delta.push_back(random_hermitian(n, std::max(-0.45, center - spread), std::min(0.45, center + spread), rng));
    }
    try {
      pt = solve_delta1(std::move(pt), tol);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::BranchAmbiguous) continue;
      throw;
    }
    double tr = 0.0;
    for (const auto& d : pt.delta) tr += d.trace().real();
    if (std::llround(tr) != -delta0) continue;
    const RVector ev1 = eigenvalues_desc(pt.delta[0]);
    if (ev1(0) > 0.45 || ev1(n - 1) < -0.45) continue;

    GMPoint gm;
    gm.em = std::move(pt);
    gm.delta0 = delta0;
    for (int i = 0; i < ell; ++i)
      gm.planes.push_back(level_plane(gm.em.delta[i], haar_unitary(n, rng), haar_unitary(n, rng), tol));
    return gm;
  }
  fail(ErrorKind::InfeasibleDegree, "no point of degree " + std::to_string(delta0) + " found within the attempt budget");
}

}  // namespace gfb
