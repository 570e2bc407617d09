#include "gfb/gpb.hpp"

#include "gfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace gfb {

namespace {

using IndexMap = std::map<std::vector<int>, Eigen::Index>;

IndexMap index_map(int ambient, int k) {
  IndexMap m;
  Eigen::Index i = 0;
  for (auto& s : subsets(ambient, k)) m.emplace(std::move(s), i++);
  return m;
}

void require_plucker_size(const PluckerVector& v, const char* name) {
  if (binomial(v.ambient, v.k) != v.coords.size())
    fail(ErrorKind::InvalidMatrix, std::string(name) + " has an inconsistent coordinate count");
}

// Coordinates of a Plücker vector after relabeling the ambient basis; keys are sorted new subsets.
std::map<std::vector<int>, cd> relabel(const PluckerVector& v, const std::vector<int>& new_index) {
  std::map<std::vector<int>, cd> out;
  Eigen::Index i = 0;
  for (const auto& s : subsets(v.ambient, v.k)) {
    const cd c = v.coords(i++);
    if (c == cd(0.0, 0.0)) continue;
    std::vector<int> mapped;
    mapped.reserve(s.size());
    for (int x : s) mapped.push_back(new_index[x]);
    // Sign of the permutation sorting the mapped labels.
    int inversions = 0;
    for (std::size_t a = 0; a < mapped.size(); ++a)
      for (std::size_t b = a + 1; b < mapped.size(); ++b)
        if (mapped[a] > mapped[b]) ++inversions;
    std::sort(mapped.begin(), mapped.end());
    out.emplace(std::move(mapped), inversions % 2 == 0 ? c : -c);
  }
  return out;
}

}  // namespace

void GPBundle::validate(const Tolerance& tol) const {
  (void)tol;
  if (n < 1 || genus < 0) fail(ErrorKind::InvalidMatrix, "GPB needs n >= 1 and genus >= 0");
  for (const auto& g : planes)
    if (g.m() != n || g.n() != n || g.k() != n) fail(ErrorKind::InvalidMatrix, "GPB planes must be n-planes in C^n ⊕ C^n");
}

Plane compose_planes(const Plane& gp, const Plane& gq, const Tolerance& tol) {
  const int n = gp.n();
  if (gq.m() != n) fail(ErrorKind::InvalidMatrix, "framing dimensions of the two planes differ");
  const CMatrix pc = gp.second_block();
  const CMatrix qc = gq.first_block();
  CMatrix span(n, pc.cols() + qc.cols());
  span << pc, qc;
  if (checked_rank(span, tol) < n) fail(ErrorKind::SpanDeficient, "framing projections do not span C^n");
  CMatrix stacked(n, pc.cols() + qc.cols());
  stacked << pc, -qc;
  const CMatrix ker = null_space(stacked, tol);
  CMatrix cols(gp.m() + gq.n(), ker.cols());
  cols << gp.first_block() * ker.topRows(pc.cols()), gq.second_block() * ker.bottomRows(qc.cols());
  if (checked_rank(cols, tol) < ker.cols())
    fail(ErrorKind::DiagonalKernel, "the planes share a nonzero framing vector");
  return Plane::from_span(gp.m(), gq.n(), cols, tol);
}

Plane swap_summands(const Plane& g) {
  CMatrix b(g.m() + g.n(), g.k());
  b << g.second_block(), g.first_block();
  return Plane::from_basis(g.n(), g.m(), b);
}

PluckerVector plucker_compose(const PluckerVector& beta_p, const PluckerVector& beta_q, int framing_dim,
                              double zero_tol) {
  require_plucker_size(beta_p, "beta_p");
  require_plucker_size(beta_q, "beta_q");
  const int n = framing_dim;
  const int a = beta_p.ambient - n;
  const int b = beta_q.ambient - n;
  if (a < 0 || b < 0) fail(ErrorKind::InvalidMatrix, "framing dimension exceeds the ambient space");
  const int rp = beta_p.k;
  const int rq = beta_q.k;
  const int k_out = rp + rq - n;
  if (k_out < 0 || k_out > a + b) fail(ErrorKind::InvalidMatrix, "row counts are incompatible with the framing");
  if (binomial(a + b, k_out) > kPluckerCap) fail(ErrorKind::TooLarge, "composed Plücker vector too large");

  // Common labels: E_p → [0, a), E_q → [a, a+b), C^n → [a+b, a+b+n).
  std::vector<int> lp(a + n), lq(n + b);
  for (int i = 0; i < a; ++i) lp[i] = i;
  for (int i = 0; i < n; ++i) lp[a + i] = a + b + i;
  for (int i = 0; i < n; ++i) lq[i] = a + b + i;
  for (int i = 0; i < b; ++i) lq[n + i] = a + i;
  const auto cp = relabel(beta_p, lp);
  const auto cq = relabel(beta_q, lq);

  PluckerVector out{k_out, a + b, CVector::Zero(binomial(a + b, k_out))};
  Eigen::Index idx = 0;
  const auto splits = subsets(rp + rq, rp);
  for (const auto& iv : subsets(a + b, k_out)) {
    std::vector<int> K = iv;
    for (int i = 0; i < n; ++i) K.push_back(a + b + i);
    cd acc(0.0, 0.0);
    // Laplace expansion of the stacked rows along the β^p block.
    for (const auto& pos : splits) {
      std::vector<int> I, J;
      std::vector<char> in_i(K.size(), 0);
      int possum = 0;
      for (int x : pos) {
        in_i[x] = 1;
        possum += x;
      }
      for (std::size_t x = 0; x < K.size(); ++x) (in_i[x] ? I : J).push_back(K[x]);
      const auto ip = cp.find(I);
      if (ip == cp.end()) continue;
      const auto jq = cq.find(J);
      if (jq == cq.end()) continue;
      const int sgn_exp = possum + rp * (rp - 1) / 2;
      const cd term = ip->second * jq->second;
      acc += (sgn_exp % 2 == 0) ? term : -term;
    }
    out.coords(idx++) = acc;
  }
  const double scale = std::max(1.0, beta_p.coords.norm() * beta_q.coords.norm());
  if (out.coords.norm() <= zero_tol * scale)
    fail(ErrorKind::DiagonalKernel, "contracted wedge vanishes");
  return out;
}

Rational gpb_pardeg(const GPBundle& bundle, const GPBWitness& wit, const Tolerance& tol) {
  bundle.validate(tol);
  const int n = bundle.n;
  const std::size_t ell = bundle.planes.size();
  if (wit.fibers_p.size() != ell || wit.fibers_q.size() != ell)
    fail(ErrorKind::InvalidMatrix, "witness needs fibers at every point pair");
  Rational total(wit.delta0_prime);
  for (std::size_t i = 0; i < ell; ++i) {
    const CMatrix& fp = wit.fibers_p[i];
    const CMatrix& fq = wit.fibers_q[i];
    if (fp.rows() != n || fq.rows() != n || fp.cols() != wit.n_prime || fq.cols() != wit.n_prime)
      fail(ErrorKind::InvalidMatrix, "witness fiber has the wrong shape");
    CMatrix both = CMatrix::Zero(2 * n, 2 * wit.n_prime);
    both.topLeftCorner(n, wit.n_prime) = fp;
    both.bottomRightCorner(n, wit.n_prime) = fq;
    total += intersection_dim(both, bundle.planes[i].basis(), tol) - wit.n_prime;
  }
  return total;
}

GPBResult gpb_semistable(const GPBundle& bundle, const std::vector<GPBWitness>& witnesses, const Tolerance& tol) {
  bundle.validate(tol);
  const int n = bundle.n;
  GPBWitness whole{n, bundle.delta0,
                   std::vector<CMatrix>(bundle.planes.size(), CMatrix::Identity(n, n)),
                   std::vector<CMatrix>(bundle.planes.size(), CMatrix::Identity(n, n))};
  GPBResult res;
  res.pardeg_E = gpb_pardeg(bundle, whole, tol);
  const Rational slope = res.pardeg_E / n;
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    if (witnesses[w].n_prime < 1 || witnesses[w].n_prime >= n)
      fail(ErrorKind::InvalidMatrix, "witness rank must satisfy 1 <= n' < n");
    const Rational diff = slope - gpb_pardeg(bundle, witnesses[w], tol) / witnesses[w].n_prime;
    if (diff < 0) {
      res.verdict = Verdict::Unstable;
      res.violating_witness = w;
      return res;
    }
    if (diff == 0 && res.verdict == Verdict::Stable) {
      res.verdict = Verdict::Semistable;
      res.violating_witness = w;
    }
  }
  return res;
}

ChainReport inequality_chain(int n, int ell, std::int64_t delta0, int n_prime, std::int64_t delta0_prime) {
  if (n_prime < 1 || n_prime >= n) fail(ErrorKind::InvalidMatrix, "chain needs 1 <= n' < n");
  const Rational D = Rational(delta0) / n - Rational(delta0_prime) / n_prime;
  ChainReport r;
  r.middle = D + Rational(ell) * std::min(n - n_prime, n_prime) / n_prime;
  r.right = D + Rational(2 * ell) * (n - n_prime) / n;
  r.holds = r.middle > 0 && r.middle <= r.right;
  return r;
}

bool degree_bound_ok(int n, int ell, std::int64_t delta0) {
  return 2 * delta0 <= 4 * static_cast<std::int64_t>(ell) + n;
}

UnitaryComposition unitary_compose(const CMatrix& bp_star, const CMatrix& dp_star, const CMatrix& bq_star,
                                   const CMatrix& dq_star, const Tolerance& tol) {
  tol.validate();
  const Eigen::Index n = dp_star.rows();
  for (const CMatrix* m : {&bp_star, &dp_star, &bq_star, &dq_star}) {
    if (m->rows() != n || m->cols() != n) fail(ErrorKind::InvalidMatrix, "unitary composition needs n×n blocks");
    require_finite(*m, "composition block");
  }
  const CMatrix id = CMatrix::Identity(n, n);
  auto rows_ok = [&](const CMatrix& b, const CMatrix& d) {
    return (b * b.adjoint() + d * d.adjoint() - id).norm() <= std::max(tol.residual_abs, 1e-9);
  };
  if (!rows_ok(bp_star, dp_star) || !rows_ok(bq_star, dq_star))
    fail(ErrorKind::InvalidFrame, "rows (b*, d*) must be orthonormal");
  const CMatrix dp = dp_star.adjoint();
  const CMatrix dq = dq_star.adjoint();
  const double constraint = (dp * dp.adjoint() + dq * dq.adjoint() - id).norm();
  if (constraint > std::max(tol.residual_abs, 1e-9))
    fail(ErrorKind::MomentMismatch, "d_p d_p* + d_q d_q* differs from I by " + std::to_string(constraint));

  UnitaryComposition res;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(dp * dp.adjoint()));
  res.D = es.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  res.u = es.eigenvectors().adjoint();
  res.u_p = polar_unitary_factor(res.u * dp);
  res.u_q = polar_unitary_factor(res.u * dq);
  RVector sp(n), sq(n), scale(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = res.D(j);
    sp(j) = std::sqrt(1.0 - d);
    sq(j) = std::sqrt(d);
    scale(j) = 1.0 / std::sqrt((1.0 - d) * (1.0 - d) + d * d);
  }
  res.rows.resize(n, 2 * n);
  res.rows << scale.asDiagonal() * (sp.asDiagonal() * (res.u_p * bp_star)),
      -(scale.asDiagonal() * (sq.asDiagonal() * (res.u_q * bq_star)));
  res.orthonormality_residual = (res.rows * res.rows.adjoint() - id).norm();
  if (res.orthonormality_residual > std::max(tol.residual_abs, 1e-9))
    fail(ErrorKind::InvalidFrame, "composed rows are not orthonormal");
  res.plane = plane_from_annihilator(res.rows.leftCols(n), res.rows.rightCols(n), tol);
  return res;
}

std::optional<DestabilizingCertificate> find_destabilizing_1ps(int p, const Plane& beta_p, const Plane& beta_q,
                                                               const CVector& common, int ell, const Tolerance& tol) {
  const int n = beta_p.n();
  if (beta_p.m() != p || beta_q.m() != p || beta_q.n() != n || beta_p.k() != n || beta_q.k() != n)
    fail(ErrorKind::InvalidMatrix, "pair planes must be n-planes in V* ⊕ C^n");
  if (common.size() != n) fail(ErrorKind::InvalidMatrix, "common vector has the wrong size");
  if (ell < 1) fail(ErrorKind::InvalidMatrix, "ell must be positive");
  const double norm = common.norm();
  if (!(norm > 0.0)) return std::nullopt;
  const CVector y = common / norm;
  const CMatrix rp = beta_p.basis().adjoint();
  const CMatrix rq = beta_q.basis().adjoint();
  const double lim = std::max(tol.residual_abs, 1e-9);
  if ((rp.rightCols(n) * y).norm() > lim || (rq.rightCols(n) * y).norm() > lim) return std::nullopt;

  DestabilizingCertificate cert;
  cert.framing_basis.resize(n, n);
  cert.framing_basis.col(0) = y;
  if (n > 1) cert.framing_basis.rightCols(n - 1) = complement(y, n, tol);
  // Positive weight on e_1*, −1 everywhere else, summing to zero over S(GL(p) × GL(n)^ℓ).
  cert.v_weights.assign(p, -1);
  cert.framing_weights.assign(n, -1);
  cert.framing_weights[0] = static_cast<std::int64_t>(p) + static_cast<std::int64_t>(ell) * n - 1;

  auto max_weight = [&](const CMatrix& rows) {
    CMatrix r(n, p + n);
    r << rows.leftCols(p), rows.rightCols(n) * cert.framing_basis;
    const PluckerVector pv = plucker_of_rows(r);
    const double cut = 1e-9 * std::max(1e-300, pv.coords.cwiseAbs().maxCoeff());
    std::int64_t best = std::numeric_limits<std::int64_t>::min();
    Eigen::Index i = 0;
    for (const auto& s : subsets(p + n, n)) {
      if (std::abs(pv.coords(i++)) <= cut) continue;
      std::int64_t w = 0;
      for (int x : s) w += x < p ? cert.v_weights[x] : cert.framing_weights[x - p];
      best = std::max(best, w);
    }
    return best;
  };
  cert.max_weight_p = max_weight(rp);
  cert.max_weight_q = max_weight(rq);
  cert.certifies = cert.max_weight_p < 0 && cert.max_weight_q < 0;
  return cert;
}

}  // namespace gfb
