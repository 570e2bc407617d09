#include "gfb/correspondence.hpp"

#include "gfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gfb {

namespace {

const Rational kHalf = Rational(1) / 2;

// Orthonormal basis of span(q) chosen by pivoted Gram-Schmidt on the projector columns, so
// the result depends only on the subspace (coordinate vectors are reproduced exactly).
CMatrix canonical_basis(const CMatrix& q, const Tolerance& tol) {
  const int dim = static_cast<int>(q.rows());
  const CMatrix on = column_space(q, tol);
  const int k = static_cast<int>(on.cols());
  CMatrix residual = on * on.adjoint();
  CMatrix out(dim, k);
  for (int c = 0; c < k; ++c) {
    int best = 0;
    double best_norm = -1.0;
    for (int j = 0; j < dim; ++j) {
      const double nj = residual.col(j).norm();
      if (nj > best_norm * (1.0 + 1e-12)) {
        best_norm = nj;
        best = j;
      }
    }
    CVector v = residual.col(best) / best_norm;
    out.col(c) = v;
    residual -= v * (v.adjoint() * residual);
  }
  return out;
}

CMatrix canonical_complement(const CMatrix& basis, int dim, const Tolerance& tol) {
  if (basis.cols() == 0) return CMatrix::Identity(dim, dim);
  const CMatrix proj = CMatrix::Identity(dim, dim) - basis * basis.adjoint();
  return canonical_basis(proj, tol);
}

int dim_of(const CMatrix& m, const Tolerance& tol) { return m.cols() == 0 ? 0 : numeric_rank(m, tol); }

}  // namespace

void ParabolicData::validate(const Tolerance& tol) const {
  if (n < 1) fail(ErrorKind::InvalidMatrix, "parabolic data needs n >= 1");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const std::string where = "point " + std::to_string(i) + ": ";
    if (pt.flag.size() != static_cast<std::size_t>(n + 3))
      fail(ErrorKind::InvalidMatrix, where + "flag must have n+3 entries");
    if (pt.weights.size() != static_cast<std::size_t>(n + 2))
      fail(ErrorKind::InvalidMatrix, where + "weights must have n+2 entries");
    for (const auto& f : pt.flag) {
      if (f.rows() != n) fail(ErrorKind::InvalidMatrix, where + "flag subspace has wrong ambient dimension");
      require_finite(f, "flag subspace");
    }
    if (dim_of(pt.flag.front(), tol) != 0) fail(ErrorKind::InvalidMatrix, where + "F_{-1} must be zero");
    if (dim_of(pt.flag.back(), tol) != n) fail(ErrorKind::InvalidMatrix, where + "F_{n+1} must be everything");
    for (std::size_t j = 1; j < pt.flag.size(); ++j) {
      const CMatrix& lo = pt.flag[j - 1];
      const CMatrix& hi = pt.flag[j];
      CMatrix both(n, lo.cols() + hi.cols());
      both << lo, hi;
      if (dim_of(both, tol) != dim_of(hi, tol))
        fail(ErrorKind::InvalidMatrix, where + "flag is not nested at step " + std::to_string(j));
    }
    if (pt.weights.front() != kHalf || pt.weights.back() != -kHalf)
      fail(ErrorKind::InvalidMatrix, where + "boundary weights must be +1/2 and -1/2");
    for (std::size_t j = 1; j < pt.weights.size(); ++j)
      if (pt.weights[j] > pt.weights[j - 1]) fail(ErrorKind::InvalidMatrix, where + "weights must decrease");
    for (int j = 1; j <= n; ++j)
      if (pt.weights[j] <= -kHalf || pt.weights[j] >= kHalf)
        fail(ErrorKind::InvalidMatrix, where + "interior weights must lie in (-1/2, 1/2)");
  }
}

std::vector<CMatrix> induced_flag(const Plane& g, const Tolerance& tol) {
  const int n = g.n();
  const int m = g.m();
  std::vector<CMatrix> flag;
  flag.reserve(n + 3);
  flag.emplace_back(m, 0);
  for (int j = 0; j <= n; ++j) {
    // Fiber summand plus the first j framing coordinates.
    CMatrix sub = CMatrix::Zero(m + n, m + j);
    sub.topLeftCorner(m, m).setIdentity();
    if (j > 0) sub.block(m, m, j, j).setIdentity();
    const CMatrix cap = intersect(g.basis(), sub, tol);
    flag.push_back(column_space(cap.topRows(m), tol));
  }
  flag.push_back(CMatrix::Identity(m, m));
  return flag;
}

std::vector<int> flag_jumps(const std::vector<CMatrix>& flag, const Tolerance& tol) {
  std::vector<int> jumps;
  for (std::size_t j = 1; j < flag.size(); ++j) jumps.push_back(dim_of(flag[j], tol) - dim_of(flag[j - 1], tol));
  return jumps;
}

std::vector<int> restricted_flag_jumps(const std::vector<CMatrix>& flag, const CMatrix& fiber, const Tolerance& tol) {
  std::vector<CMatrix> cut;
  cut.reserve(flag.size());
  for (const auto& f : flag) cut.push_back(intersect(f, fiber, tol));
  return flag_jumps(cut, tol);
}

Rational pardeg(std::int64_t delta0_prime, int n_prime, const std::vector<std::vector<int>>& jumps,
                const std::vector<std::vector<Rational>>& weights) {
  if (jumps.size() != weights.size()) fail(ErrorKind::InvalidMatrix, "jump and weight point counts differ");
  Rational total(delta0_prime);
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (jumps[i].size() != weights[i].size())
      fail(ErrorKind::InvalidMatrix, "weight count does not match flag jumps at point " + std::to_string(i));
    int rank = 0;
    for (std::size_t j = 0; j < jumps[i].size(); ++j) {
      if (jumps[i][j] < 0) fail(ErrorKind::InvalidMatrix, "negative flag jump");
      rank += jumps[i][j];
      total += Rational(jumps[i][j]) * weights[i][j];
    }
    if (rank != n_prime) fail(ErrorKind::InvalidMatrix, "flag jumps do not sum to the rank");
  }
  return total;
}

ParabolicResult parabolic_verdict(int n, std::int64_t delta0, const std::vector<std::vector<int>>& jumps,
                                  const std::vector<WitnessJumps>& witnesses,
                                  const std::vector<std::vector<Rational>>& weights) {
  ParabolicResult res;
  res.pardeg_E = pardeg(delta0, n, jumps, weights);
  const Rational slope = res.pardeg_E / n;
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    const auto& wit = witnesses[w];
    if (wit.n_prime < 1 || wit.n_prime >= n) fail(ErrorKind::InvalidMatrix, "witness rank must satisfy 1 <= n' < n");
    const Rational diff = slope - pardeg(wit.delta0_prime, wit.n_prime, wit.jumps, weights) / wit.n_prime;
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

std::vector<WitnessJumps> witness_jumps(const ParabolicData& parabolic, const std::vector<SubbundleWitness>& witnesses,
                                        const Tolerance& tol) {
  std::vector<WitnessJumps> out;
  out.reserve(witnesses.size());
  for (const auto& w : witnesses) {
    if (w.fibers.size() != parabolic.points.size())
      fail(ErrorKind::InvalidMatrix, "witness fiber count does not match the marked points");
    WitnessJumps wj{w.n_prime, w.delta0_prime, {}};
    for (std::size_t i = 0; i < w.fibers.size(); ++i)
      wj.jumps.push_back(restricted_flag_jumps(parabolic.points[i].flag, w.fibers[i], tol));
    out.push_back(std::move(wj));
  }
  return out;
}

ParabolicResult parabolic_semistable(const FramedBundleModel& model, const ParabolicData& parabolic,
                                     const std::vector<SubbundleWitness>& witnesses, const Tolerance& tol) {
  parabolic.validate(tol);
  if (parabolic.n != model.n || parabolic.points.size() != static_cast<std::size_t>(model.ell))
    fail(ErrorKind::InvalidMatrix, "parabolic data does not match the model");
  std::vector<std::vector<int>> jumps;
  std::vector<std::vector<Rational>> weights;
  for (const auto& pt : parabolic.points) {
    jumps.push_back(flag_jumps(pt.flag, tol));
    weights.push_back(pt.weights);
  }
  return parabolic_verdict(model.n, model.delta0, jumps, witness_jumps(parabolic, witnesses, tol), weights);
}

std::vector<Rational> vertex_weights(int n, int k) {
  if (k < 0 || k > n) fail(ErrorKind::InvalidMatrix, "simplex vertex index out of range");
  std::vector<Rational> w(n + 2, -kHalf);
  for (int j = 0; j <= k; ++j) w[j] = kHalf;
  return w;
}

std::vector<CMatrix> moduli_moment(const FramedEncoding& enc, const Tolerance& tol) {
  enc.validate(tol);
  const cd half_i(0.0, 0.5);
  std::vector<CMatrix> out;
  for (const auto& beta : enc.beta) {
    const CMatrix rows = beta_rows(beta);
    const CMatrix rd = rows.rightCols(enc.n);
    out.push_back(half_i * (-CMatrix::Identity(enc.n, enc.n) + 2.0 * rd.adjoint() * rd));
  }
  return out;
}

std::vector<CMatrix> moduli_moment_graph(const FramedEncoding& enc, const Tolerance& tol) {
  enc.validate(tol);
  const cd half_i(0.0, 0.5);
  const CMatrix id = CMatrix::Identity(enc.n, enc.n);
  std::vector<CMatrix> out;
  for (const auto& beta : enc.beta) {
    const CMatrix rows = beta_rows(beta);
    const CMatrix rd = rows.rightCols(enc.n);
    if (checked_rank(rd, tol) < enc.n) fail(ErrorKind::InvalidMatrix, "beta is not a graph over the framing");
    // Rows normalized to (ξ | I); ξ is the graph map over the framing summand.
    const CMatrix xi = rd.lu().solve(rows.leftCols(enc.p));
    const CMatrix xx = xi * xi.adjoint();
    out.push_back(half_i * (id - xx) * (id + xx).inverse());
  }
  return out;
}

CMatrix normal_form_pattern(const RVector& delta_diag, int s, int t) {
  const int n = static_cast<int>(delta_diag.size());
  const int r = n - s - t;
  CMatrix p = CMatrix::Zero(n, 2 * n);
  for (int j = 0; j < s; ++j) p(j, n + j) = 1.0;
  for (int j = s; j < s + r; ++j) {
    p(j, j) = std::sqrt(std::max(0.0, 0.5 - delta_diag(j)));
    p(j, n + j) = std::sqrt(std::max(0.0, 0.5 + delta_diag(j)));
  }
  for (int j = s + r; j < n; ++j) p(j, j) = 1.0;
  return p;
}

NormalFormResult normal_form(const Plane& g, const CMatrix& delta, const Tolerance& tol) {
  tol.validate();
  const int n = g.n();
  if (g.m() != n || g.k() != n) fail(ErrorKind::InvalidMatrix, "normal form needs an n-plane in C^n ⊕ C^n");
  if (delta.rows() != n || delta.cols() != n) fail(ErrorKind::InvalidMatrix, "delta has the wrong size");
  require_finite(delta, "delta");
  const double off = (delta - CMatrix(delta.diagonal().asDiagonal())).norm();
  if (off > tol.residual_abs || delta.diagonal().imag().norm() > tol.residual_abs)
    fail(ErrorKind::InvalidMatrix, "delta must be real diagonal");
  const RVector dd = delta.diagonal().real();
  for (int j = 0; j < n; ++j) {
    if (dd(j) < -0.5 - kClusterTol || dd(j) > 0.5 + kClusterTol)
      fail(ErrorKind::InvalidMatrix, "delta entries must lie in [-1/2, 1/2]");
    if (j > 0 && dd(j) > dd(j - 1) + kClusterTol) fail(ErrorKind::InvalidMatrix, "delta must be weakly decreasing");
  }
  const CMatrix mom = cd(0.0, -1.0) * moment_left(g, tol);
  const double mismatch = (mom - delta).norm();
  if (mismatch > std::max(tol.residual_abs, 1e-8))
    fail(ErrorKind::MomentMismatch, "moment of the plane differs from delta by " + std::to_string(mismatch));

  NormalFormResult res;
  for (int j = 0; j < n; ++j) {
    if (dd(j) >= 0.5 - kClusterTol) ++res.s;
    else if (dd(j) <= -0.5 + kClusterTol) ++res.t;
  }
  res.r = n - res.s - res.t;
  const IntersectionDims dims = intersection_dims(g, tol);
  if (dims.s != res.s || dims.t != res.t)
    fail(ErrorKind::MomentMismatch, "boundary multiplicities of delta disagree with the plane's intersections");

  const CMatrix rows = annihilator_rows(g, tol);
  const CMatrix bs = rows.leftCols(n);
  const CMatrix ds = rows.rightCols(n);

  // Target rows: the s and r framing columns of d* normalized; t rows complete them.
  CMatrix L = CMatrix::Zero(n, n);
  for (int j = 0; j < res.s + res.r; ++j) {
    const double nj = ds.col(j).norm();
    L.row(j) = (ds.col(j) / nj).adjoint();
  }
  if (res.t > 0) {
    const CMatrix top = L.topRows(res.s + res.r).adjoint();
    L.bottomRows(res.t) = canonical_complement(top, n, tol).adjoint();
  }

  // Fiber basis: ker b*, then the normalized b-parts of the r rows and t rows.
  const CMatrix lb = L * bs;
  CMatrix V(n, n);
  if (res.s > 0) V.leftCols(res.s) = canonical_basis(null_space(bs, tol), tol);
  res.M = CMatrix::Zero(res.r, res.r);
  for (int j = res.s; j < n; ++j) {
    const double nj = lb.row(j).norm();
    if (nj <= tol.residual_abs) fail(ErrorKind::RankAmbiguous, "vanishing b-row in the normal form");
    V.col(j) = lb.row(j).adjoint() / nj;
    if (j < res.s + res.r) res.M(j - res.s, j - res.s) = nj;
  }
  // Re-unitarize so rounding in the normalizations does not leak into the transforms.
  res.fiber = polar_unitary_factor(V);
  res.target = L;

  res.rho_star = CMatrix(n, 2 * n);
  res.rho_star << L * bs * res.fiber, L * ds;
  res.pattern_residual = (res.rho_star - normal_form_pattern(dd, res.s, res.t)).norm();
  const RVector dhat = dd.segment(res.s, res.r);
  CMatrix target_m2 = CMatrix::Zero(res.r, res.r);
  for (int j = 0; j < res.r; ++j) target_m2(j, j) = 0.5 - dhat(j);
  res.m_residual = (res.M * res.M - target_m2).norm();
  res.clusters = cluster_sizes(dd, kClusterTol);
  res.plane = act_first(res.fiber.adjoint(), g);
  return res;
}

HeckeResult hecke_shift(const ParabolicData& parabolic, std::int64_t delta0, int point, const Tolerance& tol) {
  parabolic.validate(tol);
  if (point < 0 || point >= static_cast<int>(parabolic.points.size()))
    fail(ErrorKind::InvalidMatrix, "marked point index out of range");
  const int n = parabolic.n;
  const ParabolicPoint& pt = parabolic.points[point];
  const CMatrix f0 = column_space(pt.flag[1], tol);
  const int s = static_cast<int>(f0.cols());
  if (s == 0) fail(ErrorKind::NothingToShift, "weight 1/2 block is empty");

  HeckeResult res{parabolic, delta0 + s};
  ParabolicPoint& out = res.parabolic.points[point];
  const CMatrix proj = CMatrix::Identity(n, n) - f0 * f0.adjoint();
  out.flag[1] = CMatrix(n, 0);
  for (int j = 2; j <= n + 1; ++j) out.flag[j] = column_space(proj * pt.flag[j], tol);
  out.flag[n + 2] = CMatrix::Identity(n, n);
  return res;
}

TwoPointNormalization genus0_two_point_normalize(const CMatrix& gamma2, const Tolerance& tol) {
  tol.validate();
  const int n = static_cast<int>(gamma2.rows());
  if (gamma2.cols() != n || n == 0) fail(ErrorKind::InvalidMatrix, "gamma2 must be square");
  require_finite(gamma2, "gamma2");
  Eigen::JacobiSVD<CMatrix> svd(gamma2);
  const RVector sv = svd.singularValues();
  if (sv(n - 1) <= tol.rank_rel * std::max(1.0, sv(0)))
    fail(ErrorKind::BoundaryDegenerate, "gamma2 is singular: delta reaches +1");
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix a = gamma2.adjoint() * gamma2;
  TwoPointNormalization res;
  res.delta = hermitian_part((id - a) * (id + a).inverse());
  const RVector ev = eigenvalues_desc(res.delta);
  if (ev(0) >= 1.0 - tol.rank_rel || ev(n - 1) <= -1.0 + tol.rank_rel)
    fail(ErrorKind::BoundaryDegenerate, "delta has an eigenvalue at the boundary");
  res.gamma1 = hermitian_function(res.delta, [](double x) { return std::sqrt((1.0 + x) / (1.0 - x)); });
  const CMatrix b = res.gamma1.adjoint() * res.gamma1;
  res.residual = ((-id + b) * (id + b).inverse() - res.delta).norm();
  return res;
}

CMatrix two_point_chart(const CMatrix& gamma2, const Tolerance& tol) {
  const TwoPointNormalization nz = genus0_two_point_normalize(gamma2, tol);
  return gamma2 * nz.gamma1.inverse();
}

Plane transfer_plane(const Plane& g_tilde, const CMatrix& delta, const CMatrix& f, const Tolerance& tol) {
  const int m = g_tilde.m();
  if (delta.rows() != m || delta.cols() != m || f.rows() != m || f.cols() != m)
    fail(ErrorKind::InvalidMatrix, "transfer data must act on the fiber");
  if (!is_hermitian(delta, tol.residual_abs)) fail(ErrorKind::InvalidMatrix, "delta must be Hermitian");
  if (!is_unitary(f, 1e-9)) fail(ErrorKind::InvalidFrame, "f must be unitary");
  return act_first(f.adjoint(), g_tilde);
}

CMatrix renormalized_form(const CMatrix& delta, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) fail(ErrorKind::InvalidMatrix, "z must be positive");
  const double lz = std::log(z);
  return hermitian_function(delta, [lz](double x) { return std::exp(-2.0 * x * lz); });
}

MomentWeights weights_from_moment(const CMatrix& mu) {
  require_finite(mu, "moment");
  const CMatrix h = hermitian_part(cd(0.0, -1.0) * mu);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const int n = static_cast<int>(h.rows());
  MomentWeights w;
  w.values.resize(n);
  w.eigenvectors.resize(n, n);
  for (int j = 0; j < n; ++j) {
    w.values(j) = es.eigenvalues()(n - 1 - j);
    w.eigenvectors.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  w.clusters = cluster_sizes(w.values, kClusterTol);
  return w;
}

LocalModel local_model(const Plane& g_tilde, const CMatrix& delta, const Tolerance& tol) {
  const int n = g_tilde.n();
  if (g_tilde.m() != n || g_tilde.k() != n) fail(ErrorKind::InvalidMatrix, "local model needs an n-plane in C^n ⊕ C^n");
  const MomentWeights fw = weights_from_moment(moment_left(g_tilde, tol));
  const MomentWeights dw = weights_from_moment(cd(0.0, 1.0) * hermitian_part(delta));
  LocalModel lm;
  lm.f = dw.eigenvectors;
  lm.framing = fw.eigenvectors;
  lm.weights = fw.values;
  lm.plane = act_second(lm.framing.adjoint(), transfer_plane(g_tilde, delta, lm.f, tol));
  lm.parabolic.flag = induced_flag(lm.plane, tol);

  // Interior weights sit on jumps of the induced flag; entries at ±1/2 carry no jump and are
  // clamped into the open interval so the data stays admissible.
  std::vector<double> interior;
  for (int j = 0; j < n; ++j)
    if (std::abs(std::abs(fw.values(j)) - 0.5) > kClusterTol) interior.push_back(fw.values(j));
  const double hi = interior.empty() ? 0.0 : interior.front();
  const double lo = interior.empty() ? 0.0 : interior.back();
  lm.parabolic.weights.assign(n + 2, Rational(0));
  lm.parabolic.weights.front() = kHalf;
  lm.parabolic.weights.back() = -kHalf;
  for (int j = 0; j < n; ++j) {
    double v = fw.values(j);
    if (v >= 0.5 - kClusterTol) v = hi;
    else if (v <= -0.5 + kClusterTol) v = lo;
    lm.parabolic.weights[j + 1] = approx_rational(v);
  }
  return lm;
}

}  // namespace gfb
