#include "gfb/git_weights.hpp"

#include "gfb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gfb {

namespace {

CMatrix pseudo_inverse_right(const CMatrix& ev) {
  // ev is n×p of full row rank.
  return ev.adjoint() * (ev * ev.adjoint()).inverse();
}

CMatrix left_null_rows(const CMatrix& m, const Tolerance& tol) {
  return null_space(m.adjoint(), tol).adjoint();
}

struct Rref {
  CMatrix reduced;
  std::vector<int> pivots;
};

Rref rref(CMatrix x, double pivot_tol) {
  Rref out;
  const Eigen::Index rows = x.rows(), cols = x.cols();
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i)
      if (std::abs(x(i, c)) > std::abs(x(best, c))) best = i;
    if (std::abs(x(best, c)) <= pivot_tol) {
      x.block(r, c, rows - r, 1).setZero();
      continue;
    }
    x.row(r).swap(x.row(best));
    x.row(r) /= x(r, c);
    for (Eigen::Index i = 0; i < rows; ++i)
      if (i != r) x.row(i) -= x(i, c) * x.row(r);
    out.pivots.push_back(static_cast<int>(c));
    ++r;
  }
  out.reduced = x;
  return out;
}

double pivot_tolerance(const CMatrix& x, const Tolerance& tol) {
  if (x.size() == 0) return tol.rank_rel;
  return tol.rank_rel * std::max(1.0, x.cwiseAbs().maxCoeff());
}

// Rank of a product with the cutoff measured against the factors' scale, so a
// product that vanishes up to rounding has rank 0.
int product_rank(const CMatrix& m, double scale, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  const RVector sv = Eigen::JacobiSVD<CMatrix>(m).singularValues();
  const double cut = std::max(tol.rank_rel * std::max(scale, sv(0)), tol.rank_abs);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
    if (sv(i) > cut / 10.0 && sv(i) < cut * 10.0)
      fail(ErrorKind::RankAmbiguous, "singular value within 10x of the rank cutoff");
  }
  return r;
}

double op_norm(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : Eigen::JacobiSVD<CMatrix>(m).singularValues()(0);
}

int count_below(const std::vector<int>& pivots, int bound) {
  return static_cast<int>(std::count_if(pivots.begin(), pivots.end(), [&](int c) { return c < bound; }));
}

}  // namespace

void FramedEncoding::validate(const Tolerance& tol) const {
  if (p < 0 || n < 1 || ell < 0) fail(ErrorKind::InvalidMatrix, "encoding dimensions invalid");
  if (static_cast<int>(ev.size()) != ell || static_cast<int>(beta.size()) != ell)
    fail(ErrorKind::InvalidMatrix, "encoding needs one ev and one β per marked point");
  for (int i = 0; i < ell; ++i) {
    if (ev[i].rows() != n || ev[i].cols() != p) fail(ErrorKind::InvalidMatrix, "ev_i must be n×p");
    if (numeric_rank(ev[i], tol) != n) fail(ErrorKind::InvalidFrame, "ev_i is not surjective");
    const Plane& b = beta[i];
    if (b.m() != p || b.n() != n || b.k() != n) fail(ErrorKind::InvalidFrame, "β_i must be an n-plane in V*⊕C^n");
    const CMatrix rb = beta_rows(b).leftCols(p);
    const CMatrix proj = pseudo_inverse_right(ev[i]) * ev[i];
    if ((rb - rb * proj).norm() > std::sqrt(tol.residual_abs))
      fail(ErrorKind::InvalidFrame, "ker(ev_i) is not contained in ker(β_i)");
  }
}

CMatrix beta_rows(const Plane& beta) { return beta.basis().adjoint(); }

Plane beta_from_rows(int p, const CMatrix& rows, const Tolerance& tol) {
  return Plane::from_span(p, static_cast<int>(rows.cols()) - p, rows.adjoint(), tol);
}

Plane framing_plane(const Plane& beta, const CMatrix& ev, const Tolerance& tol) {
  const CMatrix rows = beta_rows(beta);
  const int p = beta.m(), n = beta.n();
  const CMatrix b = rows.leftCols(p) * pseudo_inverse_right(ev);
  CMatrix stacked(rows.rows(), 2 * n);
  stacked << b, rows.rightCols(n);
  return Plane::from_basis(n, n, null_space(stacked, tol));
}

int beta_t(const Plane& beta, const Tolerance& tol) {
  return beta.n() - checked_rank(beta_rows(beta).rightCols(beta.n()), tol);
}

EchelonCounts echelon_invariants(const Plane& beta, const CMatrix& W, const CMatrix& ev, const Tolerance& tol) {
  EchelonCounts c;
  if (W.cols() == 0) return c;
  const int p = beta.m(), n = beta.n();
  const CMatrix rows = beta_rows(beta);
  const CMatrix rb = rows.leftCols(p);
  const CMatrix rd = rows.rightCols(n);
  const CMatrix b = rb * pseudo_inverse_right(ev);
  const CMatrix evw = ev * W;
  c.m = product_rank(evw, op_norm(ev) * op_norm(W), tol);
  if (c.m == 0) return c;
  Eigen::JacobiSVD<CMatrix> svd(evw, Eigen::ComputeThinU);
  const CMatrix ew = svd.matrixU().leftCols(c.m);
  const double b_scale = op_norm(b);
  c.s = c.m - product_rank(b * ew, b_scale, tol);
  const CMatrix nrows = left_null_rows(rd, tol);
  c.t = nrows.rows() == 0 ? 0 : product_rank(nrows * b * ew, b_scale, tol);
  c.r = c.m - c.s - c.t;
  return c;
}

EchelonCounts echelon_invariants_by_elimination(const Plane& beta, const CMatrix& W, const CMatrix& ev,
                                                const Tolerance& tol) {
  EchelonCounts c;
  const int pp = static_cast<int>(W.cols());
  if (pp == 0) return c;
  const int p = beta.m(), n = beta.n();
  CMatrix adapted(p, p);
  adapted << W, complement(W, p, tol);

  const CMatrix rows = beta_rows(beta);
  const CMatrix rb = rows.leftCols(p) * adapted;
  const CMatrix rd = rows.rightCols(n);

  // Split the row space into rows with vanishing C^n part (b_1..b_t) and the rest.
  const CMatrix pure_coeff = left_null_rows(rd, tol);
  const CMatrix rest_coeff = complement(pure_coeff.adjoint(), n, tol).adjoint();

  const CMatrix pure = pure_coeff * rb;
  const Rref pr = rref(pure, pivot_tolerance(pure, tol));
  c.t = count_below(pr.pivots, pp);

  CMatrix rest = rest_coeff * rb;
  for (std::size_t j = 0; j < pr.pivots.size(); ++j) {
    const int col = pr.pivots[j];
    for (Eigen::Index i = 0; i < rest.rows(); ++i) rest.row(i) -= rest(i, col) * pr.reduced.row(j);
  }
  const Rref rr = rref(rest, pivot_tolerance(rest, tol));
  c.r = count_below(rr.pivots, pp);

  const CMatrix evw = ev * W;
  c.m = static_cast<int>(rref(evw, pivot_tolerance(evw, tol)).pivots.size());
  c.s = c.m - c.t - c.r;
  return c;
}

std::int64_t alpha_weight(std::int64_t p, std::int64_t p_prime, std::int64_t n, std::int64_t n_prime) {
  return p * n_prime - p_prime * n;
}

std::int64_t beta_weight(std::int64_t p, std::int64_t p_prime, std::int64_t t, std::int64_t t_prime,
                         std::int64_t r_prime) {
  return p * t_prime - p_prime * t + r_prime * (p - p_prime);
}

Rational stability_eta(std::int64_t k, int genus) {
  const std::int64_t den = 2 * k - 2 * genus + 1;
  if (den == 0) fail(ErrorKind::ParameterSingular, "k - g + 1/2 vanishes");
  return rat(2, den);
}

LimitWeights limit_weights(const SubsheafData& d) {
  if (d.n < 1 || d.n_prime < 1) fail(ErrorKind::InvalidMatrix, "ranks must be positive");
  if (d.k == 0) fail(ErrorKind::ParameterSingular, "k = 0");
  const std::size_t ell = d.t.size();
  if (d.t_prime.size() != ell || d.r_prime.size() != ell) fail(ErrorKind::InvalidMatrix, "per-point data length mismatch");
  const Rational n = d.n, np = d.n_prime;
  const Rational mu0 = Rational(d.delta0) / n;
  const Rational mu0p = Rational(d.delta0_prime) / np;
  const Rational D = mu0 - mu0p;
  Rational B = 0, sum_x = 0, bracket = 0;
  for (std::size_t i = 0; i < ell; ++i) {
    const Rational xp = Rational(d.r_prime[i] + d.t_prime[i]) / np;
    const Rational x = Rational(d.r_prime[i] + d.t[i]) / n;
    B += xp - x;
    sum_x += x;
    bracket += mu0 * xp - mu0p * x + Rational(1 - d.genus) * (xp - x);
  }
  const Rational k = d.k;
  LimitWeights w;
  w.w_inf = D + B;
  w.w_k = D + B + bracket / k + (Rational(1, 2) - d.genus) * D / k;
  w.w_A = D * (-mu0 + sum_x - Rational(1, 2));
  return w;
}

WeightReport w_report(const FramedEncoding& enc, const SubspaceWitness& wit, const Tolerance& tol) {
  enc.validate(tol);
  const int pp = static_cast<int>(wit.W.cols());
  if (wit.W.rows() != enc.p || pp < 1 || pp > enc.p) fail(ErrorKind::InvalidMatrix, "witness W must be p×p' with 1 ≤ p' ≤ p");
  if (wit.n_prime < 1 || wit.n_prime > enc.n) fail(ErrorKind::InvalidMatrix, "witness n' out of range");

  WeightReport rep;
  rep.w_alpha = alpha_weight(enc.p, pp, enc.n, wit.n_prime);
  SubsheafData d;
  d.n = enc.n;
  d.n_prime = wit.n_prime;
  d.delta0 = enc.delta0;
  d.delta0_prime = wit.delta0_prime;
  d.genus = enc.genus;
  d.k = enc.k;
  std::int64_t beta_sum = 0;
  for (int i = 0; i < enc.ell; ++i) {
    const EchelonCounts c = echelon_invariants(enc.beta[i], wit.W, enc.ev[i], tol);
    const int t = beta_t(enc.beta[i], tol);
    rep.counts.push_back(c);
    rep.t_plane.push_back(t);
    const std::int64_t wb = beta_weight(enc.p, pp, t, c.t, c.r);
    rep.w_beta.push_back(wb);
    beta_sum += wb;
    d.t.push_back(t);
    d.t_prime.push_back(c.t);
    d.r_prime.push_back(c.r);
  }
  rep.eta = stability_eta(enc.k, enc.genus);
  rep.w_W = Rational(rep.w_alpha) + rep.eta * Rational(beta_sum);
  const LimitWeights lw = limit_weights(d);
  rep.w_W_k = lw.w_k;
  rep.w_W_inf = lw.w_inf;
  rep.w_W_A = lw.w_A;
  return rep;
}

Contribution classify_k_stability(const Rational& w_inf, const Rational& w_A) {
  if (w_inf > 0) return Contribution::Positive;
  if (w_inf < 0) return Contribution::Violating;
  if (w_A > 0) return Contribution::Positive;
  if (w_A < 0) return Contribution::Violating;
  return Contribution::StrictlySemistable;
}

Contribution classify_k_stability(const WeightReport& report) {
  return classify_k_stability(report.w_W_inf, report.w_W_A);
}

bool degree_admissible(int n, int ell, std::int64_t delta0) {
  const std::int64_t bound = (static_cast<std::int64_t>(ell) * n - 1) / 2;
  return ell * n >= 1 && delta0 >= -bound && delta0 <= bound;
}

CStarReport cstar_classify(int n, int ell, std::int64_t delta0, const std::vector<int>& s, const std::vector<int>& t,
                           std::int64_t k, int genus) {
  if (n < 1 || ell < 1) fail(ErrorKind::InvalidMatrix, "need n ≥ 1 and ℓ ≥ 1");
  if (static_cast<int>(s.size()) != ell || static_cast<int>(t.size()) != ell)
    fail(ErrorKind::InvalidMatrix, "s and t need one entry per marked point");
  for (int i = 0; i < ell; ++i)
    if (s[i] < 0 || t[i] < 0 || s[i] + t[i] > n) fail(ErrorKind::InvalidMatrix, "need 0 ≤ s_i, t_i and s_i + t_i ≤ n");
  const std::int64_t ln = static_cast<std::int64_t>(ell) * n;
  if (ln - 2 * delta0 <= 0) fail(ErrorKind::ParameterSingular, "ℓn − 2δ₀ ≤ 0: γ undefined");
  if (!degree_admissible(n, ell, delta0)) fail(ErrorKind::ParameterSingular, "δ₀ outside the admissible degree range");

  CStarReport rep;
  const Rational N = n;
  rep.gamma = Rational(2 * n) / Rational(ln - 2 * delta0);
  rep.mu = rep.gamma * ell - 2 - Rational(delta0) / N;
  const Rational kg_mu = Rational(k - genus) + rep.mu;
  if (kg_mu == 0) fail(ErrorKind::ParameterSingular, "k − g + μ vanishes");
  rep.eta = rep.gamma / kg_mu;

  const std::int64_t sum_s = std::accumulate(s.begin(), s.end(), std::int64_t{0});
  const std::int64_t sum_t = std::accumulate(t.begin(), t.end(), std::int64_t{0});
  const std::int64_t sum_nt = ln - sum_t;
  rep.s_margin = Rational(ln, 2) - delta0 - sum_s;
  rep.t_margin = Rational(ln, 2) + delta0 - sum_t;
  rep.inf_first = N - rep.gamma * sum_s;
  rep.inf_second = -N + rep.gamma * sum_nt;

  const Rational p = Rational(delta0) + Rational(k - genus + 1) * N;
  Rational raw1 = 0, raw2 = 0;
  for (int i = 0; i < ell; ++i) {
    raw1 += N * (N - s[i]) - p * s[i];
    raw2 += -N * t[i] + p * (N - t[i]);
  }
  rep.raw_first = N * N + rep.eta * raw1;
  rep.raw_second = -N * N + rep.eta * raw2;

  const Rational K = k;
  const Rational coef = Rational(delta0) / N + Rational(2 - genus);
  Rational k1 = 0, k2 = 0;
  for (int i = 0; i < ell; ++i) {
    k1 += N - coef * s[i];
    k2 += -N + coef * (N - t[i]);
  }
  rep.k_first = rep.inf_first + rep.gamma / K * k1 + N * (rep.mu - genus) / K;
  rep.k_second = rep.inf_second + rep.gamma / K * k2 - N * (rep.mu - genus) / K;

  const int a = sign(rep.inf_first), b = sign(rep.inf_second);
  if (a > 0 && b > 0)
    rep.verdict = Verdict::Stable;
  else if (a >= 0 && b >= 0)
    rep.verdict = Verdict::Semistable;
  else
    rep.verdict = Verdict::Unstable;
  return rep;
}

}  // namespace gfb
