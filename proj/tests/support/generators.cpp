#include "support/generators.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace gfb::testing {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

bool coin(Rng& rng) { return uniform(rng, 0, 1) == 1; }

std::int64_t small_entry(Rng& rng) {
  const int u = uniform(rng, 0, 9);
  if (u < 4) return 0;
  if (u < 6) return 1;
  if (u < 8) return -1;
  return u == 8 ? 2 : -2;
}

IntMatrix sparse_matrix(int rows, int cols, Rng& rng) {
  IntMatrix m = int_zeros(rows, cols);
  for (auto& row : m)
    for (auto& x : row) x = small_entry(rng);
  return m;
}

// rows × cols with rank at most r.
IntMatrix low_rank(int rows, int cols, int r, Rng& rng) {
  if (r == 0) return int_zeros(rows, cols);
  return int_mul(sparse_matrix(rows, r, rng), sparse_matrix(r, cols, rng));
}

void unimodular(int p, Rng& rng, IntMatrix& P, IntMatrix& Pinv) {
  P = int_identity(p);
  Pinv = int_identity(p);
  if (p < 2) return;
  const int ops = uniform(rng, 0, p + 2);
  for (int o = 0; o < ops; ++o) {
    const int i = uniform(rng, 0, p - 1);
    int j = uniform(rng, 0, p - 2);
    if (j >= i) ++j;
    const std::int64_t c = coin(rng) ? 1 : -1;
    for (int r = 0; r < p; ++r) P[r][j] += c * P[r][i];
    for (int col = 0; col < p; ++col) Pinv[i][col] -= c * Pinv[j][col];
  }
}

}  // namespace

IntegerInstance random_integer_instance(Rng& rng, int max_p, int max_n, int max_ell) {
  IntegerInstance inst;
  inst.p = uniform(rng, 1, max_p);
  inst.n = uniform(rng, 1, std::min(max_n, inst.p));
  inst.ell = uniform(rng, 1, max_ell);
  inst.p_prime = uniform(rng, 1, inst.p);
  const int p = inst.p, n = inst.n, pp = inst.p_prime;

  IntMatrix Pinv;
  unimodular(p, rng, inst.P, Pinv);

  inst.enc.p = p;
  inst.enc.n = n;
  inst.enc.ell = inst.ell;
  inst.enc.k = 10;
  for (int i = 0; i < inst.ell; ++i) {
    IntMatrix ev_a;
    do {
      const IntMatrix w_block =
          coin(rng) ? low_rank(n, pp, uniform(rng, 0, std::min(n, pp)), rng) : sparse_matrix(n, pp, rng);
      IntMatrix perp = sparse_matrix(n, p - pp, rng);
      if (coin(rng)) {
        const int zero_rows = uniform(rng, 0, n);
        for (int r = 0; r < zero_rows; ++r) std::fill(perp[r].begin(), perp[r].end(), 0);
      }
      ev_a = int_hcat(w_block, perp);
    } while (exact_rank(ev_a) != n);

    IntMatrix B, rd, rows_a;
    do {
      B = sparse_matrix(n, n, rng);
      rd = low_rank(n, n, n - uniform(rng, 0, n), rng);
      rows_a = int_hcat(int_mul(B, ev_a), rd);
    } while (exact_rank(rows_a) != n);

    const IntMatrix ev = int_mul(ev_a, Pinv);
    const IntMatrix rb = int_mul(B, ev);
    inst.ev_adapted.push_back(ev_a);
    inst.rows_adapted.push_back(rows_a);
    inst.enc.ev.push_back(to_cmatrix(ev));
    inst.enc.beta.push_back(beta_from_rows(p, to_cmatrix(int_hcat(rb, rd))));
  }
  inst.witness.W = column_space(to_cmatrix(int_columns(inst.P, 0, pp)));
  inst.witness.n_prime = std::max(1, exact_rank(int_columns(inst.ev_adapted[0], 0, pp)));
  return inst;
}

SubsheafData random_subsheaf_data(Rng& rng, std::int64_t k) {
  SubsheafData d;
  d.n = uniform(rng, 1, 4);
  d.n_prime = uniform(rng, 1, d.n);
  d.genus = uniform(rng, 0, 3);
  d.k = k;
  d.delta0 = uniform(rng, -6, 6);
  const int ell = uniform(rng, 1, 4);
  Rational B = 0;
  for (int i = 0; i < ell; ++i) {
    d.t.push_back(uniform(rng, 0, d.n));
    d.t_prime.push_back(uniform(rng, 0, std::min(d.n_prime, d.t.back())));
    d.r_prime.push_back(uniform(rng, 0, d.n_prime - d.t_prime.back()));
    B += Rational(d.r_prime.back() + d.t_prime.back(), d.n_prime) - Rational(d.r_prime.back() + d.t.back(), d.n);
  }
  d.delta0_prime = uniform(rng, -6, 6);
  // Half the time aim for the tie w_∞ = 0, where the classification falls back to w_A.
  if (coin(rng)) {
    const Rational target = Rational(d.n_prime) * (Rational(d.delta0, d.n) + B);
    if (denominator(target) == 1) d.delta0_prime = static_cast<std::int64_t>(numerator(target));
  }
  return d;
}

CMatrix hermitian_with_spectrum(const RVector& values, Rng& rng) {
  const CMatrix u = haar_unitary(static_cast<int>(values.size()), rng);
  return u * values.cast<cd>().asDiagonal() * u.adjoint();
}

LevelPair random_level_pair(Rng& rng, int n) {
  LevelPair out;
  out.s = uniform(rng, 0, n);
  out.t = uniform(rng, 0, n - out.s);
  const int r = n - out.s - out.t;
  std::vector<double> interior;
  for (int j = 0; j < r; ++j) {
    if (j > 0 && uniform(rng, 0, 3) == 0)
      interior.push_back(interior.back());
    else
      interior.push_back(uniform_real(rng, -0.45, 0.45));
  }
  std::sort(interior.begin(), interior.end(), std::greater<double>());
  RVector dd(n);
  for (int j = 0; j < out.s; ++j) dd(j) = 0.5;
  for (int j = 0; j < r; ++j) dd(out.s + j) = interior[j];
  for (int j = 0; j < out.t; ++j) dd(out.s + r + j) = -0.5;
  out.delta = dd.cast<cd>().asDiagonal();

  RVector plus(n), minus(n);
  for (int j = 0; j < n; ++j) {
    plus(j) = std::sqrt(0.5 + dd(j));
    minus(j) = std::sqrt(0.5 - dd(j));
  }
  const CMatrix Q = haar_unitary(n, rng);
  const CMatrix P = haar_unitary(n, rng);
  const CMatrix ds = Q * plus.cast<cd>().asDiagonal();
  const CMatrix bs = Q * minus.cast<cd>().asDiagonal() * P;
  out.plane = plane_from_annihilator(bs, ds);
  return out;
}

Plane random_plane_with_dims(int n, int s, int t, bool sparse, Rng& rng) {
  const int r = n - s - t;
  auto block = [&](int rows, int cols) {
    return sparse ? to_cmatrix(sparse_matrix(rows, cols, rng)) : random_gaussian(rows, cols, rng);
  };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    CMatrix cols = CMatrix::Zero(2 * n, n);
    if (s > 0) cols.block(0, 0, n, s) = block(n, s);
    if (t > 0) cols.block(n, s, n, t) = block(n, t);
    if (r > 0) cols.rightCols(r) = block(2 * n, r);
    if (svd_rank(cols) != n) continue;
    const Plane g = Plane::from_span(n, n, cols);
    const IntersectionDims d = intersection_dims(g);
    if (d.s == s && d.t == t) return g;
  }
  throw std::runtime_error("could not realize intersection dimensions");
}

FramedBundleModel random_genus0_model(Rng& rng, int max_n, int max_ell) {
  FramedBundleModel m;
  m.genus = 0;
  m.n = uniform(rng, 1, max_n);
  m.ell = uniform(rng, 1, max_ell);
  std::vector<int> a(m.n);
  for (int& x : a) x = uniform(rng, -2, 2);
  std::sort(a.begin(), a.end(), std::greater<int>());
  m.delta0 = std::accumulate(a.begin(), a.end(), std::int64_t{0});
  m.split_type = a;
  const bool sparse = coin(rng);
  for (int i = 0; i < m.ell; ++i) {
    const int s = uniform(rng, 0, m.n);
    const int t = uniform(rng, 0, m.n - s);
    m.g.push_back(random_plane_with_dims(m.n, s, t, sparse, rng));
  }
  return m;
}

ParabolicPoint random_parabolic_point(int n, const std::vector<int>& jumps, Rng& rng) {
  ParabolicPoint pt;
  const CMatrix u = haar_unitary(n, rng);
  pt.flag.emplace_back(n, 0);
  int dim = 0;
  for (int j : jumps) {
    dim += j;
    pt.flag.push_back(u.leftCols(dim));
  }
  std::vector<Rational> interior;
  for (int j = 0; j < n; ++j) {
    const int den = uniform(rng, 2, 12);
    const int lim = (den - 1) / 2;
    interior.push_back(Rational(uniform(rng, -lim, lim), den));
  }
  std::sort(interior.begin(), interior.end(), std::greater<Rational>());
  pt.weights.push_back(Rational(1, 2));
  pt.weights.insert(pt.weights.end(), interior.begin(), interior.end());
  pt.weights.push_back(Rational(-1, 2));
  return pt;
}

ParabolicData random_parabolic_data(Rng& rng, int& shift_point, int max_n, int max_ell) {
  ParabolicData data;
  data.n = uniform(rng, 1, max_n);
  const int ell = uniform(rng, 1, max_ell);
  shift_point = uniform(rng, 0, ell - 1);
  for (int i = 0; i < ell; ++i) {
    std::vector<int> jumps(data.n + 2, 0);
    for (int unit = 0; unit < data.n; ++unit) ++jumps[uniform(rng, 0, data.n + 1)];
    if (i == shift_point && jumps[0] == 0) {
      auto donor = std::find_if(jumps.begin(), jumps.end(), [](int j) { return j > 0; });
      --*donor;
      ++jumps[0];
    }
    data.points.push_back(random_parabolic_point(data.n, jumps, rng));
  }
  return data;
}

ComposablePair random_composable_pair(int n, Rng& rng) {
  RVector d(n), dc(n);
  for (int j = 0; j < n; ++j) {
    const double x = uniform_real(rng, 0.05, 0.95);
    d(j) = std::sqrt(x);
    dc(j) = std::sqrt(1.0 - x);
  }
  const CMatrix q1 = haar_unitary(n, rng), q2 = haar_unitary(n, rng), u = haar_unitary(n, rng);
  const CMatrix p1 = haar_unitary(n, rng), p2 = haar_unitary(n, rng);
  ComposablePair out;
  out.dp_star = q1 * d.cast<cd>().asDiagonal() * u;
  out.dq_star = q2 * dc.cast<cd>().asDiagonal() * u;
  out.bp_star = q1 * dc.cast<cd>().asDiagonal() * p1;
  out.bq_star = q2 * d.cast<cd>().asDiagonal() * p2;
  return out;
}

void Digest::add(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g;", x);
  buf_ += buf;
}

void Digest::add(std::int64_t x) { buf_ += std::to_string(x) + ";"; }

void Digest::add_rational(const Rational& r) { buf_ += to_string(r) + ";"; }

void Digest::add_matrix(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    add(m(i).real());
    add(m(i).imag());
  }
}

void Digest::add(const std::string& s) { buf_ += s + ";"; }

}  // namespace gfb::testing
