#include "gfb/framed_bundle.hpp"

#include "gfb/errors.hpp"

#include <algorithm>
#include <numeric>

namespace gfb {

namespace {

int checked_intersection_dim(const CMatrix& a, const CMatrix& b, const Tolerance& tol) {
  CMatrix both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return checked_rank(a, tol) + checked_rank(b, tol) - checked_rank(both, tol);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

cd eval_poly(const CVector& c, double z) {
  cd v = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) v = v * z + c(k);
  return v;
}

// Random section components of degrees deg[j] (negative = identically zero).
// Returns nullopt when the resulting map has forced zeros, i.e. a single
// nonzero component of positive degree.
std::optional<std::vector<CVector>> random_sections(const std::vector<int>& deg, Rng& rng) {
  int nonzero = 0, last = -1;
  for (std::size_t j = 0; j < deg.size(); ++j)
    if (deg[j] >= 0) {
      ++nonzero;
      last = static_cast<int>(j);
    }
  if (nonzero == 0 || (nonzero == 1 && deg[last] > 0)) return std::nullopt;
  std::vector<CVector> out(deg.size());
  for (std::size_t j = 0; j < deg.size(); ++j) {
    if (deg[j] < 0) {
      out[j] = CVector::Zero(0);
      continue;
    }
    out[j] = random_gaussian(deg[j] + 1, 1, rng).col(0);
  }
  return out;
}

CVector evaluate(const std::vector<CVector>& f, double z) {
  CVector v(static_cast<Eigen::Index>(f.size()));
  for (std::size_t j = 0; j < f.size(); ++j) v(static_cast<Eigen::Index>(j)) = f[j].size() ? eval_poly(f[j], z) : cd(0.0);
  return v;
}

}  // namespace

void FramedBundleModel::validate(const Tolerance& tol) const {
  if (n < 1 || ell < 0 || genus < 0) fail(ErrorKind::InvalidMatrix, "model dimensions invalid");
  if (static_cast<int>(g.size()) != ell) fail(ErrorKind::InvalidMatrix, "model needs one plane per marked point");
  for (const Plane& p : g) {
    if (p.m() != n || p.n() != n || p.k() != n) fail(ErrorKind::InvalidFrame, "g_i must be an n-plane in C^n⊕C^n");
    const IntersectionDims d = intersection_dims(p, tol);
    if (d.s + d.t > n) fail(ErrorKind::InvalidFrame, "s_i + t_i exceeds n");
  }
  if (split_type) {
    if (genus != 0) fail(ErrorKind::UnsupportedModel, "split type requires genus 0");
    if (static_cast<int>(split_type->size()) != n) fail(ErrorKind::InvalidMatrix, "split type needs n entries");
    if (!std::is_sorted(split_type->begin(), split_type->end(), std::greater<int>()))
      fail(ErrorKind::InvalidMatrix, "split type must be weakly decreasing");
    if (std::accumulate(split_type->begin(), split_type->end(), std::int64_t{0}) != delta0)
      fail(ErrorKind::InvalidMatrix, "split type does not sum to δ₀");
  }
}

std::vector<WitnessPointData> subbundle_invariants(const FramedBundleModel& model, const SubbundleWitness& wit,
                                                   const Tolerance& tol) {
  if (static_cast<int>(wit.fibers.size()) != model.ell) fail(ErrorKind::InvalidMatrix, "witness needs one fiber per point");
  std::vector<WitnessPointData> out;
  const int n = model.n;
  for (int i = 0; i < model.ell; ++i) {
    const CMatrix& f = wit.fibers[i];
    if (f.rows() != n || f.cols() != wit.n_prime) fail(ErrorKind::InvalidMatrix, "witness fiber has wrong shape");
    if (checked_rank(f, tol) != wit.n_prime) fail(ErrorKind::InvalidFrame, "witness fiber is rank deficient");
    CMatrix lifted = CMatrix::Zero(2 * n, wit.n_prime);
    lifted.topRows(n) = f;
    WitnessPointData d;
    d.s = checked_intersection_dim(model.g[i].basis(), lifted, tol);
    const CMatrix proj = column_space(model.g[i].first_block(), tol);
    d.t = wit.n_prime - (proj.cols() == 0 ? 0 : checked_intersection_dim(f, proj, tol));
    out.push_back(d);
  }
  return out;
}

Rational S1_value(int n, std::int64_t delta0, int n_prime, std::int64_t delta0_prime,
                  const std::vector<WitnessPointData>& wp, const std::vector<int>& t) {
  if (n_prime < 1) fail(ErrorKind::InvalidMatrix, "n' must be positive");
  const Rational N = n, Np = n_prime;
  Rational v = Rational(delta0) / N - Rational(delta0_prime) / Np;
  for (std::size_t i = 0; i < wp.size(); ++i)
    v += Rational(n_prime - wp[i].s) / Np - Rational(n_prime - wp[i].s - wp[i].t + t[i]) / N;
  return v;
}

Rational S2_value(int n, std::int64_t delta0, int n_prime, std::int64_t delta0_prime,
                  const std::vector<WitnessPointData>& wp, const std::vector<int>& t) {
  if (n_prime < 1) fail(ErrorKind::InvalidMatrix, "n' must be positive");
  const Rational N = n, Np = n_prime;
  const Rational factor = Rational(delta0) / N - Rational(delta0_prime) / Np;
  Rational second = -Rational(delta0) / N - Rational(1, 2);
  for (std::size_t i = 0; i < wp.size(); ++i) {
    const int r_prime = n_prime - wp[i].s - wp[i].t;
    second += Rational(r_prime + t[i]) / N;
  }
  return factor * second;
}

namespace {

std::vector<int> plane_ts(const FramedBundleModel& model, const Tolerance& tol) {
  std::vector<int> t;
  for (const Plane& p : model.g) t.push_back(intersection_dims(p, tol).t);
  return t;
}

std::vector<int> plane_ss(const FramedBundleModel& model, const Tolerance& tol) {
  std::vector<int> s;
  for (const Plane& p : model.g) s.push_back(intersection_dims(p, tol).s);
  return s;
}

void fill_margins(const FramedBundleModel& model, const Tolerance& tol, StabilityResult& res) {
  const std::vector<int> s = plane_ss(model, tol), t = plane_ts(model, tol);
  const Rational half = Rational(static_cast<std::int64_t>(model.ell) * model.n, 2);
  res.s_margin = half - model.delta0 - std::accumulate(s.begin(), s.end(), 0);
  res.t_margin = half + model.delta0 - std::accumulate(t.begin(), t.end(), 0);
}

Verdict margin_verdict(const StabilityResult& res) {
  if (res.s_margin < 0 || res.t_margin < 0) return Verdict::Unstable;
  if (res.s_margin == 0 || res.t_margin == 0) return Verdict::Semistable;
  return Verdict::Stable;
}

void require_proper(const FramedBundleModel& model, const SubbundleWitness& w) {
  if (w.n_prime < 1 || w.n_prime >= model.n) fail(ErrorKind::InvalidMatrix, "witness rank must satisfy 1 ≤ n' < n");
}

}  // namespace

Rational S1(const FramedBundleModel& model, const SubbundleWitness& wit, const Tolerance& tol) {
  return S1_value(model.n, model.delta0, wit.n_prime, wit.delta0_prime, subbundle_invariants(model, wit, tol),
                  plane_ts(model, tol));
}

Rational S2(const FramedBundleModel& model, const SubbundleWitness& wit, const Tolerance& tol) {
  return S2_value(model.n, model.delta0, wit.n_prime, wit.delta0_prime, subbundle_invariants(model, wit, tol),
                  plane_ts(model, tol));
}

StabilityResult check_semistable(const FramedBundleModel& model, const std::vector<SubbundleWitness>& witnesses,
                                 const Tolerance& tol) {
  model.validate(tol);
  StabilityResult res;
  fill_margins(model, tol, res);
  res.verdict = margin_verdict(res);
  res.certificate_size = witnesses.size();
  res.incomplete = model.n > 1 && model.genus > 0 && witnesses.empty();
  if (res.verdict == Verdict::Unstable) return res;
  const std::vector<int> t = plane_ts(model, tol);
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    const SubbundleWitness& wit = witnesses[w];
    require_proper(model, wit);
    const auto wp = subbundle_invariants(model, wit, tol);
    const Rational s1 = S1_value(model.n, model.delta0, wit.n_prime, wit.delta0_prime, wp, t);
    Verdict v = Verdict::Stable;
    if (s1 < 0) {
      v = Verdict::Unstable;
    } else if (s1 == 0) {
      const Rational s2 = S2_value(model.n, model.delta0, wit.n_prime, wit.delta0_prime, wp, t);
      v = s2 < 0 ? Verdict::Unstable : (s2 == 0 ? Verdict::Semistable : Verdict::Stable);
    }
    res.verdict = combine(res.verdict, v);
    if (v == Verdict::Unstable) {
      res.violating_witness = w;
      return res;
    }
  }
  return res;
}

StabilityResult pseudo_semistable(const FramedBundleModel& model, const std::vector<SubbundleWitness>& witnesses,
                                  const Tolerance& tol) {
  model.validate(tol);
  StabilityResult res;
  fill_margins(model, tol, res);
  res.certificate_size = witnesses.size();
  res.incomplete = model.n > 1 && model.genus > 0 && witnesses.empty();
  const std::vector<int> t = plane_ts(model, tol);
  for (std::size_t w = 0; w < witnesses.size(); ++w) {
    require_proper(model, witnesses[w]);
    const Rational s1 = S1(model, witnesses[w], tol);
    const Verdict v = s1 < 0 ? Verdict::Unstable : (s1 == 0 ? Verdict::Semistable : Verdict::Stable);
    res.verdict = combine(res.verdict, v);
    if (v == Verdict::Unstable) {
      res.violating_witness = w;
      return res;
    }
  }
  return res;
}

SlopeBoundReport slope_bound_check(int genus, int n, int ell, std::int64_t delta) {
  if (n < 1) fail(ErrorKind::InvalidMatrix, "rank must be positive");
  SlopeBoundReport r;
  r.slope = Rational(delta) / n;
  r.h1_threshold = Rational(2 * genus - 2 + (n - 1) * ell);
  r.global_threshold = Rational(2 * genus - 1 + (n - 1) * ell);
  r.h1_vanishing = r.slope > r.h1_threshold;
  r.globally_generated = r.slope > r.global_threshold;
  return r;
}

double genus0_marked_point(int i) { return static_cast<double>(i + 1); }

std::int64_t witness_degree_floor(const FramedBundleModel& model, int n_prime) {
  const auto& a = *model.split_type;
  const std::int64_t top = std::accumulate(a.begin(), a.begin() + n_prime, std::int64_t{0});
  const std::int64_t window_low = top - static_cast<std::int64_t>(model.n) * model.ell;
  // S¹ ≥ δ₀/n − δ'₀/n' − ℓ, so degrees with n·δ'₀ < n'·δ₀ − n·n'·ℓ cannot destabilize.
  const std::int64_t safe_low = ceil_div(static_cast<std::int64_t>(n_prime) * model.delta0 -
                                             static_cast<std::int64_t>(model.n) * n_prime * model.ell,
                                         model.n);
  return std::min(window_low, safe_low);
}

std::vector<SubbundleWitness> enumerate_witnesses_genus0(const FramedBundleModel& model, int samples,
                                                         std::uint64_t seed, const Tolerance& tol) {
  if (!model.split_type) fail(ErrorKind::UnsupportedModel, "witness enumeration needs a genus-0 split type");
  model.validate(tol);
  const int n = model.n, ell = model.ell;
  const auto& a = *model.split_type;
  std::vector<SubbundleWitness> out;
  Rng rng(seed);

  for (int np = 1; np < n; ++np) {
    for (const auto& sub : subsets(n, np)) {
      SubbundleWitness w;
      w.n_prime = np;
      CMatrix f = CMatrix::Zero(n, np);
      for (int c = 0; c < np; ++c) {
        f(sub[c], c) = 1.0;
        w.delta0_prime += a[sub[c]];
      }
      w.fibers.assign(ell, f);
      out.push_back(std::move(w));
    }
  }
  if (samples <= 0) return out;

  for (int np = 1; np < n; ++np) {
    const bool line = np == 1;
    const bool corank_one = np == n - 1;
    if (!line && !corank_one) continue;
    const std::int64_t top = std::accumulate(a.begin(), a.begin() + np, std::int64_t{0});
    const std::int64_t low = witness_degree_floor(model, np);
    for (std::int64_t d = top; d >= low; --d) {
      for (int sample = 0; sample < samples; ++sample) {
        std::vector<int> deg(n);
        if (line) {
          for (int j = 0; j < n; ++j) deg[j] = static_cast<int>(a[j] - d);
        } else {
          const std::int64_t q = model.delta0 - d;  // degree of the quotient line bundle
          for (int j = 0; j < n; ++j) deg[j] = static_cast<int>(q - a[j]);
        }
        const auto f = random_sections(deg, rng);
        if (!f) break;
        SubbundleWitness w;
        w.n_prime = np;
        w.delta0_prime = d;
        bool ok = true;
        for (int i = 0; i < ell && ok; ++i) {
          const CVector v = evaluate(*f, genus0_marked_point(i));
          if (line) {
            ok = v.norm() > 0.0;
            w.fibers.push_back(v / v.norm());
          } else {
            const CMatrix ker = null_space(v.transpose(), tol);
            ok = ker.cols() == np;
            w.fibers.push_back(ker);
          }
        }
        if (ok) out.push_back(std::move(w));
      }
    }
  }
  return out;
}

}  // namespace gfb
