#pragma once

#include "gfb/grassmann.hpp"
#include "gfb/rational.hpp"
#include "gfb/verdict.hpp"

#include <cstdint>
#include <vector>

namespace gfb {

// (α, β) datum: ev_i : V = C^p → C^n and n-planes β_i ⊂ V* ⊕ C^n.
// β_i is stored through its basis columns c, read as functionals x ↦ c*x.
struct FramedEncoding {
  int p = 0;
  int n = 0;
  int ell = 0;
  std::vector<CMatrix> ev;
  std::vector<Plane> beta;
  std::int64_t delta0 = 0;
  int genus = 0;
  std::int64_t k = 0;

  void validate(const Tolerance& tol = {}) const;
};

struct SubspaceWitness {
  CMatrix W;  // p × p', orthonormal columns
  int n_prime = 0;
  std::int64_t delta0_prime = 0;
};

struct EchelonCounts {
  int s = 0;  // s'
  int t = 0;  // t'
  int r = 0;  // r'
  int m = 0;  // m'
  bool operator==(const EchelonCounts&) const = default;
};

struct WeightReport {
  std::int64_t w_alpha = 0;
  std::vector<std::int64_t> w_beta;
  Rational eta;
  Rational w_W;
  Rational w_W_k;
  Rational w_W_inf;
  Rational w_W_A;
  std::vector<EchelonCounts> counts;
  std::vector<int> t_plane;  // t_i of each β_i
};

// Rows (Rb | Rd) of β_i: n × (p+n).
CMatrix beta_rows(const Plane& beta);
Plane beta_from_rows(int p, const CMatrix& rows, const Tolerance& tol = {});
// g_i = ker(B, Rd) ⊂ C^n ⊕ C^n with Rb = B·ev.
Plane framing_plane(const Plane& beta, const CMatrix& ev, const Tolerance& tol = {});
int beta_t(const Plane& beta, const Tolerance& tol = {});

EchelonCounts echelon_invariants(const Plane& beta, const CMatrix& W, const CMatrix& ev, const Tolerance& tol = {});
// Gaussian elimination in coordinates adapted to [W | W⊥]; cross-check path.
EchelonCounts echelon_invariants_by_elimination(const Plane& beta, const CMatrix& W, const CMatrix& ev,
                                                const Tolerance& tol = {});

std::int64_t alpha_weight(std::int64_t p, std::int64_t p_prime, std::int64_t n, std::int64_t n_prime);
std::int64_t beta_weight(std::int64_t p, std::int64_t p_prime, std::int64_t t, std::int64_t t_prime,
                         std::int64_t r_prime);

// η = 1/(k − g + 1/2).
Rational stability_eta(std::int64_t k, int genus);

// Discrete data entering the limit weights for one witness.
struct SubsheafData {
  int n = 0;
  int n_prime = 0;
  std::int64_t delta0 = 0;
  std::int64_t delta0_prime = 0;
  int genus = 0;
  std::int64_t k = 0;
  std::vector<int> t;        // t_i
  std::vector<int> t_prime;  // t'_i
  std::vector<int> r_prime;  // r'_i
};

struct LimitWeights {
  Rational w_k;
  Rational w_inf;
  Rational w_A;
};

LimitWeights limit_weights(const SubsheafData& d);

WeightReport w_report(const FramedEncoding& enc, const SubspaceWitness& wit, const Tolerance& tol = {});

Contribution classify_k_stability(const Rational& w_inf, const Rational& w_A);
Contribution classify_k_stability(const WeightReport& report);

struct CStarReport {
  Verdict verdict = Verdict::Unstable;
  Rational gamma;
  Rational mu;
  Rational eta;           // γ/(k − g + μ)
  Rational s_margin;      // ℓn/2 − δ₀ − Σs
  Rational t_margin;      // ℓn/2 + δ₀ − Σt
  Rational inf_first;     // n − γΣs
  Rational inf_second;    // −n + γΣ(n − t)
  Rational raw_first;     // n² + ηΣ(n(n−s) − ps)
  Rational raw_second;    // −n² + ηΣ(−nt + p(n−t))
  Rational k_first;       // displayed k-expansion, first line
  Rational k_second;
};

// Admissible degrees: |δ₀| ≤ ⌊(ℓn − 1)/2⌋.
bool degree_admissible(int n, int ell, std::int64_t delta0);

CStarReport cstar_classify(int n, int ell, std::int64_t delta0, const std::vector<int>& s, const std::vector<int>& t,
                           std::int64_t k = 10000, int genus = 0);

}  // namespace gfb
