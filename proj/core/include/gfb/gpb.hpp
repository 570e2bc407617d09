#pragma once

#include "gfb/grassmann.hpp"
#include "gfb/rational.hpp"
#include "gfb/verdict.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gfb {

// n-planes g_i ⊂ E_{p_i} ⊕ E_{q_i}; weights are fixed at ±1/2.
struct GPBundle {
  int genus = 0;
  int n = 1;
  std::int64_t delta0 = 0;
  std::vector<Plane> planes;

  int ell() const { return static_cast<int>(planes.size()); }
  void validate(const Tolerance& tol = {}) const;
};

struct GPBWitness {
  int n_prime = 0;
  std::int64_t delta0_prime = 0;
  std::vector<CMatrix> fibers_p;  // n × n'
  std::vector<CMatrix> fibers_q;
};

// gp ⊂ E_p ⊕ C^n, gq ⊂ C^n ⊕ E_q; result ⊂ E_p ⊕ E_q.
Plane compose_planes(const Plane& gp, const Plane& gq, const Tolerance& tol = {});
// Exchange the two summands of a plane.
Plane swap_summands(const Plane& g);

// β^p over (E_p*, C^n*) and β^q over (C^n*, E_q*), as Plücker vectors of annihilator rows.
// The result is indexed by subsets of (E_p*, E_q*).
PluckerVector plucker_compose(const PluckerVector& beta_p, const PluckerVector& beta_q, int framing_dim,
                              double zero_tol = 1e-12);

Rational gpb_pardeg(const GPBundle& bundle, const GPBWitness& wit, const Tolerance& tol = {});

struct GPBResult {
  Verdict verdict = Verdict::Stable;
  std::optional<std::size_t> violating_witness;
  Rational pardeg_E;
};

GPBResult gpb_semistable(const GPBundle& bundle, const std::vector<GPBWitness>& witnesses, const Tolerance& tol = {});

// 0 < D + ℓ·min(n−n', n')/n' ≤ D + 2ℓ(n−n')/n with D = δ₀/n − δ'₀/n'.
struct ChainReport {
  Rational middle;
  Rational right;
  bool holds = false;
};

ChainReport inequality_chain(int n, int ell, std::int64_t delta0, int n_prime, std::int64_t delta0_prime);
bool degree_bound_ok(int n, int ell, std::int64_t delta0);

struct UnitaryComposition {
  CMatrix rows;  // n × 2n, orthonormal
  RVector D;
  CMatrix u, u_p, u_q;
  Plane plane;   // kernel of rows, in E_p ⊕ E_q
  double orthonormality_residual = 0.0;
};

// Both planes are given by rows (b*, d*) acting on E ⊕ C^n.
UnitaryComposition unitary_compose(const CMatrix& bp_star, const CMatrix& dp_star, const CMatrix& bq_star,
                                   const CMatrix& dq_star, const Tolerance& tol = {});

struct DestabilizingCertificate {
  CMatrix framing_basis;              // unitary, first column ∝ the common vector
  std::vector<std::int64_t> v_weights;        // on V*
  std::vector<std::int64_t> framing_weights;  // on the pair's framing, in framing_basis
  std::int64_t max_weight_p = 0;  // over nonzero Plücker coordinates of β^p
  std::int64_t max_weight_q = 0;
  bool certifies = false;
};

// β^p, β^q ⊂ V* ⊕ C^n share one framing. Empty when the vector is not common to both.
std::optional<DestabilizingCertificate> find_destabilizing_1ps(int p, const Plane& beta_p, const Plane& beta_q,
                                                               const CVector& common, int ell = 1,
                                                               const Tolerance& tol = {});

}  // namespace gfb
