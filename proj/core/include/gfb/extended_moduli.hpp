#pragma once

#include "gfb/grassmann.hpp"

#include <cstdint>
#include <vector>

namespace gfb {

// Point of EM_n. δ_i is stored Hermitian; the Lie-algebra element is √−1·δ_i. C_1 = I.
struct EMPoint {
  int n = 0;
  int genus = 0;
  std::vector<CMatrix> A, B;
  std::vector<CMatrix> C;
  std::vector<CMatrix> delta;

  int ell() const { return static_cast<int>(C.size()); }
  void validate(const Tolerance& tol = {}) const;
};

struct GMPoint {
  EMPoint em;
  std::int64_t delta0 = 0;
  std::vector<Plane> planes;  // kernels of the rows (b_i*, d_i*)

  void validate(const Tolerance& tol = {}) const;
};

// ∏[A_j, B_j] · exp(2π√−1 δ_1) · ∏_{i≥2} C_i exp(2π√−1 δ_i) C_i^{-1}.
CMatrix relation_lhs(const EMPoint& pt);
double relation_residual(const EMPoint& pt);
// Overwrites delta[0] so that the relation holds.
EMPoint solve_delta1(EMPoint pt, const Tolerance& tol = {});

std::vector<CMatrix> em_moment(const EMPoint& pt);
EMPoint conjugate(const EMPoint& pt, const CMatrix& u);

double gm_level_residual(const GMPoint& pt, const Tolerance& tol = {});
// (√−1/2)(I − 2dd*) per point.
std::vector<CMatrix> gm_right_moment(const GMPoint& pt, const Tolerance& tol = {});

struct TraceReport {
  double trace_sum = 0.0;
  bool integral = false;
  bool matches_degree = false;   // Σ tr δ_i = −δ₀
  bool shifted_identity = false; // Σ tr(I/2 + δ_i) = nℓ/2 − δ₀
  double det_residual = 0.0;     // |det(lhs) − exp(2π√−1 Σ tr δ_i)|
  std::vector<int> s, t;         // ±1/2 multiplicities
  bool s_bound = false;          // Σ s_i ≤ ℓn/2 − δ₀
  bool t_bound = false;          // Σ t_i ≤ ℓn/2 + δ₀
};

TraceReport trace_checks(const GMPoint& pt, std::int64_t delta0, const Tolerance& tol = {});

struct LevelSetReport {
  std::vector<int> plus_half, kernel_b;
  std::vector<int> minus_half, kernel_d;
  bool holds = false;
};

LevelSetReport level_set_identity(const GMPoint& pt, const Tolerance& tol = {});

struct SmoothnessFlags {
  bool interior_point = false;    // some δ_i with spectrum inside (−1/2, 1/2)
  bool non_boundary = false;      // some eigenvalue of some δ_i is not ±1/2
  bool irreducible = false;
  int algebra_dim = 0;
};

constexpr int kWordDepth = 6;

// Dimension of the span of words of length ≤ depth in the generators (identity included).
int generated_algebra_dim(const std::vector<CMatrix>& gens, int depth = kWordDepth, const Tolerance& tol = {});
SmoothnessFlags smoothness_hypotheses(const GMPoint& pt, const Tolerance& tol = {});

// Annihilator rows (b*, d*) with b = (I/2 − δ)^{1/2}W, d = Y(I/2 + δ)^{1/2}W for unitaries W, Y.
Plane level_plane(const CMatrix& delta, const CMatrix& W, const CMatrix& Y, const Tolerance& tol = {});

struct RandomEM {
  EMPoint point;
  std::int64_t delta0 = 0;  // −Σ tr δ_i
};

RandomEM random_em_point(int n, int genus, int ell, std::uint64_t seed, const Tolerance& tol = {});
GMPoint random_gm_point(int n, int genus, int ell, std::int64_t delta0, std::uint64_t seed, const Tolerance& tol = {});

}  // namespace gfb
