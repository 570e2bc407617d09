#pragma once

#include "gfb/framed_bundle.hpp"
#include "gfb/git_weights.hpp"
#include "gfb/grassmann.hpp"
#include "gfb/rational.hpp"
#include "gfb/verdict.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gfb {

// Flag F_{-1} ⊂ F_0 ⊂ … ⊂ F_{n+1} (n+3 subspaces of C^n) with weights α_0..α_{n+1}.
struct ParabolicPoint {
  std::vector<CMatrix> flag;
  std::vector<Rational> weights;
};

struct ParabolicData {
  int n = 0;
  std::vector<ParabolicPoint> points;

  void validate(const Tolerance& tol = {}) const;
};

// F_j = Π(g ∩ R^{-1}(C^j)) for j = 0..n, padded with F_{-1} = 0 and F_{n+1} = C^n.
std::vector<CMatrix> induced_flag(const Plane& g, const Tolerance& tol = {});

// dim(F_j / F_{j-1}) for j = 0..n+1.
std::vector<int> flag_jumps(const std::vector<CMatrix>& flag, const Tolerance& tol = {});
// Jumps of the induced flag F_j ∩ E'.
std::vector<int> restricted_flag_jumps(const std::vector<CMatrix>& flag, const CMatrix& fiber,
                                       const Tolerance& tol = {});

Rational pardeg(std::int64_t delta0_prime, int n_prime, const std::vector<std::vector<int>>& jumps,
                const std::vector<std::vector<Rational>>& weights);

struct ParabolicResult {
  Verdict verdict = Verdict::Stable;
  std::optional<std::size_t> violating_witness;
  Rational pardeg_E;
};

// Pre-computed jump data for repeated evaluation at many weight vectors.
struct WitnessJumps {
  int n_prime = 0;
  std::int64_t delta0_prime = 0;
  std::vector<std::vector<int>> jumps;
};

ParabolicResult parabolic_verdict(int n, std::int64_t delta0, const std::vector<std::vector<int>>& jumps,
                                  const std::vector<WitnessJumps>& witnesses,
                                  const std::vector<std::vector<Rational>>& weights);

std::vector<WitnessJumps> witness_jumps(const ParabolicData& parabolic, const std::vector<SubbundleWitness>& witnesses,
                                        const Tolerance& tol = {});

ParabolicResult parabolic_semistable(const FramedBundleModel& model, const ParabolicData& parabolic,
                                     const std::vector<SubbundleWitness>& witnesses, const Tolerance& tol = {});

// Weight vector at the simplex vertex k: α_0..α_k = 1/2, the rest −1/2.
std::vector<Rational> vertex_weights(int n, int k);

// Per-point (√−1/2)(−I + 2dd*) from the rows of β_i.
std::vector<CMatrix> moduli_moment(const FramedEncoding& enc, const Tolerance& tol = {});
// Graph route (√−1/2)(I − ξξ*)(I + ξξ*)^{-1}; requires every β_i to be a graph.
std::vector<CMatrix> moduli_moment_graph(const FramedEncoding& enc, const Tolerance& tol = {});

struct NormalFormResult {
  CMatrix rho_star;  // n × 2n
  int s = 0, r = 0, t = 0;
  CMatrix M;             // r × r diagonal
  CMatrix target;        // L: unitary acting on the rows
  CMatrix fiber;         // V: new fiber basis; the normalized plane is act_first(V*, g)
  std::vector<int> clusters;  // equal-eigenvalue blocks of δ̂ (residual freedom)
  double pattern_residual = 0.0;  // ‖ρ* − displayed block pattern‖
  double m_residual = 0.0;        // ‖M² − (I/2 − δ̂)‖
  Plane plane;  // kernel of rho_star
};

NormalFormResult normal_form(const Plane& g, const CMatrix& delta, const Tolerance& tol = {});
// The displayed block matrix for a diagonal δ.
CMatrix normal_form_pattern(const RVector& delta_diag, int s, int t);

struct HeckeResult {
  ParabolicData parabolic;
  std::int64_t delta0 = 0;
};

HeckeResult hecke_shift(const ParabolicData& parabolic, std::int64_t delta0, int point, const Tolerance& tol = {});

struct TwoPointNormalization {
  CMatrix delta;   // rescaled convention, spectrum in (−1, 1)
  CMatrix gamma1;  // positive Hermitian
  double residual = 0.0;
};

TwoPointNormalization genus0_two_point_normalize(const CMatrix& gamma2, const Tolerance& tol = {});
// γ₂γ₁^{-1}: the GL(n, C) coordinate of the normalized pair.
CMatrix two_point_chart(const CMatrix& gamma2, const Tolerance& tol = {});

Plane transfer_plane(const Plane& g_tilde, const CMatrix& delta, const CMatrix& f, const Tolerance& tol = {});
// (z^{-δ})* z^{-δ} for real z > 0.
CMatrix renormalized_form(const CMatrix& delta, double z);

struct MomentWeights {
  RVector values;          // eigenvalues of −√−1 μ, weakly decreasing
  CMatrix eigenvectors;    // matching columns
  std::vector<int> clusters;
};

constexpr double kClusterTol = 1e-7;

MomentWeights weights_from_moment(const CMatrix& mu);

// Local model at one marked point: fiber plane g̃ and Hermitian δ on the fiber side.
struct LocalModel {
  CMatrix f;        // fiber trivialization diagonalizing δ
  CMatrix framing;  // unitary diagonalizing the framing-side moment
  Plane plane;      // transferred plane in the adapted coordinates
  ParabolicPoint parabolic;
  RVector weights;  // framing-side eigenvalues, decreasing
};

LocalModel local_model(const Plane& g_tilde, const CMatrix& delta, const Tolerance& tol = {});

}  // namespace gfb
