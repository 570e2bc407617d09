#include "support/generators.hpp"

#include <gfb/errors.hpp>
#include <gfb/git_weights.hpp>

#include <gtest/gtest.h>

namespace gfb {
namespace {

using namespace gfb::testing;

TEST(Weights, ClosedFormsOnSmallCases) {
  // p = 3, p' = 1, n = 2, n' = 1: α weight pn' − p'n = 3 − 2.
  EXPECT_EQ(alpha_weight(3, 1, 2, 1), 1);
  // β weight pt' − p't + r'(p − p').
  EXPECT_EQ(beta_weight(3, 1, 2, 0, 0), -2);
  EXPECT_EQ(beta_weight(3, 1, 2, 1, 0), 1);
  EXPECT_EQ(beta_weight(3, 1, 2, 0, 1), 0);
}

TEST(Weights, AlphaAgreesWithMinorEnumeration) {
  // ev = [[1 0 0], [0 1 1]] with W spanned by e_1: m' = 1.
  const IntMatrix ev = {{1, 0, 0}, {0, 1, 1}};
  EXPECT_EQ(brute_alpha_weight(ev, 1), alpha_weight(3, 1, 2, 1));
  // W = span(e_3): ev·W has rank 1 as well.
  const IntMatrix ev_w_last = {{0, 0, 1}, {1, 1, 0}};
  EXPECT_EQ(brute_alpha_weight(ev_w_last, 1), alpha_weight(3, 1, 2, 1));
}

TEST(Weights, ReportMatchesBruteForceOnRandomIntegerData) {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const IntegerInstance inst = random_integer_instance(rng, 5, 3, 2);
    const WeightReport rep = w_report(inst.enc, inst.witness);
    for (int i = 0; i < inst.ell; ++i) {
      EXPECT_EQ(rep.w_beta[i], brute_beta_weight(inst.rows_adapted[i], inst.p, inst.p_prime)) << "trial " << trial;
      const ExactCounts x = exact_echelon_counts(inst.rows_adapted[i], inst.ev_adapted[i], inst.p, inst.p_prime);
      EXPECT_EQ(rep.counts[i].t, x.t);
      EXPECT_EQ(rep.counts[i].r, x.r);
      EXPECT_EQ(rep.counts[i].m, x.m);
    }
  }
}

TEST(Weights, RankPathIgnoresNumericallyZeroProducts) {
  // ev vanishes on W = span(e_1, e_2) exactly, but P mixes coordinates so the
  // floating product ev·W is rounding noise rather than zero.
  Rng rng(22);
  const CMatrix u = haar_unitary(4, rng);
  CMatrix ev_a = CMatrix::Zero(2, 4);
  ev_a(0, 2) = 1.0;
  ev_a(1, 3) = 1.0;
  const CMatrix ev = ev_a * u.adjoint();
  const CMatrix W = u.leftCols(2);
  CMatrix rows(2, 6);
  rows << ev, CMatrix::Identity(2, 2);
  const Plane beta = beta_from_rows(4, rows);
  const EchelonCounts a = echelon_invariants(beta, W, ev);
  EXPECT_EQ(a.m, 0);
  EXPECT_EQ(a.t, 0);
  EXPECT_EQ(a, echelon_invariants_by_elimination(beta, W, ev));
}

TEST(Weights, BetaRowsRoundTrip) {
  Rng rng(23);
  const CMatrix rows = random_gaussian(2, 5, rng);
  const Plane beta = beta_from_rows(3, rows);
  const CMatrix back = beta_rows(beta);
  // Same row space.
  EXPECT_LT(projective_distance(plucker_of_rows(rows), plucker_of_rows(back)), 1e-10);
  EXPECT_EQ(beta_t(beta), 0);
}

TEST(Eta, MatchesClosedForm) {
  EXPECT_EQ(stability_eta(10, 0), rat(2, 21));
  EXPECT_EQ(stability_eta(10000, 2), rat(2, 19997));
}

TEST(Classification, BranchesOnLeadingThenSubleadingWeight) {
  EXPECT_EQ(classify_k_stability(rat(1), rat(-5)), Contribution::Positive);
  EXPECT_EQ(classify_k_stability(rat(-1, 3), rat(5)), Contribution::Violating);
  EXPECT_EQ(classify_k_stability(rat(0), rat(1, 2)), Contribution::Positive);
  EXPECT_EQ(classify_k_stability(rat(0), rat(-1, 2)), Contribution::Violating);
  EXPECT_EQ(classify_k_stability(rat(0), rat(0)), Contribution::StrictlySemistable);
}

// The raw weight at level k is an exact rescaling of the k-form:
// w_W = n n' k / (k − g + 1/2) · w_k.
TEST(Classification, RawWeightIsRescaledKForm) {
  Rng rng(24);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::int64_t k = 50 + trial;
    const SubsheafData d = random_subsheaf_data(rng, k);
    const LimitWeights lw = limit_weights(d);
    const Rational raw =
        raw_witness_weight(d.n, d.n_prime, d.delta0, d.delta0_prime, d.genus, d.k, d.t, d.t_prime, d.r_prime);
    const Rational scale = Rational(d.n * d.n_prime) * Rational(k) / (Rational(k - d.genus) + rat(1, 2));
    ASSERT_EQ(raw, scale * lw.w_k) << "trial " << trial;
    if (lw.w_inf == 0) EXPECT_EQ(lw.w_k, lw.w_A / Rational(k));
  }
}

TEST(CStar, DegreeRange) {
  EXPECT_TRUE(degree_admissible(1, 3, 1));
  EXPECT_FALSE(degree_admissible(1, 3, 2));
  EXPECT_TRUE(degree_admissible(2, 2, -1));
  EXPECT_FALSE(degree_admissible(1, 1, 1));
  EXPECT_THROW(cstar_classify(1, 3, 2, {0, 0, 0}, {0, 0, 0}), Error);
}

TEST(CStar, VerdictsOnTwoPointLineBundles) {
  // n = 1, ℓ = 2, δ₀ = 0: Σs and Σt must each stay at most 1.
  EXPECT_EQ(cstar_classify(1, 2, 0, {0, 0}, {0, 0}).verdict, Verdict::Stable);
  EXPECT_EQ(cstar_classify(1, 2, 0, {1, 0}, {0, 0}).verdict, Verdict::Semistable);
  EXPECT_EQ(cstar_classify(1, 2, 0, {1, 0}, {0, 1}).verdict, Verdict::Semistable);
  EXPECT_EQ(cstar_classify(1, 2, 0, {1, 1}, {0, 0}).verdict, Verdict::Unstable);
  EXPECT_EQ(cstar_classify(1, 2, 0, {0, 0}, {1, 1}).verdict, Verdict::Unstable);
}

TEST(CStar, KExpansionTracksLeadingTerms) {
  const CStarReport a = cstar_classify(2, 3, 1, {1, 0, 1}, {0, 2, 0}, 10000);
  const CStarReport b = cstar_classify(2, 3, 1, {1, 0, 1}, {0, 2, 0}, 1000000);
  EXPECT_EQ(a.inf_first, b.inf_first);
  EXPECT_EQ(a.inf_second, b.inf_second);
  // The 1/k corrections shrink with k.
  EXPECT_LT(abs(b.k_first - b.inf_first), abs(a.k_first - a.inf_first));
  EXPECT_LT(abs(b.k_second - b.inf_second), abs(a.k_second - a.inf_second));
  EXPECT_EQ(a.gamma, rat(4, 4));
}

TEST(CStar, RejectsBadPatterns) {
  EXPECT_THROW(cstar_classify(2, 2, 0, {2, 0}, {1, 0}), Error);
  EXPECT_THROW(cstar_classify(2, 2, 0, {0}, {0, 0}), Error);
}

}  // namespace
}  // namespace gfb
