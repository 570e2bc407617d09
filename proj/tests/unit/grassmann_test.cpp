#include "support/generators.hpp"

#include <gfb/errors.hpp>
#include <gfb/grassmann.hpp>

#include <gtest/gtest.h>

#include <algorithm>

namespace gfb {
namespace {

Plane random_plane(int m, int n, int k, Rng& rng) { return Plane::from_span(m, n, random_gaussian(m + n, k, rng)); }

TEST(Plane, FromBasisRejectsNonOrthonormalColumns) {
  CMatrix cols = CMatrix::Zero(4, 2);
  cols(0, 0) = 1.0;
  cols(1, 1) = 2.0;
  EXPECT_THROW(Plane::from_basis(2, 2, cols), Error);
  EXPECT_NO_THROW(Plane::from_span(2, 2, cols));
}

TEST(Plane, AnnihilatorRowsAreOrthonormalAndKillThePlane) {
  Rng rng(1);
  for (int n = 1; n <= 4; ++n) {
    const Plane g = random_plane(n, n, n, rng);
    const CMatrix rows = annihilator_rows(g);
    EXPECT_LT((rows * rows.adjoint() - CMatrix::Identity(n, n)).norm(), 1e-12);
    EXPECT_LT((rows * g.basis()).norm(), 1e-12);
    EXPECT_LT(plane_distance(plane_from_annihilator(b_star(g), d_star(g)), g), 1e-10);
  }
}

TEST(Plane, GraphRoundTrip) {
  Rng rng(2);
  const CMatrix gamma = random_gaussian(3, 2, rng);
  const Plane g = plane_from_graph(gamma);
  ASSERT_TRUE(is_graph(g));
  EXPECT_LT((graph_map(g) - gamma).norm(), 1e-10);
}

TEST(Plane, IntersectionDimsOfCoordinateSummands) {
  const CMatrix id = CMatrix::Identity(6, 6);
  CMatrix cols(6, 3);
  cols << id.col(0), id.col(1), id.col(4);  // two vectors in the first summand, one in the second
  const IntersectionDims d = intersection_dims(Plane::from_basis(3, 3, cols));
  EXPECT_EQ(d.s, 2);
  EXPECT_EQ(d.t, 1);
}

TEST(Moment, GraphFormulasAgreeWithRowFormulas) {
  Rng rng(3);
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      const CMatrix gamma = random_gaussian(n, m, rng);
      const Plane g = plane_from_graph(gamma);
      EXPECT_LT((moment_right(g) - moment_right_graph(gamma)).norm(), 1e-10) << m << "x" << n;
      EXPECT_LT((moment_left(g) - moment_left_graph(gamma)).norm(), 1e-10) << m << "x" << n;
    }
  }
}

TEST(Moment, EquivariantUnderUnitaryActions) {
  Rng rng(4);
  const Plane g = random_plane(3, 3, 3, rng);
  const CMatrix u = haar_unitary(3, rng);
  const CMatrix v = haar_unitary(3, rng);
  EXPECT_LT((moment_right(act_first(u, g)) - u * moment_right(g) * u.adjoint()).norm(), 1e-10);
  EXPECT_LT((moment_left(act_second(v, g)) - v * moment_left(g) * v.adjoint()).norm(), 1e-10);
  // Each moment map is invariant under the other factor.
  EXPECT_LT((moment_right(act_second(v, g)) - moment_right(g)).norm(), 1e-10);
  EXPECT_LT((moment_left(act_first(u, g)) - moment_left(g)).norm(), 1e-10);
}

TEST(Moment, SkewHermitianWithBoundedSpectrum) {
  Rng rng(5);
  const Plane g = random_plane(4, 4, 4, rng);
  const CMatrix mu = moment_right(g);
  EXPECT_LT((mu + mu.adjoint()).norm(), 1e-12);
  const RVector ev = eigenvalues_desc(cd(0, -1) * mu);
  EXPECT_LE(ev(0), 0.5 + 1e-12);
  EXPECT_GE(ev(ev.size() - 1), -0.5 - 1e-12);
}

TEST(Plucker, CountsAndSubsets) {
  EXPECT_EQ(binomial(6, 3), 20);
  EXPECT_EQ(binomial(4, 0), 1);
  EXPECT_EQ(binomial(3, 5), 0);
  const auto subs = subsets(4, 2);
  ASSERT_EQ(subs.size(), 6u);
  EXPECT_EQ(subs.front(), (std::vector<int>{0, 1}));
  EXPECT_EQ(subs.back(), (std::vector<int>{2, 3}));
}

TEST(Plucker, TwoPlanesSatisfyTheQuadric) {
  Rng rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const PluckerVector p = plucker(random_plane(2, 2, 2, rng));
    ASSERT_EQ(p.coords.size(), 6);
    // Order: 01 02 03 12 13 23.
    const cd q = p.coords(0) * p.coords(5) - p.coords(1) * p.coords(4) + p.coords(2) * p.coords(3);
    EXPECT_LT(std::abs(q), 1e-12);
  }
}

TEST(Plucker, IndependentOfBasisChoice) {
  Rng rng(7);
  const CMatrix cols = random_gaussian(5, 2, rng);
  const CMatrix change = random_gaussian(2, 2, rng);
  const PluckerVector a = plucker_of_columns(cols);
  const PluckerVector b = plucker_of_columns(cols * change);
  EXPECT_LT(projective_distance(a, b), 1e-12);
  const PluckerVector na = normalize_gauge(a);
  EXPECT_NEAR(na.coords.norm(), 1.0, 1e-12);
  EXPECT_LT((na.coords - normalize_gauge(b).coords).norm(), 1e-10);
}

// The kernel of r rows in C^N has coordinates p_K(I) ∝ sgn(I, I^c)·p_rows(I^c).
TEST(Plucker, KernelCoordinatesAreComplementaryRowMinors) {
  Rng rng(8);
  for (int n = 1; n <= 3; ++n) {
    const Plane g = random_plane(n, n, n, rng);
    const PluckerVector rows = plucker_of_rows(annihilator_rows(g));
    const PluckerVector kernel = plucker(g);
    const auto subs = subsets(2 * n, n);
    PluckerVector dual = kernel;
    for (std::size_t a = 0; a < subs.size(); ++a) {
      std::vector<int> perm = subs[a];
      std::vector<int> rest;
      for (int x = 0; x < 2 * n; ++x)
        if (std::find(perm.begin(), perm.end(), x) == perm.end()) rest.push_back(x);
      perm.insert(perm.end(), rest.begin(), rest.end());
      int inversions = 0;
      for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = i + 1; j < perm.size(); ++j) inversions += perm[i] > perm[j];
      const std::size_t b = static_cast<std::size_t>(std::find(subs.begin(), subs.end(), rest) - subs.begin());
      dual.coords(static_cast<Eigen::Index>(a)) = (inversions % 2 ? -1.0 : 1.0) * rows.coords(static_cast<Eigen::Index>(b));
    }
    EXPECT_LT(projective_distance(kernel, dual), 1e-10) << "n=" << n;
  }
}

}  // namespace
}  // namespace gfb
