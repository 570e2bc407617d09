#pragma once

#include "support/oracles.hpp"

#include <gfb/correspondence.hpp>
#include <gfb/framed_bundle.hpp>
#include <gfb/git_weights.hpp>
#include <gfb/grassmann.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace gfb::testing {

// Integer (ev, β) datum built in coordinates adapted to a unimodular basis P;
// W is spanned by the first p' columns of P.
struct IntegerInstance {
  int p = 0, n = 0, ell = 0, p_prime = 0;
  IntMatrix P;
  std::vector<IntMatrix> ev_adapted;    // n × p, equals ev·P
  std::vector<IntMatrix> rows_adapted;  // n × (p + n), equals (Rb·P | Rd)
  FramedEncoding enc;
  SubspaceWitness witness;
};

IntegerInstance random_integer_instance(Rng& rng, int max_p = 6, int max_n = 3, int max_ell = 2);

SubsheafData random_subsheaf_data(Rng& rng, std::int64_t k);

// Orthonormal rows (b*, d*) with −√−1·μ_left = diag(delta) on the framing side.
struct LevelPair {
  Plane plane;
  CMatrix delta;  // real diagonal, weakly decreasing
  int s = 0, t = 0;
};

LevelPair random_level_pair(Rng& rng, int n);

// Hermitian matrix with spectrum `values` in a Haar-random eigenbasis.
CMatrix hermitian_with_spectrum(const RVector& values, Rng& rng);

// Plane in C^n ⊕ C^n with prescribed intersection dimensions. When `sparse`,
// the generic columns have entries in {−1, 0, 1} so coordinate witnesses meet
// the induced flags in nontrivial ways.
Plane random_plane_with_dims(int n, int s, int t, bool sparse, Rng& rng);

FramedBundleModel random_genus0_model(Rng& rng, int max_n = 3, int max_ell = 3);

// Nested flag with the given jumps (j_0..j_{n+1}) and strictly interior weights.
ParabolicPoint random_parabolic_point(int n, const std::vector<int>& jumps, Rng& rng);
// `shift_point` receives a point whose weight-1/2 block is nonempty.
ParabolicData random_parabolic_data(Rng& rng, int& shift_point, int max_n = 4, int max_ell = 3);

// Orthonormal rows for two planes sharing a framing, with d_p d_p* + d_q d_q* = I.
struct ComposablePair {
  CMatrix bp_star, dp_star, bq_star, dq_star;
};

ComposablePair random_composable_pair(int n, Rng& rng);

// Byte-exact serialization of everything a randomized check computes.
class Digest {
 public:
  void add(double x);
  void add(std::int64_t x);
  void add_rational(const Rational& r);
  void add_matrix(const CMatrix& m);
  void add(const std::string& s);
  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

}  // namespace gfb::testing
