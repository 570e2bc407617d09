#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's weight or stability code.

#include <gfb/linalg.hpp>
#include <gfb/rational.hpp>

#include <cstdint>
#include <vector>

namespace gfb::testing {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

IntMatrix int_zeros(int rows, int cols);
IntMatrix int_identity(int n);
IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b);
IntMatrix int_columns(const IntMatrix& a, int first, int count);
IntMatrix int_hcat(const IntMatrix& a, const IntMatrix& b);
CMatrix to_cmatrix(const IntMatrix& a);

// Fraction-free (Bareiss) determinant, exact.
BigInt exact_det(const IntMatrix& square);
int exact_rank(const IntMatrix& a);

// −min over nonzero maximal minors of the column weights. Columns index the
// coordinates of the point; `weights[c]` is the 1-PS weight of column c.
std::int64_t brute_hm_weight(const IntMatrix& rows, const std::vector<std::int64_t>& weights);

// α: columns of ev in a basis adapted to W (first p' columns span W).
std::int64_t brute_alpha_weight(const IntMatrix& ev_adapted, int p_prime);
// β: rows (Rb | Rd) with Rb in the adapted basis; C^n columns carry weight 0.
std::int64_t brute_beta_weight(const IntMatrix& rows_adapted, int p, int p_prime);

struct ExactCounts {
  int s = 0, t = 0, r = 0, m = 0;
};

// Echelon invariants of an integer instance in exact rational arithmetic:
// t' = rank of the W-columns of the rows with vanishing C^n part, t' + r' = rank of
// the W-columns of Rb, m' = rank of ev·W.
ExactCounts exact_echelon_counts(const IntMatrix& rows_adapted, const IntMatrix& ev_adapted, int p, int p_prime);

// Raw Hilbert–Mumford weight of a witness at level k with Riemann–Roch dimensions
// p = δ₀ + n(k − g + 1), p' = δ'₀ + n'(k − g + 1) and η = 2/(2k − 2g + 1).
Rational raw_witness_weight(int n, int n_prime, std::int64_t delta0, std::int64_t delta0_prime, int genus,
                            std::int64_t k, const std::vector<int>& t, const std::vector<int>& t_prime,
                            const std::vector<int>& r_prime);

// Orthogonal projector onto the column span, via SVD.
CMatrix projector(const CMatrix& cols, double rel_tol = 1e-9);
int svd_rank(const CMatrix& m, double rel_tol = 1e-9);
// Largest principal angle through the projector difference: ‖P_a − P_b‖₂ = sin θ_max.
double projector_gap(const CMatrix& a, const CMatrix& b);

// exp(2π√−1·δ) through Eigen's general matrix exponential.
CMatrix reference_exp_2pi_i(const CMatrix& delta);

}  // namespace gfb::testing
