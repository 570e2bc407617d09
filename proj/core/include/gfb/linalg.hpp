#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace gfb {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Rng = std::mt19937_64;

struct Tolerance {
  double rank_rel = 1e-8;
  // Singular values at or below this count as zero whatever the matrix scale,
  // so blocks that vanish up to rounding have rank 0.
  double rank_abs = 1e-12;
  double residual_abs = 1e-9;
  void validate() const;
};

struct RankInfo {
  int rank = 0;
  bool ambiguous = false;  // some singular value within 10x of the cutoff
};

bool is_finite(const CMatrix& m);
void require_finite(const CMatrix& m, const char* what);

int numeric_rank(const CMatrix& m, const Tolerance& tol = {});
RankInfo rank_info(const CMatrix& m, const Tolerance& tol = {});
// Throws RankAmbiguous instead of returning an ambiguous count.
int checked_rank(const CMatrix& m, const Tolerance& tol = {});

// Orthonormal basis of the column span (numeric rank columns).
CMatrix column_space(const CMatrix& m, const Tolerance& tol = {});
// Orthonormal basis of ker m.
CMatrix null_space(const CMatrix& m, const Tolerance& tol = {});
// Orthonormal basis of the orthogonal complement of span(basis) in C^dim.
CMatrix complement(const CMatrix& basis, int dim, const Tolerance& tol = {});
// Orthonormal basis of span(a) ∩ span(b).
CMatrix intersect(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});
int intersection_dim(const CMatrix& a, const CMatrix& b, const Tolerance& tol = {});

// Principal angles (radians, ascending) between two column spans of equal dimension.
RVector principal_angles(const CMatrix& a, const CMatrix& b);
double max_principal_angle(const CMatrix& a, const CMatrix& b);

CMatrix hermitian_part(const CMatrix& m);
bool is_unitary(const CMatrix& u, double tol);
bool is_hermitian(const CMatrix& h, double tol);

// f applied to the spectrum of a Hermitian matrix.
template <class F>
CMatrix hermitian_function(const CMatrix& h, F f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  RVector ev = es.eigenvalues();
  CVector fe(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) fe(i) = cd(f(ev(i)), 0.0);
  return es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix hermitian_sqrt(const CMatrix& h);      // PSD square root, negative rounding clamped
CMatrix hermitian_inv_sqrt(const CMatrix& h);  // requires positive definite
// exp(2πi·δ) for Hermitian δ.
CMatrix exp_2pi_i(const CMatrix& delta);

// Hermitian δ with U = exp(2πiδ) and spec(δ) ⊂ (−1/2, 1/2).
CMatrix principal_log_unitary(const CMatrix& u, const Tolerance& tol = {});
// (M M*)^{1/2} for invertible square M.
CMatrix polar_positive_factor(const CMatrix& m, const Tolerance& tol = {});
// Unitary factor W with M = (M M*)^{1/2} W; defined also for singular M.
CMatrix polar_unitary_factor(const CMatrix& m);

CMatrix random_gaussian(int rows, int cols, Rng& rng);
CMatrix haar_unitary(int n, Rng& rng);
std::vector<int> random_ints(int count, int lo, int hi, Rng& rng);

// Sorted eigenvalues (descending) of a Hermitian matrix.
RVector eigenvalues_desc(const CMatrix& h);

// Group sorted values into clusters whose neighbors differ by at most tol.
std::vector<int> cluster_sizes(const RVector& sorted_values, double tol);

}  // namespace gfb
