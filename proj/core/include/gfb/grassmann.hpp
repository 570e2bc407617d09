#pragma once

#include "gfb/linalg.hpp"

#include <cstdint>
#include <vector>

namespace gfb {

// A k-plane in C^m ⊕ C^n, stored as orthonormal basis columns.
class Plane {
 public:
  Plane() = default;
  // Orthonormalizes the span of the given columns.
  static Plane from_span(int m, int n, const CMatrix& spanning, const Tolerance& tol = {});
  // Takes columns that are already orthonormal (checked).
  static Plane from_basis(int m, int n, const CMatrix& basis, const Tolerance& tol = {});

  int m() const { return m_; }
  int n() const { return n_; }
  int k() const { return static_cast<int>(basis_.cols()); }
  const CMatrix& basis() const { return basis_; }
  CMatrix first_block() const { return basis_.topRows(m_); }
  CMatrix second_block() const { return basis_.bottomRows(n_); }

 private:
  int m_ = 0;
  int n_ = 0;
  CMatrix basis_;
};

struct PluckerVector {
  int k = 0;
  int ambient = 0;  // m + n
  CVector coords;   // lexicographic k-subsets of {0..ambient-1}
};

struct IntersectionDims {
  int s = 0;  // dim(g ∩ first summand)
  int t = 0;  // dim(g ∩ second summand)
};

Plane plane_from_graph(const CMatrix& gamma);
Plane plane_from_annihilator(const CMatrix& b_star, const CMatrix& d_star, const Tolerance& tol = {});
// Orthonormal rows (b*, d*) whose kernel is g.
CMatrix annihilator_rows(const Plane& g, const Tolerance& tol = {});
CMatrix b_star(const Plane& g, const Tolerance& tol = {});
CMatrix d_star(const Plane& g, const Tolerance& tol = {});
// γ with g = graph(γ); requires g to project isomorphically onto the first summand.
CMatrix graph_map(const Plane& g, const Tolerance& tol = {});
bool is_graph(const Plane& g, const Tolerance& tol = {});

IntersectionDims intersection_dims(const Plane& g, const Tolerance& tol = {});

CMatrix moment_right(const Plane& g, const Tolerance& tol = {});
CMatrix moment_left(const Plane& g, const Tolerance& tol = {});
CMatrix moment_right_graph(const CMatrix& gamma);
CMatrix moment_left_graph(const CMatrix& gamma);

Plane act_first(const CMatrix& u, const Plane& g);
Plane act_second(const CMatrix& v, const Plane& g);

double plane_distance(const Plane& a, const Plane& b);

constexpr std::int64_t kPluckerCap = 1000000;

std::int64_t binomial(int n, int k);
// Lexicographic k-subsets of {0..n-1}.
std::vector<std::vector<int>> subsets(int n, int k);

PluckerVector plucker(const Plane& g);
// k×k minors of the columns of an N×k matrix, indexed by row subsets.
PluckerVector plucker_of_columns(const CMatrix& cols);
// Plücker vector of the row space of an r×N matrix (coordinates are minors of the rows).
PluckerVector plucker_of_rows(const CMatrix& rows);
// Unit norm, first nonzero coordinate real positive.
PluckerVector normalize_gauge(PluckerVector v, double zero_tol = 1e-12);
// Sine of the angle between the two lines; zero iff projectively equal.
double projective_distance(const PluckerVector& a, const PluckerVector& b);

}  // namespace gfb
