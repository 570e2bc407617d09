#pragma once

#include "gfb/grassmann.hpp"
#include "gfb/rational.hpp"
#include "gfb/verdict.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace gfb {

struct FramedBundleModel {
  int genus = 0;
  int n = 1;
  std::int64_t delta0 = 0;
  int ell = 0;
  std::vector<Plane> g;  // n-planes in C^n (fiber) ⊕ C^n (framing)
  std::optional<std::vector<int>> split_type;

  void validate(const Tolerance& tol = {}) const;
};

struct SubbundleWitness {
  int n_prime = 0;
  std::int64_t delta0_prime = 0;
  std::vector<CMatrix> fibers;  // n × n' per point
};

struct WitnessPointData {
  int s = 0;  // s'_i
  int t = 0;  // t'_i
};

std::vector<WitnessPointData> subbundle_invariants(const FramedBundleModel& model, const SubbundleWitness& wit,
                                                   const Tolerance& tol = {});

// Closed forms from discrete data; s', t' are per-point witness data, t the planes' t_i.
Rational S1_value(int n, std::int64_t delta0, int n_prime, std::int64_t delta0_prime,
                  const std::vector<WitnessPointData>& wp, const std::vector<int>& t);
Rational S2_value(int n, std::int64_t delta0, int n_prime, std::int64_t delta0_prime,
                  const std::vector<WitnessPointData>& wp, const std::vector<int>& t);

Rational S1(const FramedBundleModel& model, const SubbundleWitness& wit, const Tolerance& tol = {});
Rational S2(const FramedBundleModel& model, const SubbundleWitness& wit, const Tolerance& tol = {});

struct StabilityResult {
  Verdict verdict = Verdict::Stable;
  std::optional<std::size_t> violating_witness;
  std::size_t certificate_size = 0;
  bool incomplete = false;  // genus > 0, rank > 1, no witnesses supplied
  Rational s_margin;        // ℓn/2 − δ₀ − Σs
  Rational t_margin;        // ℓn/2 + δ₀ − Σt
};

StabilityResult check_semistable(const FramedBundleModel& model, const std::vector<SubbundleWitness>& witnesses,
                                 const Tolerance& tol = {});
StabilityResult pseudo_semistable(const FramedBundleModel& model, const std::vector<SubbundleWitness>& witnesses,
                                  const Tolerance& tol = {});

struct SlopeBoundReport {
  Rational slope;
  Rational h1_threshold;      // 2g − 2 + (n − 1)ℓ
  Rational global_threshold;  // 2g − 1 + (n − 1)ℓ
  bool h1_vanishing = false;
  bool globally_generated = false;
};

SlopeBoundReport slope_bound_check(int genus, int n, int ell, std::int64_t delta);

// Marked points of genus-0 models sit at z = 1, 2, …, ℓ in the affine chart.
double genus0_marked_point(int i);

// Lowest degree the enumerator visits for rank n'; below it S¹ > 0 automatically.
std::int64_t witness_degree_floor(const FramedBundleModel& model, int n_prime);

std::vector<SubbundleWitness> enumerate_witnesses_genus0(const FramedBundleModel& model, int samples,
                                                         std::uint64_t seed, const Tolerance& tol = {});

}  // namespace gfb
