#include "gfb/errors.hpp"
#include "gfb/rational.hpp"
#include "gfb/verdict.hpp"

#include <cmath>

namespace gfb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::BranchAmbiguous: return "BranchAmbiguous";
    case ErrorKind::InvalidFrame: return "InvalidFrame";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::RankAmbiguous: return "RankAmbiguous";
    case ErrorKind::ParameterSingular: return "ParameterSingular";
    case ErrorKind::IncompleteCertificate: return "IncompleteCertificate";
    case ErrorKind::UnsupportedModel: return "UnsupportedModel";
    case ErrorKind::MomentMismatch: return "MomentMismatch";
    case ErrorKind::NothingToShift: return "NothingToShift";
    case ErrorKind::BoundaryDegenerate: return "BoundaryDegenerate";
    case ErrorKind::InfeasibleDegree: return "InfeasibleDegree";
    case ErrorKind::SpanDeficient: return "SpanDeficient";
    case ErrorKind::DiagonalKernel: return "DiagonalKernel";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational approx_rational(double x, double tol, std::int64_t max_den) {
  if (!std::isfinite(x)) fail(ErrorKind::InvalidMatrix, "non-finite value cannot be rationalized");
  // Continued-fraction convergents; the first one within tol has the smallest
  // denominator among convergents.
  const double x0 = x;
  BigInt h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  BigInt k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    const double approx = h.convert_to<double>() / k.convert_to<double>();
    if (std::abs(approx - x0) <= tol || frac < 1e-15) break;
    const double inv = 1.0 / frac;
    const double a = std::floor(inv);
    frac = inv - a;
    const BigInt ai = static_cast<std::int64_t>(a);
    BigInt h_next = ai * h + h_prev;
    BigInt k_next = ai * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return Rational(h, k);
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "Stable";
    case Verdict::Semistable: return "Semistable";
    case Verdict::Unstable: return "Unstable";
  }
  return "Unknown";
}

const char* to_string(Contribution c) {
  switch (c) {
    case Contribution::Positive: return "Positive";
    case Contribution::StrictlySemistable: return "StrictlySemistable";
    case Contribution::Violating: return "Violating";
  }
  return "Unknown";
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::Unstable || b == Verdict::Unstable) return Verdict::Unstable;
  if (a == Verdict::Semistable || b == Verdict::Semistable) return Verdict::Semistable;
  return Verdict::Stable;
}

}  // namespace gfb
