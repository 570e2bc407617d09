#pragma once

#include <stdexcept>
#include <string>

namespace gfb {

enum class ErrorKind {
  InvalidMatrix,
  SingularMatrix,
  BranchAmbiguous,
  InvalidFrame,
  TooLarge,
  RankAmbiguous,
  ParameterSingular,
  IncompleteCertificate,
  UnsupportedModel,
  MomentMismatch,
  NothingToShift,
  BoundaryDegenerate,
  InfeasibleDegree,
  SpanDeficient,
  DiagonalKernel,
  ParseError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace gfb
