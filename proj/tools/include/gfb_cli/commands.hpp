#pragma once

#include <gfb/serialize.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gfb::cli {

struct RunConfig {
  std::optional<std::uint64_t> seed;
  Tolerance tol;
  std::string json_out;
  bool allow_unstable = false;

  std::uint64_t require_seed(const char* command) const;
};

struct CommandResult {
  Json report = Json::object();
  bool residuals_ok = true;
  bool unstable = false;

  bool ok(const RunConfig& cfg) const { return residuals_ok && (!unstable || cfg.allow_unstable); }
};

// Flat "path = value" records; floats with 12 significant digits.
std::string render_records(const Json& report);

struct LineBundlePattern {
  std::vector<int> s, t;
  bool feasible = false;
  Verdict cstar = Verdict::Unstable;
  int dimension = 0;
};

struct LineBundleReport {
  int ell = 0;
  std::int64_t delta0 = 0;
  std::vector<LineBundlePattern> patterns;
  int max_sum_s = 0;  // over feasible patterns
  int max_sum_t = 0;
  int quotient_dimension = 0;
  bool cstar_agrees = true;
};

LineBundleReport example_line_bundles(int ell, std::int64_t delta0);
CommandResult cmd_example_line_bundles(int ell, std::int64_t delta0);

struct Genus0Report {
  int n = 0;
  double normalize_residual = 0.0;
  double moment_residual = 0.0;  // ‖μ(g₁) + μ(g₂)‖
  int chart_rank = 0;
  int expected_rank = 0;
};

Genus0Report example_genus0(int n, std::uint64_t seed, const Tolerance& tol = {});
CommandResult cmd_example_genus0(int n, std::uint64_t seed, const Tolerance& tol = {});
// Real Jacobian rank of γ₂ ↦ γ₂γ₁^{-1} by central differences.
int chart_rank(const CMatrix& gamma2, double step = 1e-5, const Tolerance& tol = {});

struct OnePointReport {
  int n = 0;
  std::int64_t delta0 = 0;
  std::vector<std::pair<int, int>> feasible;  // (s₁, t₁)
  int max_s = 0, max_t = 0;
  int fiber_dimension = 0;
};

OnePointReport example_one_point(int n, std::int64_t delta0);
CommandResult cmd_example_one_point(int n, std::int64_t delta0);

CommandResult cmd_pipeline(const GMPoint& pt, const RunConfig& cfg);
CommandResult cmd_pipeline_file(const std::string& path, const RunConfig& cfg);

CommandResult cmd_moment(const Json& input, const RunConfig& cfg);
CommandResult cmd_weights(const Json& input, const RunConfig& cfg);
CommandResult cmd_stability(const Json& input, int samples, const RunConfig& cfg);
CommandResult cmd_em(const std::string& action, const Json* input, int n, int genus, int ell, const RunConfig& cfg);
CommandResult cmd_gm(const std::string& action, const Json* input, int n, int genus, int ell, std::int64_t delta0,
                     const RunConfig& cfg);
CommandResult cmd_correspond(const Json& input, const RunConfig& cfg);
CommandResult cmd_normal_form(const Json& input, const RunConfig& cfg);
CommandResult cmd_hecke(const Json& input, int point, const RunConfig& cfg);
CommandResult cmd_gpb(const std::string& action, const Json& input, const RunConfig& cfg);

FramedEncoding encoding_from_json(const Json& j, const Tolerance& tol = {});
ParabolicData parabolic_from_json(const Json& j, const std::string& where = "parabolic");

}  // namespace gfb::cli
