#include "support/generators.hpp"

#include "gfb_cli/commands.hpp"

#include <gfb/errors.hpp>

#include <gtest/gtest.h>

#include <numeric>

namespace gfb::cli {
namespace {

using namespace gfb::testing;

RunConfig seeded(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  return cfg;
}

TEST(Records, FlatPathsAndScalars) {
  const Json report = Json{{"command", "x"}, {"a", {{"b", 0.5}, {"c", Json::array({1, 2})}}}, {"d", Json::array({Json{{"e", true}}})}};
  EXPECT_EQ(render_records(report), "command = x\na.b = 0.5\na.c = [1, 2]\nd[0].e = true\n");
}

TEST(Config, RandomizedCommandsNeedASeed) {
  RunConfig cfg;
  EXPECT_THROW(cfg.require_seed("gm random"), Error);
  cfg.seed = 3;
  EXPECT_EQ(cfg.require_seed("gm random"), 3u);
}

TEST(Examples, LineBundlesThreePoints) {
  const LineBundleReport one = example_line_bundles(3, 1);
  EXPECT_EQ(one.max_sum_s, 0);
  EXPECT_EQ(one.max_sum_t, 2);
  EXPECT_EQ(one.quotient_dimension, 2);
  EXPECT_TRUE(one.cstar_agrees);
  const LineBundleReport zero = example_line_bundles(3, 0);
  EXPECT_EQ(zero.max_sum_s, 1);
  EXPECT_EQ(zero.max_sum_t, 1);
  EXPECT_TRUE(zero.cstar_agrees);
  // Independent count: 27 patterns (each point generic, fiber or framing).
  EXPECT_EQ(zero.patterns.size(), 27u);
  int feasible = 0;
  for (const auto& p : zero.patterns) {
    const int ss = std::accumulate(p.s.begin(), p.s.end(), 0);
    const int st = std::accumulate(p.t.begin(), p.t.end(), 0);
    EXPECT_EQ(p.feasible, ss <= 1 && st <= 1);
    feasible += p.feasible;
  }
  // s and t patterns with at most one special point each, disjoint: 1 + 3 + 3 + 6.
  EXPECT_EQ(feasible, 13);
}

TEST(Examples, OnePointFiberDimension) {
  for (int n : {1, 3, 5}) {
    const OnePointReport r = example_one_point(n, -(n - 1) / 2);
    EXPECT_EQ(r.max_t, 0) << "n=" << n;
    EXPECT_EQ(r.fiber_dimension, n * n - 1) << "n=" << n;
  }
}

TEST(Examples, Genus0ChartRank) {
  const Genus0Report r = example_genus0(2, 7);
  EXPECT_EQ(r.chart_rank, 8);
  EXPECT_LT(r.moment_residual, 1e-9);
  EXPECT_LT(r.normalize_residual, 1e-9);
}

TEST(Commands, MomentOfAGraph) {
  const Json input = Json::parse(R"({"gamma": {"rows": 1, "cols": 1, "data": [1]}})");
  const CommandResult r = cmd_moment(input, RunConfig{});
  EXPECT_TRUE(r.residuals_ok);
  EXPECT_EQ(r.report.at("s"), 0);
  EXPECT_EQ(r.report.at("t"), 0);
  // γ = 1: b b* = 1/2, so the right moment vanishes.
  EXPECT_NEAR(r.report.at("right_spectrum")[0].get<double>(), 0.0, 1e-12);
}

TEST(Commands, GMRandomIsSeededAndConsistent) {
  const CommandResult a = cmd_gm("random", nullptr, 2, 1, 2, 0, seeded(9));
  const CommandResult b = cmd_gm("random", nullptr, 2, 1, 2, 0, seeded(9));
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_TRUE(a.residuals_ok);
  EXPECT_LT(a.report.at("relation_residual").get<double>(), 1e-10);
  EXPECT_THROW(cmd_gm("random", nullptr, 2, 1, 2, 0, RunConfig{}), Error);
  EXPECT_THROW(cmd_gm("bogus", nullptr, 2, 1, 2, 0, seeded(1)), Error);
}

TEST(Commands, NormalFormFromJson) {
  Rng rng(71);
  const LevelPair lp = random_level_pair(rng, 3);
  const Json input{{"plane", to_json(lp.plane)}, {"delta", to_json(lp.delta)}};
  const CommandResult r = cmd_normal_form(Json::parse(input.dump()), RunConfig{});
  EXPECT_TRUE(r.residuals_ok);
  EXPECT_EQ(r.report.at("s"), lp.s);
  EXPECT_EQ(r.report.at("t"), lp.t);
}

TEST(Commands, StabilityFlagsTheSplitCounterexample) {
  // Genus 0, O(1) ⊕ O(−1), two points with g = span{(e₂, 0), (0, e₁)}.
  const Json plane = Json{{"m", 2}, {"n", 2}, {"basis", Json{{"rows", 4}, {"cols", 2}, {"data", {0, 0, 1, 0, 0, 1, 0, 0}}}}};
  const Json input{{"genus", 0},   {"n", 2},      {"delta0", 0},
                   {"ell", 2},     {"planes", {plane, plane}}, {"split_type", {1, -1}}};
  const CommandResult r = cmd_stability(input, 4, seeded(3));
  EXPECT_EQ(r.report.at("verdict"), "Unstable");
  EXPECT_TRUE(r.unstable);
  RunConfig lenient = seeded(3);
  EXPECT_FALSE(r.ok(seeded(3)));
  lenient.allow_unstable = true;
  EXPECT_TRUE(r.ok(lenient));
}

TEST(Commands, MalformedInputIsAParseError) {
  const Json input = Json::parse(R"({"plane": {"m": 1}})");
  try {
    cmd_normal_form(input, RunConfig{});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  }
}

}  // namespace
}  // namespace gfb::cli
