#include "gfb_cli/commands.hpp"

#include <gfb/errors.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace gfb;
using namespace gfb::cli;

int main(int argc, char** argv) {
  CLI::App app{"Grassmannian framed bundle toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::uint64_t seed = 0;
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed for randomized commands");
  app.add_option("--rank-tol", cfg.tol.rank_rel, "relative rank cutoff");
  app.add_option("--residual-tol", cfg.tol.residual_abs, "absolute residual tolerance");
  app.add_option("--json-out", cfg.json_out, "also write the report as JSON");
  app.add_flag("--allow-unstable", cfg.allow_unstable, "exit 0 even when a verdict is Unstable");

  std::string file, action;
  int n = 1, genus = 0, ell = 1, point = 0, samples = 200;
  std::int64_t delta0 = 0;

  auto* moment = app.add_subcommand("moment", "moment maps of a plane");
  moment->add_option("file", file)->required();
  auto* weights = app.add_subcommand("weights", "Hilbert-Mumford weights of witnesses");
  weights->add_option("file", file)->required();
  auto* stability = app.add_subcommand("stability", "framed-bundle semistability");
  stability->add_option("file", file)->required();
  stability->add_option("--samples", samples, "random witnesses per rank");
  auto* em = app.add_subcommand("em", "extended moduli points");
  em->add_option("action", action)->required()->check(CLI::IsMember({"solve", "residual", "random"}));
  em->add_option("file", file);
  auto* gm = app.add_subcommand("gm", "Grassmannian extended moduli points");
  gm->add_option("action", action)->required()->check(CLI::IsMember({"check", "random"}));
  gm->add_option("file", file);
  for (auto* sc : {em, gm}) {
    sc->add_option("--n", n);
    sc->add_option("--genus", genus);
    sc->add_option("--ell", ell);
  }
  gm->add_option("--delta0", delta0);
  auto* correspond = app.add_subcommand("correspond", "parabolic data of a GM point");
  correspond->add_option("file", file)->required();
  auto* nf = app.add_subcommand("normal-form", "block normal form of a plane");
  nf->add_option("file", file)->required();
  auto* hecke = app.add_subcommand("hecke", "Hecke shift of parabolic data");
  hecke->add_option("file", file)->required();
  hecke->add_option("--point", point);
  auto* gpb = app.add_subcommand("gpb", "generalized parabolic bundles");
  gpb->add_option("action", action)->required()->check(CLI::IsMember({"compose", "check", "unitary-compose"}));
  gpb->add_option("file", file)->required();
  auto* example = app.add_subcommand("example", "worked examples");
  example->add_option("name", action)->required()->check(CLI::IsMember({"line-bundles", "genus0", "one-point"}));
  example->add_option("--n", n);
  example->add_option("--ell", ell);
  example->add_option("--delta0", delta0);
  auto* pipeline = app.add_subcommand("pipeline", "GM point to framed verdict");
  pipeline->add_option("file", file)->required();

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) cfg.seed = seed;

  try {
    cfg.tol.validate();
    CommandResult res;
    Json input;
    const bool has_file = !file.empty();
    if (has_file) {
      input = read_json_file(file);
      // Reports from `gm random --json-out` wrap the point.
      if (input.is_object() && input.contains("point") && input.contains("command")) input = Json(input.at("point"));
    }
    if (moment->parsed()) res = cmd_moment(input, cfg);
    else if (weights->parsed()) res = cmd_weights(input, cfg);
    else if (stability->parsed()) res = cmd_stability(input, samples, cfg);
    else if (em->parsed()) res = cmd_em(action, has_file ? &input : nullptr, n, genus, ell, cfg);
    else if (gm->parsed()) res = cmd_gm(action, has_file ? &input : nullptr, n, genus, ell, delta0, cfg);
    else if (correspond->parsed()) res = cmd_correspond(input, cfg);
    else if (nf->parsed()) res = cmd_normal_form(input, cfg);
    else if (hecke->parsed()) res = cmd_hecke(input, point, cfg);
    else if (gpb->parsed()) res = cmd_gpb(action, input, cfg);
    else if (example->parsed()) {
      if (action == "line-bundles") res = cmd_example_line_bundles(ell, delta0);
      else if (action == "genus0") res = cmd_example_genus0(n, cfg.require_seed("example genus0"), cfg.tol);
      else res = cmd_example_one_point(n, delta0);
    } else if (pipeline->parsed()) {
      res = cmd_pipeline(gm_point_from_json(input, cfg.tol), cfg);
    }
    std::cout << render_records(res.report);
    if (!cfg.json_out.empty()) {
      std::ofstream out(cfg.json_out);
      if (!out) fail(ErrorKind::ParseError, cfg.json_out + ": cannot write");
      out << res.report.dump(2) << "\n";
    }
    return res.ok(cfg) ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
