#include "gfb_cli/commands.hpp"

#include <gfb/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>

namespace gfb::cli {

namespace {

Json rational_json(const Rational& r) { return to_string(r); }

Json verdict_json(Verdict v) { return to_string(v); }

Json int_list(const std::vector<int>& v) { return Json(v); }

Json real_list(const RVector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

std::vector<CMatrix> matrix_array(const Json& j, const char* key, const std::string& where) {
  std::vector<CMatrix> out;
  if (!j.contains(key)) return out;
  const Json& arr = j.at(key);
  if (!arr.is_array()) fail(ErrorKind::ParseError, where + "." + key + " must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(matrix_from_json(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

const Json& need(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T need_as(const Json& j, const char* key, const std::string& where) {
  try {
    return need(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, where + "." + key + ": " + e.what());
  }
}

std::vector<SubbundleWitness> witnesses_from_json(const Json& j) {
  std::vector<SubbundleWitness> out;
  if (!j.contains("witnesses")) return out;
  const Json& arr = j.at("witnesses");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "witnesses[" + std::to_string(i) + "]";
    out.push_back({need_as<int>(arr[i], "n_prime", where), need_as<std::int64_t>(arr[i], "delta0_prime", where),
                   matrix_array(arr[i], "fibers", where)});
  }
  return out;
}

void walk(const Json& j, const std::string& path, std::string& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) walk(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    const bool scalars = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (scalars) {
      std::string line = "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) line += ", ";
        line += j[i].is_number_float() ? format_double(j[i].get<double>())
                : j[i].is_string()      ? j[i].get<std::string>()
                                        : j[i].dump();
      }
      out += path + " = " + line + "]\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) walk(j[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  std::string v;
  if (j.is_number_float()) v = format_double(j.get<double>());
  else if (j.is_string()) v = j.get<std::string>();
  else v = j.dump();
  out += path + " = " + v + "\n";
}

// Interior points where the framed data decide stability: flags, weights, transferred planes.
struct PointModels {
  std::vector<LocalModel> models;
  ParabolicData parabolic;
};

PointModels local_models(const GMPoint& pt, const Tolerance& tol) {
  PointModels pm;
  pm.parabolic.n = pt.em.n;
  for (int i = 0; i < pt.em.ell(); ++i) {
    pm.models.push_back(local_model(pt.planes[i], pt.em.delta[i], tol));
    pm.parabolic.points.push_back(pm.models.back().parabolic);
  }
  return pm;
}

Json local_model_json(const LocalModel& lm, const Tolerance& tol) {
  Json w = Json::array();
  for (const auto& r : lm.parabolic.weights) w.push_back(rational_json(r));
  const IntersectionDims d = intersection_dims(lm.plane, tol);
  return Json{{"framing_eigenvalues", real_list(lm.weights)},
              {"weights", w},
              {"flag_jumps", int_list(flag_jumps(lm.parabolic.flag, tol))},
              {"s", d.s},
              {"t", d.t},
              {"plane", to_json(lm.plane)}};
}

}  // namespace

std::uint64_t RunConfig::require_seed(const char* command) const {
  if (!seed) fail(ErrorKind::ParseError, std::string(command) + ": --seed is required for randomized commands");
  return *seed;
}

std::string render_records(const Json& report) {
  std::string out;
  walk(report, "", out);
  return out;
}

LineBundleReport example_line_bundles(int ell, std::int64_t delta0) {
  if (ell < 1 || ell > 12) fail(ErrorKind::InvalidMatrix, "line-bundle example needs 1 <= ell <= 12");
  LineBundleReport r;
  r.ell = ell;
  r.delta0 = delta0;
  int best_dim = -1;
  // Each point is a line in C ⊕ C: generic (0,0), the fiber (1,0) or the framing (0,1).
  std::vector<int> state(ell, 0);
  while (true) {
    LineBundlePattern p;
    p.s.resize(ell);
    p.t.resize(ell);
    int ss = 0, tt = 0;
    for (int i = 0; i < ell; ++i) {
      p.s[i] = state[i] == 1;
      p.t[i] = state[i] == 2;
      ss += p.s[i];
      tt += p.t[i];
      p.dimension += 1 - p.s[i] - p.t[i];
    }
    p.feasible = 2 * ss <= ell - 2 * delta0 && 2 * tt <= ell + 2 * delta0;
    p.cstar = cstar_classify(1, ell, delta0, p.s, p.t).verdict;
    r.cstar_agrees = r.cstar_agrees && ((p.cstar != Verdict::Unstable) == p.feasible);
    if (p.feasible) {
      r.max_sum_s = std::max(r.max_sum_s, ss);
      r.max_sum_t = std::max(r.max_sum_t, tt);
      best_dim = std::max(best_dim, p.dimension);
    }
    r.patterns.push_back(std::move(p));
    int k = 0;
    while (k < ell && state[k] == 2) state[k++] = 0;
    if (k == ell) break;
    ++state[k];
  }
  r.quotient_dimension = best_dim - 1;
  return r;
}

CommandResult cmd_example_line_bundles(int ell, std::int64_t delta0) {
  const LineBundleReport r = example_line_bundles(ell, delta0);
  CommandResult res;
  Json feasible = Json::array();
  for (const auto& p : r.patterns)
    if (p.feasible) feasible.push_back(Json{{"s", p.s}, {"t", p.t}, {"dimension", p.dimension}, {"cstar", verdict_json(p.cstar)}});
  res.report = Json{{"command", "example line-bundles"},
                    {"n", 1},
                    {"ell", ell},
                    {"delta0", delta0},
                    {"patterns_total", r.patterns.size()},
                    {"feasible", feasible},
                    {"max_sum_s", r.max_sum_s},
                    {"max_sum_t", r.max_sum_t},
                    {"quotient_dimension", r.quotient_dimension},
                    {"cstar_agrees", r.cstar_agrees}};
  res.residuals_ok = r.cstar_agrees;
  return res;
}

int chart_rank(const CMatrix& gamma2, double step, const Tolerance& tol) {
  const Eigen::Index n = gamma2.rows();
  const Eigen::Index dim = 2 * n * n;
  Eigen::MatrixXd J(dim, dim);
  auto flatten = [&](const CMatrix& m) {
    Eigen::VectorXd v(dim);
    for (Eigen::Index i = 0; i < n * n; ++i) {
      v(2 * i) = m(i % n, i / n).real();
      v(2 * i + 1) = m(i % n, i / n).imag();
    }
    return v;
  };
  for (Eigen::Index c = 0; c < dim; ++c) {
    CMatrix e = CMatrix::Zero(n, n);
    const Eigen::Index i = c / 2;
    e(i % n, i / n) = (c % 2 == 0) ? cd(step, 0.0) : cd(0.0, step);
    J.col(c) = (flatten(two_point_chart(gamma2 + e, tol)) - flatten(two_point_chart(gamma2 - e, tol))) / (2.0 * step);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const Eigen::VectorXd sv = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-6 * sv(0)) ++r;
  return r;
}

Genus0Report example_genus0(int n, std::uint64_t seed, const Tolerance& tol) {
  if (n < 1 || n > 6) fail(ErrorKind::InvalidMatrix, "genus-0 example needs 1 <= n <= 6");
  Rng rng(seed);
  const CMatrix gamma2 = random_gaussian(n, n, rng);
  const TwoPointNormalization nz = genus0_two_point_normalize(gamma2, tol);
  Genus0Report r;
  r.n = n;
  r.normalize_residual = nz.residual;
  r.moment_residual = (moment_right_graph(nz.gamma1) + moment_right_graph(gamma2)).norm();
  r.chart_rank = chart_rank(gamma2, 1e-5, tol);
  r.expected_rank = 2 * n * n;
  return r;
}

CommandResult cmd_example_genus0(int n, std::uint64_t seed, const Tolerance& tol) {
  const Genus0Report r = example_genus0(n, seed, tol);
  CommandResult res;
  res.report = Json{{"command", "example genus0"},
                    {"n", n},
                    {"seed", seed},
                    {"normalize_residual", r.normalize_residual},
                    {"moment_residual", r.moment_residual},
                    {"chart_rank", r.chart_rank},
                    {"expected_rank", r.expected_rank}};
  res.residuals_ok = r.normalize_residual <= tol.residual_abs && r.moment_residual <= tol.residual_abs &&
                     r.chart_rank == r.expected_rank;
  return res;
}

OnePointReport example_one_point(int n, std::int64_t delta0) {
  if (n < 1) fail(ErrorKind::InvalidMatrix, "one-point example needs n >= 1");
  if (2 * std::abs(delta0) > n - 1) fail(ErrorKind::ParameterSingular, "one-point example needs |delta0| <= (n-1)/2");
  OnePointReport r;
  r.n = n;
  r.delta0 = delta0;
  int best = -1;
  for (int s = 0; s <= n; ++s)
    for (int t = 0; s + t <= n; ++t) {
      if (2 * s > n - 2 * delta0 || 2 * t > n + 2 * delta0) continue;
      r.feasible.emplace_back(s, t);
      r.max_s = std::max(r.max_s, s);
      r.max_t = std::max(r.max_t, t);
      best = std::max(best, n * n - s * s - t * t);
    }
  r.fiber_dimension = best - 1;
  return r;
}

CommandResult cmd_example_one_point(int n, std::int64_t delta0) {
  const OnePointReport r = example_one_point(n, delta0);
  CommandResult res;
  Json feasible = Json::array();
  for (const auto& [s, t] : r.feasible) feasible.push_back(Json::array({s, t}));
  res.report = Json{{"command", "example one-point"},
                    {"n", n},
                    {"delta0", delta0},
                    {"feasible_s_t", feasible},
                    {"max_s", r.max_s},
                    {"max_t", r.max_t},
                    {"fiber_dimension", r.fiber_dimension}};
  return res;
}

CommandResult cmd_pipeline(const GMPoint& pt, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  pt.validate(tol);
  CommandResult res;
  const double rel = relation_residual(pt.em);
  const double lvl = gm_level_residual(pt, tol);
  const TraceReport tr = trace_checks(pt, pt.delta0, tol);
  const SmoothnessFlags sm = smoothness_hypotheses(pt, tol);
  const PointModels pm = local_models(pt, tol);

  std::vector<std::vector<int>> jumps;
  std::vector<std::vector<Rational>> weights;
  Json points = Json::array();
  for (const auto& lm : pm.models) {
    jumps.push_back(flag_jumps(lm.parabolic.flag, tol));
    weights.push_back(lm.parabolic.weights);
    points.push_back(local_model_json(lm, tol));
  }
  const Rational pdeg = pardeg(pt.delta0, pt.em.n, jumps, weights);

  FramedBundleModel model;
  model.genus = pt.em.genus;
  model.n = pt.em.n;
  model.delta0 = pt.delta0;
  model.ell = pt.em.ell();
  for (const auto& lm : pm.models) model.g.push_back(lm.plane);
  const StabilityResult st = check_semistable(model, {}, tol);
  const ParabolicResult par = parabolic_verdict(model.n, model.delta0, jumps, {}, weights);

  res.report = Json{{"command", "pipeline"},
                    {"n", pt.em.n},
                    {"genus", pt.em.genus},
                    {"ell", pt.em.ell()},
                    {"delta0", pt.delta0},
                    {"relation_residual", rel},
                    {"level_residual", lvl},
                    {"trace",
                     {{"sum", tr.trace_sum},
                      {"integral", tr.integral},
                      {"matches_degree", tr.matches_degree},
                      {"shifted_identity", tr.shifted_identity},
                      {"s_bound", tr.s_bound},
                      {"t_bound", tr.t_bound}}},
                    {"smoothness",
                     {{"interior_point", sm.interior_point},
                      {"non_boundary", sm.non_boundary},
                      {"irreducible", sm.irreducible},
                      {"algebra_dim", sm.algebra_dim}}},
                    {"points", points},
                    {"pardeg", to_double(pdeg)},
                    {"parabolic_verdict", verdict_json(par.verdict)},
                    {"framed_verdict", verdict_json(st.verdict)},
                    {"s_margin", rational_json(st.s_margin)},
                    {"t_margin", rational_json(st.t_margin)},
                    {"witnesses_checked", 0},
                    {"certificate_incomplete", model.n > 1}};
  res.residuals_ok = rel <= std::max(tol.residual_abs, 1e-10) && lvl <= std::max(tol.residual_abs, 1e-10) &&
                     tr.integral && tr.matches_degree && std::abs(to_double(pdeg)) <= 1e-6;
  res.unstable = st.verdict == Verdict::Unstable;
  return res;
}

CommandResult cmd_pipeline_file(const std::string& path, const RunConfig& cfg) {
  return cmd_pipeline(gm_point_from_json(read_json_file(path), cfg.tol), cfg);
}

CommandResult cmd_moment(const Json& input, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const Plane g = plane_from_any_json(input, tol);
  CommandResult res;
  const CMatrix mr = moment_right(g, tol);
  const CMatrix ml = moment_left(g, tol);
  const IntersectionDims d = intersection_dims(g, tol);
  res.report = Json{{"command", "moment"},
                    {"m", g.m()},
                    {"n", g.n()},
                    {"s", d.s},
                    {"t", d.t},
                    {"moment_right", to_json(mr)},
                    {"moment_left", to_json(ml)},
                    {"right_spectrum", real_list(eigenvalues_desc(cd(0.0, -1.0) * mr))},
                    {"left_spectrum", real_list(eigenvalues_desc(cd(0.0, -1.0) * ml))}};
  if (is_graph(g, tol)) {
    const CMatrix gamma = graph_map(g, tol);
    const double agree = std::max((moment_right_graph(gamma) - mr).norm(), (moment_left_graph(gamma) - ml).norm());
    res.report["graph_agreement"] = agree;
    res.residuals_ok = agree <= std::max(tol.residual_abs, 1e-10);
  }
  return res;
}

FramedEncoding encoding_from_json(const Json& j, const Tolerance& tol) {
  const std::string where = "encoding";
  FramedEncoding enc;
  enc.p = need_as<int>(j, "p", where);
  enc.n = need_as<int>(j, "n", where);
  enc.ell = need_as<int>(j, "ell", where);
  enc.delta0 = need_as<std::int64_t>(j, "delta0", where);
  enc.genus = j.value("genus", 0);
  enc.k = j.value("k", std::int64_t{10000});
  enc.ev = matrix_array(j, "ev", where);
  const Json& betas = need(j, "beta", where);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const std::string w = where + ".beta[" + std::to_string(i) + "]";
    if (betas[i].contains("rows")) enc.beta.push_back(beta_from_rows(enc.p, matrix_from_json(betas[i].at("rows"), w), tol));
    else enc.beta.push_back(plane_from_any_json(betas[i], tol, w));
  }
  enc.validate(tol);
  return enc;
}

CommandResult cmd_weights(const Json& input, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const FramedEncoding enc = encoding_from_json(need(input, "encoding", "input"), tol);
  CommandResult res;
  Json out = Json::array();
  const Json& wits = need(input, "witnesses", "input");
  for (std::size_t i = 0; i < wits.size(); ++i) {
    const std::string where = "witnesses[" + std::to_string(i) + "]";
    const SubspaceWitness w{matrix_from_json(need(wits[i], "W", where), where + ".W"), need_as<int>(wits[i], "n_prime", where),
                            need_as<std::int64_t>(wits[i], "delta0_prime", where)};
    const WeightReport r = w_report(enc, w, tol);
    const Contribution c = classify_k_stability(r);
    Json counts = Json::array();
    for (const auto& e : r.counts) counts.push_back(Json{{"s", e.s}, {"t", e.t}, {"r", e.r}, {"m", e.m}});
    out.push_back(Json{{"w_alpha", r.w_alpha},
                       {"w_beta", r.w_beta},
                       {"eta", rational_json(r.eta)},
                       {"w_W", rational_json(r.w_W)},
                       {"w_W_k", rational_json(r.w_W_k)},
                       {"w_W_inf", rational_json(r.w_W_inf)},
                       {"w_W_A", rational_json(r.w_W_A)},
                       {"counts", counts},
                       {"contribution", to_string(c)}});
    res.unstable = res.unstable || c == Contribution::Violating;
  }
  res.report = Json{{"command", "weights"}, {"k", enc.k}, {"witnesses", out}};
  return res;
}

CommandResult cmd_stability(const Json& input, int samples, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  const FramedBundleModel model = framed_model_from_json(input, tol);
  std::vector<SubbundleWitness> wits = witnesses_from_json(input);
  bool enumerated = false;
  if (wits.empty() && model.genus == 0 && model.split_type && model.n > 1) {
    wits = enumerate_witnesses_genus0(model, samples, cfg.require_seed("stability"), tol);
    enumerated = true;
  }
  const StabilityResult st = check_semistable(model, wits, tol);
  const StabilityResult ps = pseudo_semistable(model, wits, tol);
  std::vector<int> s, t;
  for (const auto& g : model.g) {
    const IntersectionDims d = intersection_dims(g, tol);
    s.push_back(d.s);
    t.push_back(d.t);
  }
  CommandResult res;
  res.report = Json{{"command", "stability"},
                    {"s", s},
                    {"t", t},
                    {"witnesses", wits.size()},
                    {"enumerated", enumerated},
                    {"verdict", verdict_json(st.verdict)},
                    {"pseudo_verdict", verdict_json(ps.verdict)},
                    {"s_margin", rational_json(st.s_margin)},
                    {"t_margin", rational_json(st.t_margin)},
                    {"incomplete", st.incomplete}};
  if (st.violating_witness) res.report["violating_witness"] = *st.violating_witness;
  if (degree_admissible(model.n, model.ell, model.delta0) && model.ell * model.n - 2 * model.delta0 > 0) {
    const CStarReport c = cstar_classify(model.n, model.ell, model.delta0, s, t);
    res.report["cstar"] = Json{{"verdict", verdict_json(c.verdict)},
                               {"gamma", rational_json(c.gamma)},
                               {"mu", rational_json(c.mu)},
                               {"inf_first", rational_json(c.inf_first)},
                               {"inf_second", rational_json(c.inf_second)}};
  }
  res.unstable = st.verdict == Verdict::Unstable;
  return res;
}

CommandResult cmd_em(const std::string& action, const Json* input, int n, int genus, int ell, const RunConfig& cfg) {
  CommandResult res;
  EMPoint pt;
  std::int64_t delta0 = 0;
  if (action == "random") {
    const RandomEM r = random_em_point(n, genus, ell, cfg.require_seed("em random"), cfg.tol);
    pt = r.point;
    delta0 = r.delta0;
  } else {
    if (!input) fail(ErrorKind::ParseError, "em " + action + " needs an input file");
    pt = em_point_from_json(*input);
    if (action == "solve") pt = solve_delta1(std::move(pt), cfg.tol);
    else if (action != "residual") fail(ErrorKind::ParseError, "unknown em action '" + action + "'");
    pt.validate(cfg.tol);
    double tr = 0.0;
    for (const auto& d : pt.delta) tr += d.trace().real();
    delta0 = -static_cast<std::int64_t>(std::llround(tr));
  }
  const double rel = relation_residual(pt);
  res.report = Json{{"command", "em " + action}, {"relation_residual", rel}, {"delta0", delta0}, {"point", to_json(pt)}};
  res.residuals_ok = rel <= std::max(cfg.tol.residual_abs, 1e-10);
  return res;
}

CommandResult cmd_gm(const std::string& action, const Json* input, int n, int genus, int ell, std::int64_t delta0,
                     const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  GMPoint pt;
  if (action == "random") pt = random_gm_point(n, genus, ell, delta0, cfg.require_seed("gm random"), tol);
  else if (action == "check") {
    if (!input) fail(ErrorKind::ParseError, "gm check needs an input file");
    pt = gm_point_from_json(*input, tol);
  } else {
    fail(ErrorKind::ParseError, "unknown gm action '" + action + "'");
  }
  CommandResult res;
  const double rel = relation_residual(pt.em);
  const double lvl = gm_level_residual(pt, tol);
  const TraceReport tr = trace_checks(pt, pt.delta0, tol);
  const LevelSetReport ls = level_set_identity(pt, tol);
  const SmoothnessFlags sm = smoothness_hypotheses(pt, tol);
  Json moments = Json::array();
  for (const auto& m : gm_right_moment(pt, tol)) moments.push_back(to_json(m));
  res.report = Json{{"command", "gm " + action},
                    {"relation_residual", rel},
                    {"level_residual", lvl},
                    {"trace_sum", tr.trace_sum},
                    {"trace_integral", tr.integral},
                    {"trace_matches_degree", tr.matches_degree},
                    {"shifted_identity", tr.shifted_identity},
                    {"det_residual", tr.det_residual},
                    {"s", tr.s},
                    {"t", tr.t},
                    {"s_bound", tr.s_bound},
                    {"t_bound", tr.t_bound},
                    {"level_set_identity", ls.holds},
                    {"smoothness",
                     {{"interior_point", sm.interior_point},
                      {"non_boundary", sm.non_boundary},
                      {"irreducible", sm.irreducible},
                      {"algebra_dim", sm.algebra_dim}}},
                    {"right_moment", moments}};
  if (action == "random") res.report["point"] = to_json(pt);
  const double lim = std::max(tol.residual_abs, 1e-10);
  res.residuals_ok = rel <= lim && lvl <= lim && tr.integral && tr.matches_degree && ls.holds;
  return res;
}

CommandResult cmd_correspond(const Json& input, const RunConfig& cfg) {
  const GMPoint pt = gm_point_from_json(input, cfg.tol);
  const PointModels pm = local_models(pt, cfg.tol);
  Json points = Json::array();
  for (const auto& lm : pm.models) points.push_back(local_model_json(lm, cfg.tol));
  std::vector<std::vector<int>> jumps;
  std::vector<std::vector<Rational>> weights;
  for (const auto& p : pm.parabolic.points) {
    jumps.push_back(flag_jumps(p.flag, cfg.tol));
    weights.push_back(p.weights);
  }
  const Rational pd = pardeg(pt.delta0, pt.em.n, jumps, weights);
  CommandResult res;
  res.report = Json{{"command", "correspond"},
                    {"parabolic", to_json(pm.parabolic)},
                    {"points", points},
                    {"pardeg", rational_json(pd)},
                    {"pardeg_float", to_double(pd)}};
  res.residuals_ok = std::abs(to_double(pd)) <= 1e-6;
  return res;
}

CommandResult cmd_normal_form(const Json& input, const RunConfig& cfg) {
  const Plane g = plane_from_any_json(need(input, "plane", "input"), cfg.tol, "input.plane");
  const CMatrix delta = matrix_from_json(need(input, "delta", "input"), "input.delta");
  const NormalFormResult nf = normal_form(g, delta, cfg.tol);
  CommandResult res;
  res.report = Json{{"command", "normal-form"},
                    {"s", nf.s},
                    {"r", nf.r},
                    {"t", nf.t},
                    {"rho_star", to_json(nf.rho_star)},
                    {"M", to_json(nf.M)},
                    {"target_transform", to_json(nf.target)},
                    {"fiber_transform", to_json(nf.fiber)},
                    {"clusters", nf.clusters},
                    {"pattern_residual", nf.pattern_residual},
                    {"m_residual", nf.m_residual}};
  const double lim = std::max(cfg.tol.residual_abs, 1e-8);
  res.residuals_ok = nf.pattern_residual <= lim && nf.m_residual <= lim;
  return res;
}

ParabolicData parabolic_from_json(const Json& j, const std::string& where) {
  ParabolicData p;
  p.n = need_as<int>(j, "n", where);
  const Json& flags = need(j, "flags", where);
  const Json& weights = need(j, "weights", where);
  if (!flags.is_array() || !weights.is_array() || flags.size() != weights.size())
    fail(ErrorKind::ParseError, where + ": flags and weights must be arrays of equal length");
  for (std::size_t i = 0; i < flags.size(); ++i) {
    ParabolicPoint pt;
    const std::string w = where + ".points[" + std::to_string(i) + "]";
    for (std::size_t k = 0; k < flags[i].size(); ++k) pt.flag.push_back(matrix_from_json(flags[i][k], w + ".flag"));
    for (std::size_t k = 0; k < weights[i].size(); ++k) pt.weights.push_back(rational_from_json(weights[i][k], w + ".weight"));
    p.points.push_back(std::move(pt));
  }
  return p;
}

CommandResult cmd_hecke(const Json& input, int point, const RunConfig& cfg) {
  const ParabolicData before = parabolic_from_json(need(input, "parabolic", "input"), "input.parabolic");
  const std::int64_t delta0 = need_as<std::int64_t>(input, "delta0", "input");
  const HeckeResult after = hecke_shift(before, delta0, point, cfg.tol);
  auto total = [&](const ParabolicData& p, std::int64_t d0) {
    std::vector<std::vector<int>> jumps;
    std::vector<std::vector<Rational>> weights;
    for (const auto& pt : p.points) {
      jumps.push_back(flag_jumps(pt.flag, cfg.tol));
      weights.push_back(pt.weights);
    }
    return pardeg(d0, p.n, jumps, weights);
  };
  const Rational pb = total(before, delta0);
  const Rational pa = total(after.parabolic, after.delta0);
  CommandResult res;
  res.report = Json{{"command", "hecke"},
                    {"point", point},
                    {"delta0_before", delta0},
                    {"delta0_after", after.delta0},
                    {"pardeg_before", rational_json(pb)},
                    {"pardeg_after", rational_json(pa)},
                    {"parabolic", to_json(after.parabolic)}};
  res.residuals_ok = pb == pa;
  return res;
}

CommandResult cmd_gpb(const std::string& action, const Json& input, const RunConfig& cfg) {
  const Tolerance& tol = cfg.tol;
  CommandResult res;
  if (action == "compose") {
    const Plane gp = plane_from_any_json(need(input, "gp", "input"), tol, "input.gp");
    const Plane gq = plane_from_any_json(need(input, "gq", "input"), tol, "input.gq");
    const Plane g = compose_planes(gp, gq, tol);
    const PluckerVector direct = normalize_gauge(plucker_of_rows(annihilator_rows(g, tol)));
    const PluckerVector via = normalize_gauge(
        plucker_compose(plucker_of_rows(annihilator_rows(gp, tol)), plucker_of_rows(annihilator_rows(gq, tol)), gp.n()));
    const double dist = projective_distance(direct, via);
    res.report = Json{{"command", "gpb compose"}, {"plane", to_json(g)}, {"plucker_distance", dist}};
    res.residuals_ok = dist <= 1e-8;
  } else if (action == "check") {
    const GPBundle b = gpb_from_json(need(input, "bundle", "input"), tol);
    std::vector<GPBWitness> wits;
    if (input.contains("witnesses"))
      for (std::size_t i = 0; i < input.at("witnesses").size(); ++i) {
        const Json& w = input.at("witnesses")[i];
        const std::string where = "witnesses[" + std::to_string(i) + "]";
        wits.push_back({need_as<int>(w, "n_prime", where), need_as<std::int64_t>(w, "delta0_prime", where),
                        matrix_array(w, "fibers_p", where), matrix_array(w, "fibers_q", where)});
      }
    const GPBResult r = gpb_semistable(b, wits, tol);
    Json chains = Json::array();
    for (const auto& w : wits) {
      const ChainReport c = inequality_chain(b.n, b.ell(), b.delta0, w.n_prime, w.delta0_prime);
      chains.push_back(Json{{"middle", rational_json(c.middle)}, {"right", rational_json(c.right)}, {"holds", c.holds}});
    }
    res.report = Json{{"command", "gpb check"},
                      {"pardeg", rational_json(r.pardeg_E)},
                      {"verdict", verdict_json(r.verdict)},
                      {"degree_bound_ok", degree_bound_ok(b.n, b.ell(), b.delta0)},
                      {"chains", chains}};
    res.unstable = r.verdict == Verdict::Unstable;
  } else if (action == "unitary-compose") {
    const UnitaryComposition u =
        unitary_compose(matrix_from_json(need(input, "bp_star", "input"), "input.bp_star"),
                        matrix_from_json(need(input, "dp_star", "input"), "input.dp_star"),
                        matrix_from_json(need(input, "bq_star", "input"), "input.bq_star"),
                        matrix_from_json(need(input, "dq_star", "input"), "input.dq_star"), tol);
    res.report = Json{{"command", "gpb unitary-compose"},
                      {"rows", to_json(u.rows)},
                      {"D", real_list(u.D)},
                      {"orthonormality_residual", u.orthonormality_residual},
                      {"plane", to_json(u.plane)}};
    res.residuals_ok = u.orthonormality_residual <= std::max(tol.residual_abs, 1e-9);
  } else {
    fail(ErrorKind::ParseError, "unknown gpb action '" + action + "'");
  }
  return res;
}

}  // namespace gfb::cli
