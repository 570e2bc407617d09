#pragma once

#include "gfb/correspondence.hpp"
#include "gfb/extended_moduli.hpp"
#include "gfb/framed_bundle.hpp"
#include "gfb/gpb.hpp"
#include "gfb/rational.hpp"

#include <json.hpp>

#include <string>

namespace gfb {

using Json = nlohmann::ordered_json;

// Matrices: {rows, cols, data: [[re, im], ...]} row-major. Real-only data may use plain numbers.
Json to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j, const std::string& where = "matrix");

Json rational_to_json(const Rational& r);  // {num, den}
Rational rational_from_json(const Json& j, const std::string& where = "rational");

Json to_json(const Plane& g);  // {m, n, k, basis}
Plane plane_from_json(const Json& j, const Tolerance& tol = {}, const std::string& where = "plane");

// Accepts {m, n, basis}, {gamma} (graph) or {b_star, d_star} (annihilator rows).
Plane plane_from_any_json(const Json& j, const Tolerance& tol = {}, const std::string& where = "plane");

Json to_json(const ParabolicData& p);
EMPoint em_point_from_json(const Json& j, const std::string& where = "em_point");
Json to_json(const EMPoint& pt);

// {n, genus, ell, delta0, A, B, C, delta, planes: [{b_star, d_star}]}
Json to_json(const GMPoint& pt);
GMPoint gm_point_from_json(const Json& j, const Tolerance& tol = {});

// {genus, n, delta0, ell, planes: [...], split_type?: [...]}; planes as {b_star, d_star} or {basis}.
FramedBundleModel framed_model_from_json(const Json& j, const Tolerance& tol = {});
Json to_json(const FramedBundleModel& model);

GPBundle gpb_from_json(const Json& j, const Tolerance& tol = {});

// Parses text, reporting failures as ParseError "<source>:<line>:<column>: message".
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

// 12 significant digits.
std::string format_double(double x);

}  // namespace gfb
