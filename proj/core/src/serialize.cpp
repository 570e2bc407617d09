#include "gfb/serialize.hpp"

#include "gfb/errors.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace gfb {

namespace {

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key))
    fail(ErrorKind::ParseError, where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::ParseError, where + "." + key + ": " + e.what());
  }
}

std::vector<CMatrix> matrices(const Json& j, const char* key, const std::string& where) {
  std::vector<CMatrix> out;
  if (!j.contains(key)) return out;
  const Json& arr = j.at(key);
  if (!arr.is_array()) fail(ErrorKind::ParseError, where + "." + key + " must be an array");
  for (std::size_t i = 0; i < arr.size(); ++i)
    out.push_back(matrix_from_json(arr[i], where + "." + key + "[" + std::to_string(i) + "]"));
  return out;
}

Json matrix_list(const std::vector<CMatrix>& v) {
  Json arr = Json::array();
  for (const auto& m : v) arr.push_back(to_json(m));
  return arr;
}

Plane plane_entry(const Json& j, int m, int n, const Tolerance& tol, const std::string& where) {
  const Plane g = plane_from_any_json(j, tol, where);
  if (g.m() != m || g.n() != n) fail(ErrorKind::ParseError, where + ": plane has the wrong ambient split");
  return g;
}

}  // namespace

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const Json& j, const std::string& where) {
  const auto rows = get_as<Eigen::Index>(j, "rows", where);
  const auto cols = get_as<Eigen::Index>(j, "cols", where);
  const Json& data = field(j, "data", where);
  if (rows < 0 || cols < 0 || !data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    fail(ErrorKind::ParseError, where + ": data must hold rows*cols entries");
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    const Json& e = data[static_cast<std::size_t>(i)];
    cd v;
    if (e.is_number()) v = cd(e.get<double>(), 0.0);
    else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
      v = cd(e[0].get<double>(), e[1].get<double>());
    else fail(ErrorKind::ParseError, where + ": entry " + std::to_string(i) + " must be a number or [re, im]");
    m(i / cols, i % cols) = v;
  }
  return m;
}

Json rational_to_json(const Rational& r) {
  return Json{{"num", numerator(r).str()}, {"den", denominator(r).str()}};
}

Rational rational_from_json(const Json& j, const std::string& where) {
  auto part = [&](const char* key) -> BigInt {
    const Json& v = field(j, key, where);
    if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
    if (v.is_string()) {
      try {
        return BigInt(v.get<std::string>());
      } catch (const std::exception&) {
      }
    }
    fail(ErrorKind::ParseError, where + "." + key + " must be an integer");
  };
  const BigInt den = part("den");
  if (den == 0) fail(ErrorKind::ParseError, where + ": zero denominator");
  return Rational(part("num"), den);
}

Json to_json(const Plane& g) {
  return Json{{"m", g.m()}, {"n", g.n()}, {"k", g.k()}, {"basis", to_json(g.basis())}};
}

Plane plane_from_json(const Json& j, const Tolerance& tol, const std::string& where) {
  const int m = get_as<int>(j, "m", where);
  const int n = get_as<int>(j, "n", where);
  const CMatrix basis = matrix_from_json(field(j, "basis", where), where + ".basis");
  if (basis.rows() != m + n) fail(ErrorKind::ParseError, where + ": basis has the wrong number of rows");
  return Plane::from_span(m, n, basis, tol);
}

Plane plane_from_any_json(const Json& j, const Tolerance& tol, const std::string& where) {
  if (j.contains("gamma")) return plane_from_graph(matrix_from_json(j.at("gamma"), where + ".gamma"));
  if (j.contains("b_star")) {
    const CMatrix b = matrix_from_json(j.at("b_star"), where + ".b_star");
    const CMatrix d = matrix_from_json(field(j, "d_star", where), where + ".d_star");
    if (b.rows() != d.rows()) fail(ErrorKind::ParseError, where + ": b_star and d_star row counts differ");
    return plane_from_annihilator(b, d, tol);
  }
  return plane_from_json(j, tol, where);
}

Json to_json(const ParabolicData& p) {
  Json flags = Json::array(), weights = Json::array();
  for (const auto& pt : p.points) {
    flags.push_back(matrix_list(pt.flag));
    Json w = Json::array();
    for (const auto& r : pt.weights) w.push_back(rational_to_json(r));
    weights.push_back(w);
  }
  return Json{{"n", p.n}, {"flags", flags}, {"weights", weights}};
}

Json to_json(const EMPoint& pt) {
  return Json{{"n", pt.n},
              {"genus", pt.genus},
              {"ell", pt.ell()},
              {"A", matrix_list(pt.A)},
              {"B", matrix_list(pt.B)},
              {"C", matrix_list(pt.C)},
              {"delta", matrix_list(pt.delta)}};
}

Json to_json(const GMPoint& pt) {
  Json j = to_json(pt.em);
  j["delta0"] = pt.delta0;
  Json planes = Json::array();
  for (const auto& g : pt.planes) {
    const CMatrix rows = annihilator_rows(g);
    planes.push_back(Json{{"b_star", to_json(CMatrix(rows.leftCols(g.m())))},
                          {"d_star", to_json(CMatrix(rows.rightCols(g.n())))}});
  }
  j["planes"] = planes;
  return j;
}

EMPoint em_point_from_json(const Json& j, const std::string& where) {
  EMPoint pt;
  pt.n = get_as<int>(j, "n", where);
  pt.genus = get_as<int>(j, "genus", where);
  const int ell = get_as<int>(j, "ell", where);
  pt.A = matrices(j, "A", where);
  pt.B = matrices(j, "B", where);
  pt.C = matrices(j, "C", where);
  pt.delta = matrices(j, "delta", where);
  if (static_cast<int>(pt.C.size()) != ell) fail(ErrorKind::ParseError, where + ": C must have ell entries");
  return pt;
}

GMPoint gm_point_from_json(const Json& j, const Tolerance& tol) {
  const std::string where = "gm_point";
  GMPoint pt;
  pt.em = em_point_from_json(j, where);
  const int ell = pt.em.ell();
  pt.delta0 = get_as<std::int64_t>(j, "delta0", where);
  const Json& planes = field(j, "planes", where);
  if (!planes.is_array() || static_cast<int>(planes.size()) != ell)
    fail(ErrorKind::ParseError, where + ": planes must have ell entries");
  for (int i = 0; i < ell; ++i)
    pt.planes.push_back(plane_entry(planes[i], pt.em.n, pt.em.n, tol, where + ".planes[" + std::to_string(i) + "]"));
  pt.validate(tol);
  return pt;
}

FramedBundleModel framed_model_from_json(const Json& j, const Tolerance& tol) {
  const std::string where = "framed_model";
  FramedBundleModel m;
  m.genus = get_as<int>(j, "genus", where);
  m.n = get_as<int>(j, "n", where);
  m.delta0 = get_as<std::int64_t>(j, "delta0", where);
  m.ell = get_as<int>(j, "ell", where);
  const Json& planes = field(j, "planes", where);
  if (!planes.is_array() || static_cast<int>(planes.size()) != m.ell)
    fail(ErrorKind::ParseError, where + ": planes must have ell entries");
  for (int i = 0; i < m.ell; ++i)
    m.g.push_back(plane_entry(planes[i], m.n, m.n, tol, where + ".planes[" + std::to_string(i) + "]"));
  if (j.contains("split_type")) m.split_type = get_as<std::vector<int>>(j, "split_type", where);
  m.validate(tol);
  return m;
}

Json to_json(const FramedBundleModel& model) {
  Json planes = Json::array();
  for (const auto& g : model.g) planes.push_back(to_json(g));
  Json j{{"genus", model.genus}, {"n", model.n}, {"delta0", model.delta0}, {"ell", model.ell}, {"planes", planes}};
  if (model.split_type) j["split_type"] = *model.split_type;
  return j;
}

GPBundle gpb_from_json(const Json& j, const Tolerance& tol) {
  const std::string where = "gpb";
  GPBundle b;
  b.genus = get_as<int>(j, "genus", where);
  b.n = get_as<int>(j, "n", where);
  b.delta0 = get_as<std::int64_t>(j, "delta0", where);
  const Json& planes = field(j, "planes", where);
  if (!planes.is_array()) fail(ErrorKind::ParseError, where + ".planes must be an array");
  for (std::size_t i = 0; i < planes.size(); ++i)
    b.planes.push_back(plane_entry(planes[i], b.n, b.n, tol, where + ".planes[" + std::to_string(i) + "]"));
  b.validate(tol);
  return b;
}

Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte, text.size());
    for (std::size_t i = 0; i + 1 < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::ParseError, fmt::format("{}:{}:{}: {}", source, line, col, e.what()));
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ParseError, path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

std::string format_double(double x) { return fmt::format("{:.12g}", x); }

}  // namespace gfb
