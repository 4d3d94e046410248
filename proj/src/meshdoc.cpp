#include "koko/meshdoc.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace koko {

using nlohmann::json;

namespace {

struct ScalarValue {
  bool exact;
  Rat r;      // valid when exact
  double d;   // always valid
};

ScalarValue parse_scalar(const json& v, const std::string& where)
{
  if (v.is_number_integer()) {
    // integers are exact either way
    long n = v.get<long>();
    return {true, Rat(n), double(n)};
  }
  if (v.is_number()) return {false, Rat(0), v.get<double>()};
  if (v.is_string()) {
    auto r = rat_from_string(v.get<std::string>());
    if (!r) throw ParseError("not a fraction or decimal string: '" + v.get<std::string>() + "'",
                             where);
    return {true, *r, to_double(*r)};
  }
  throw ParseError("expected number or fraction string", where);
}

double require_number(const json& o, const char* key, const std::string& where)
{
  if (!o.contains(key)) throw ParseError(std::string("missing field '") + key + "'", where);
  if (!o[key].is_number()) throw ParseError(std::string("field '") + key + "' must be a number",
                                            where);
  return o[key].get<double>();
}

} // namespace

MeshDocument parse_mesh_document(const std::string& text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  MeshDocument doc;
  doc.exact = true;

  if (!j.contains("quads") || !j["quads"].is_array() || j["quads"].size() != 4)
    throw ParseError("document needs a 'quads' array with exactly 4 entries", "quads");
  if (!j.contains("gaps") || !j["gaps"].is_array() || j["gaps"].size() != 4)
    throw ParseError("document needs a 'gaps' array with exactly 4 entries", "gaps");

  std::array<QuadAngles, 4> angles{};
  bool have_angles_all = true;

  for (int i = 0; i < 4; ++i) {
    const json& q = j["quads"][i];
    const std::string where = "quads[" + std::to_string(i) + "]";
    bool have_angles = q.contains("angles");
    bool have_coeffs = q.contains("coeffs");
    if (!have_angles && !have_coeffs)
      throw ParseError("quad needs 'angles' or 'coeffs'", where);

    Coeffs<double> cf{};
    Coeffs<Rat> cx{};
    bool entry_exact = true;

    QuadAngles qa{};
    if (have_angles) {
      const json& a = q["angles"];
      qa.lambda = require_number(a, "lambda", where + ".angles");
      qa.gamma = require_number(a, "gamma", where + ".angles");
      qa.mu = require_number(a, "mu", where + ".angles");
      qa.delta = require_number(a, "delta", where + ".angles");
      angles[i] = qa;
    } else {
      have_angles_all = false;
    }

    if (have_coeffs) {
      const json& c = q["coeffs"];
      for (const char* key : {"a", "b", "c", "e"})
        if (!c.contains(key))
          throw ParseError(std::string("missing coefficient '") + key + "'", where + ".coeffs");
      ScalarValue a = parse_scalar(c["a"], where + ".coeffs.a");
      ScalarValue b = parse_scalar(c["b"], where + ".coeffs.b");
      ScalarValue cc = parse_scalar(c["c"], where + ".coeffs.c");
      ScalarValue e = parse_scalar(c["e"], where + ".coeffs.e");
      entry_exact = a.exact && b.exact && cc.exact && e.exact;
      cf = {a.d, b.d, cc.d, e.d};
      if (entry_exact) cx = {a.r, b.r, cc.r, e.r};
      if (have_angles) {
        Coeffs<double> from_angles = coeffs_from_angles(qa);
        double err = std::max({std::abs(from_angles.a - cf.a), std::abs(from_angles.b - cf.b),
                               std::abs(from_angles.c - cf.c), std::abs(from_angles.e - cf.e)});
        if (err > 1e-6)
          doc.warnings.push_back(where + ": coefficients differ from angle-derived values by " +
                                 std::to_string(err) + "; coefficients win");
      }
    } else {
      cf = coeffs_from_angles(qa);
      entry_exact = false; // trigonometric data is float territory
    }

    doc.float_mesh.q[i] = cf;
    doc.exact_mesh.q[i] = cx;
    doc.exact = doc.exact && entry_exact;
  }

  for (int i = 0; i < 4; ++i) {
    const json& g = j["gaps"][i];
    const std::string where = "gaps[" + std::to_string(i) + "]";
    if (g.is_string() && g.get<std::string>() == "inf") {
      doc.float_mesh.F[i] = ProjReal<double>::infinity();
      doc.exact_mesh.F[i] = ProjReal<Rat>::infinity();
      continue;
    }
    ScalarValue v = parse_scalar(g, where);
    doc.float_mesh.F[i] = ProjReal<double>::finite(v.d);
    if (v.exact)
      doc.exact_mesh.F[i] = ProjReal<Rat>::finite(v.r);
    else
      doc.exact = false;
  }

  if (have_angles_all) {
    doc.float_mesh.angles = angles;
    doc.exact_mesh.angles = angles;
  }

  if (j.contains("gap_splits")) {
    const json& s = j["gap_splits"];
    if (!s.is_array() || s.size() != 4)
      throw ParseError("'gap_splits' must be an array of 4 entries", "gap_splits");
    std::array<GapSplit, 4> splits{};
    for (int i = 0; i < 4; ++i) {
      const std::string where = "gap_splits[" + std::to_string(i) + "]";
      splits[i].tau = require_number(s[i], "tau", where);
      splits[i].zeta = require_number(s[i], "zeta", where);
      // consistency: tau + zeta must reproduce the gap
      const auto& F = doc.float_mesh.F[i];
      auto from_split = gap_from_angles(splits[i].tau, splits[i].zeta);
      bool ok = F.inf ? from_split.inf
                      : (!from_split.inf && std::abs(from_split.val - F.val) <=
                                                1e-5 * std::max(1.0, std::abs(F.val)));
      if (!ok)
        throw ParseError("tau+zeta inconsistent with gap F", where);
    }
    doc.float_mesh.splits = splits;
    doc.exact_mesh.splits = splits;
  }
  return doc;
}

MeshDocument load_mesh_document(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_mesh_document(ss.str());
}

namespace {

template <class K>
json gaps_json(const MeshSpec<K>& mesh)
{
  json gaps = json::array();
  for (const auto& F : mesh.F) {
    if (F.inf)
      gaps.push_back("inf");
    else if constexpr (is_exact_v<K>)
      gaps.push_back(to_string(F.val));
    else
      gaps.push_back(F.val);
  }
  return gaps;
}

template <class K>
json doc_json(const MeshSpec<K>& mesh)
{
  json j;
  j["version"] = "1";
  json quads = json::array();
  for (int i = 0; i < 4; ++i) {
    json q;
    json c;
    if constexpr (is_exact_v<K>) {
      c["a"] = to_string(mesh.q[i].a);
      c["b"] = to_string(mesh.q[i].b);
      c["c"] = to_string(mesh.q[i].c);
      c["e"] = to_string(mesh.q[i].e);
    } else {
      c["a"] = mesh.q[i].a;
      c["b"] = mesh.q[i].b;
      c["c"] = mesh.q[i].c;
      c["e"] = mesh.q[i].e;
    }
    q["coeffs"] = c;
    if (mesh.angles) {
      const QuadAngles& a = (*mesh.angles)[i];
      q["angles"] = {{"lambda", a.lambda}, {"gamma", a.gamma}, {"mu", a.mu}, {"delta", a.delta}};
    }
    quads.push_back(q);
  }
  j["quads"] = quads;
  j["gaps"] = gaps_json(mesh);
  if (mesh.splits) {
    json s = json::array();
    for (const auto& sp : *mesh.splits) s.push_back({{"tau", sp.tau}, {"zeta", sp.zeta}});
    j["gap_splits"] = s;
  }
  return j;
}

} // namespace

std::string serialize_mesh_document(const MeshSpec<Rat>& mesh) { return doc_json(mesh).dump(2); }
std::string serialize_mesh_document(const MeshSpec<double>& mesh)
{
  return doc_json(mesh).dump(2);
}

void save_mesh_document(const MeshSpec<Rat>& mesh, const std::string& path)
{
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing", path);
  out << serialize_mesh_document(mesh);
}

} // namespace koko
