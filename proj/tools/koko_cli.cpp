// koko: classify, construct, trace and embed flexible Kokotsakis meshes.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "koko/construct.hpp"
#include "koko/embed.hpp"
#include "koko/meshdoc.hpp"
#include "koko/trace.hpp"

using namespace koko;
using nlohmann::json;

namespace {

enum ExitCode { kFlexible = 0, kRigid = 1, kSingular = 2, kParse = 3, kBadParams = 4 };

struct Global {
  std::string mode = "auto"; // auto: exact when the document is exact
  double eps = 1e-9;
  bool as_json = false;
  Tol tol() const { return Tol{eps, eps * 1e-3}; }
};

template <class K>
json report_json(const FlexReport<K>& rep)
{
  json j;
  j["status"] = rep.status == FlexStatus::flexible ? "flexible"
               : rep.status == FlexStatus::rigid   ? "rigid"
                                                   : "singular";
  if (rep.label) j["label"] = to_string(*rep.label);
  j["coupling_classes"] = {to_string(rep.class1), to_string(rep.class2)};
  j["evidence"] = {rep.ev1.describe(), rep.ev2.describe()};
  j["rotation"] = rep.rotation;
  if (!rep.diagnostics.empty()) j["diagnostics"] = rep.diagnostics;
  json shared = json::array();
  for (const auto& f : rep.shared) {
    shared.push_back({{"factor", f.poly.str()}, {"multiplicity", f.mult}});
  }
  j["shared_factors"] = shared;
  return j;
}

template <class K>
int print_report(const FlexReport<K>& rep, const Global& g,
                 const std::vector<GuardCheck>& guards = {})
{
  if (g.as_json) {
    json j = report_json(rep);
    json gj = json::array();
    for (const auto& gc : guards)
      gj.push_back({{"name", gc.name}, {"pass", gc.pass}, {"detail", gc.detail}});
    j["guards"] = gj;
    std::cout << j.dump(2) << "\n";
  } else if (rep.status == FlexStatus::singular) {
    std::cout << "singular (anti)deltoid quad -- out of scope\n  " << rep.diagnostics << "\n";
  } else {
    std::cout << "couplings: S1 " << to_string(rep.class1) << " | S2 " << to_string(rep.class2)
              << "\n";
    std::cout << "  S1 evidence: " << rep.ev1.describe() << "\n";
    std::cout << "  S2 evidence: " << rep.ev2.describe() << "\n";
    if (rep.rotation) std::cout << "  (canonical rotation by " << rep.rotation << ")\n";
    if (rep.status == FlexStatus::flexible) {
      std::cout << "flexible: " << (rep.label ? to_string(*rep.label) : "(unpaired classes)")
                << "\n";
      for (const auto& f : rep.shared)
        std::cout << "  shared factor (mult " << f.mult << "): " << f.poly.str() << "\n";
    } else {
      std::cout << "rigid\n";
    }
    for (const auto& gc : guards)
      std::cout << "  guard " << gc.name << ": " << (gc.pass ? "pass" : "VIOLATED") << " ("
                << gc.detail << ")\n";
    if (!rep.diagnostics.empty()) std::cout << "note: " << rep.diagnostics << "\n";
  }
  return rep.status == FlexStatus::flexible ? kFlexible
         : rep.status == FlexStatus::rigid  ? kRigid
                                            : kSingular;
}

int cmd_classify(const std::string& path, const Global& g)
{
  MeshDocument doc = load_mesh_document(path);
  for (const auto& w : doc.warnings) std::cerr << "warning: " << w << "\n";
  if (doc.exact && g.mode != "float") {
    auto rep = is_flexible(doc.exact_mesh);
    std::vector<GuardCheck> guards;
    if (rep.status != FlexStatus::singular) guards = general_type_guards(doc.exact_mesh);
    return print_report(rep, g, guards);
  }
  if (g.mode == "exact" && !doc.exact) {
    std::cerr << "error: --mode exact requires an exact document (fraction strings only)\n";
    return kParse;
  }
  auto rep = is_flexible(doc.float_mesh, g.tol());
  std::vector<GuardCheck> guards;
  if (rep.status != FlexStatus::singular) guards = general_type_guards(doc.float_mesh, g.tol());
  return print_report(rep, g, guards);
}

std::map<std::string, Rat> parse_params(const std::string& s)
{
  std::map<std::string, Rat> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ConstructError("bad --params entry: " + item);
    auto v = rat_from_string(item.substr(eq + 1));
    if (!v) throw ConstructError("bad rational in --params: " + item);
    out[item.substr(0, eq)] = *v;
  }
  return out;
}

int cmd_construct(const std::string& label_s, const std::string& k_arg,
                  const std::string& params_arg, const std::string& reflect_arg,
                  std::uint64_t seed, const std::string& out_path, const Global&)
{
  MeshSpec<Rat> mesh;
  try {
    Rng rng(seed);
    if (!reflect_arg.empty()) {
      MeshDocument doc = load_mesh_document(reflect_arg);
      if (!doc.exact) {
        std::cerr << "error: --reflect seed must be an exact document\n";
        return kBadParams;
      }
      mesh = construct_q_reflect(doc.exact_mesh.q[0], doc.exact_mesh.F[0], doc.exact_mesh.q[1]);
    } else if (!k_arg.empty()) {
      std::array<Rat, 4> k;
      std::stringstream ss(k_arg);
      std::string item;
      int i = 0;
      while (std::getline(ss, item, ',') && i < 4) {
        auto v = rat_from_string(item);
        if (!v) throw ConstructError("bad rational in --k: " + item);
        k[i++] = *v;
      }
      if (i != 4) throw ConstructError("--k needs four joint parameters");
      mesh = construct_pr_explicit(k);
    } else if (!params_arg.empty()) {
      auto p = parse_params(params_arg);
      auto need = [&](const char* n) {
        auto it = p.find(n);
        if (it == p.end()) throw ConstructError(std::string("missing parameter ") + n);
        return it->second;
      };
      mesh = construct_iq_explicit(need("a1"), need("c1"), need("a2"), need("b2"),
                                   p.count("k1") ? p["k1"] : Rat(-1),
                                   p.count("k2") ? p["k2"] : Rat(-1));
    } else {
      std::string ls = label_s;
      if (ls == "eq-general") {
        mesh = construct_equimodular_general(rng);
      } else {
        auto label = mclass_from_string(ls);
        if (!label) {
          std::cerr << "error: unknown class label '" << label_s << "'\n";
          return kBadParams;
        }
        mesh = construct_random(*label, rng);
      }
    }
  } catch (const ConstructError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadParams;
  }
  std::string text = serialize_mesh_document(mesh);
  if (out_path.empty() || out_path == "-") {
    std::cout << text << "\n";
  } else {
    std::ofstream out(out_path);
    out << text << "\n";
    std::cerr << "wrote " << out_path << "\n";
  }
  auto rep = is_flexible(mesh);
  std::cerr << "classified: "
            << (rep.flexible() ? (rep.label ? to_string(*rep.label) : "flexible") : "rigid")
            << "\n";
  return kFlexible;
}

int cmd_trace(const std::string& path, int steps, bool real_only, double tol_acc,
              double alpha_min, double alpha_max, const std::string& out_path, const Global& g)
{
  MeshDocument doc = load_mesh_document(path);
  TraceOptions opts;
  opts.steps = steps;
  opts.flex_tol = g.tol();
  opts.real_only = real_only;
  opts.tol = tol_acc;
  opts.alpha_min = alpha_min;
  if (alpha_max > 0) opts.alpha_max = alpha_max;
  TraceResult tr;
  try {
    tr = trace(doc.float_mesh, opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string w = e.what();
    return w.find("singular") != std::string::npos ? kSingular : kRigid;
  }
  if (out_path.empty() || out_path == "-") {
    write_trace_csv(tr, std::cout);
  } else {
    std::ofstream out(out_path);
    write_trace_csv(tr, out);
  }
  std::cerr << "accepted " << tr.accepted_states << " states in " << tr.traces.size()
            << " branches; skipped " << tr.skipped_points << " sweep points\n";
  if (!tr.diagnostic.empty()) std::cerr << "note: " << tr.diagnostic << "\n";
  return kFlexible;
}

int cmd_embed(const std::string& path, int state_index, double tol_acc, const std::string& out_base,
              const Global& g)
{
  MeshDocument doc = load_mesh_document(path);
  MeshSpec<double> mesh = doc.float_mesh;
  std::array<QuadAngles, 4> quads;
  if (mesh.angles) {
    quads = *mesh.angles;
  } else {
    for (int i = 0; i < 4; ++i) {
      auto a = angles_from_coeffs(mesh.q[i]);
      if (!a) {
        std::cerr << "error: quad " << i + 1
                  << " admits no spherical angles (coefficients-only mode); embedding "
                     "needs realizable quads\n";
        return kBadParams;
      }
      quads[i] = *a;
    }
  }
  std::array<GapSplit, 4> splits;
  if (mesh.splits) {
    splits = *mesh.splits;
  } else {
    std::array<double, 4> sums{};
    for (int i = 0; i < 4; ++i)
      sums[i] = mesh.F[i].inf ? std::numbers::pi : 2.0 * std::atan(mesh.F[i].val);
    auto solved = solve_gap_splits(quads, sums);
    if (!solved) {
      std::cerr << "warning: no closing gap split found; using tau = 2 atan F, zeta = 0 "
                   "(per-quad closures still hold)\n";
      for (int i = 0; i < 4; ++i) splits[i] = {sums[i], 0.0};
    } else {
      splits = *solved;
    }
  }

  TraceOptions opts;
  opts.steps = 400;
  opts.flex_tol = g.tol();
  opts.real_only = true;
  opts.tol = tol_acc;
  TraceResult tr;
  try {
    tr = trace(mesh, opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::string w = e.what();
    return w.find("singular") != std::string::npos ? kSingular : kRigid;
  }
  std::vector<const FlexState*> states;
  for (const auto& t : tr.traces)
    for (const auto& s : t.states) states.push_back(&s);
  if (states.empty()) {
    std::cerr << "error: no real states to embed\n";
    return kRigid;
  }
  if (state_index < 0 || state_index >= static_cast<int>(states.size())) {
    std::cerr << "error: state index out of range (0.." << states.size() - 1 << ")\n";
    return kBadParams;
  }
  LinkageEmbedding emb = embed_linkage(quads, splits, *states[state_index]);
  std::ofstream obj(out_base + ".obj");
  write_embedding_obj(emb, obj);
  std::ofstream js(out_base + ".json");
  js << embedding_json(emb) << "\n";
  std::cerr << "wrote " << out_base << ".obj and " << out_base << ".json; global closure "
            << emb.global_closure << "\n";
  return kFlexible;
}

int cmd_convert(const std::string& path, const std::string& out_path, const Global&)
{
  MeshDocument doc = load_mesh_document(path);
  MeshSpec<double> mesh = doc.float_mesh;
  if (!mesh.angles) {
    std::array<QuadAngles, 4> quads;
    bool all = true;
    for (int i = 0; i < 4; ++i) {
      auto a = angles_from_coeffs(mesh.q[i]);
      if (!a) {
        all = false;
        std::cerr << "note: quad " << i + 1 << " admits no spherical angles\n";
        break;
      }
      quads[i] = *a;
    }
    if (all) mesh.angles = quads;
  }
  std::string text = serialize_mesh_document(mesh);
  if (out_path.empty() || out_path == "-")
    std::cout << text << "\n";
  else {
    std::ofstream out(out_path);
    out << text << "\n";
  }
  return kFlexible;
}

int run_suite(const Global& g);

int cmd_verify(const std::string& path, bool suite, const Global& g)
{
  if (suite) return run_suite(g);
  MeshDocument doc = load_mesh_document(path);
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << "\n";
    if (!ok) ++failures;
  };

  for (int i = 0; i < 4; ++i) {
    auto v = dfnpoly_violation(doc.float_mesh.q[i], g.tol());
    check("quad " + std::to_string(i + 1) + " admissibility", !v.has_value(), v ? *v : "");
  }

  auto run_checks = [&](auto mesh, Tol tol) {
    using KK = decltype(mesh.q[0].a);
    for (int s = 0; s < 4; s += 2) {
      Coupling<KK> c{mesh.q[s], mesh.q[(s + 1) % 4], mesh.F[s], mesh.F[(s + 1) % 4]};
      if (is_singular(c.q1, tol) || is_singular(c.q2, tol)) {
        check("coupling " + std::to_string(s / 2 + 1), false, "singular quad");
        continue;
      }
      auto cl = classify(c, tol);
      BiPoly<KK> r1 = coupling_resultant(c);
      check("R" + std::to_string(s / 2 + 1) + " degree 4 in both variables",
            r1.deg_u() == 4 && r1.deg_v() == 4);
      try {
        auto fr = factor_resultant(c, cl, tol);
        check("coupling " + std::to_string(s / 2 + 1) + " factorization (" +
                  to_string(cl.cls) + ")",
              verify_factorization(fr, c, tol));
        bool deg_ok = true;
        for (const auto& f : fr.factors) deg_ok &= f.poly.deg_u() == f.poly.deg_v();
        check("factor degree symmetry", deg_ok);
        if (cl.cls == CClass::involutive_quadratic && mesh.F[s].pseudo_planar(tol)) {
          bool odd = true;
          for (const auto& f : fr.factors)
            if (f.poly.deg_u() == 2) odd &= odd_even_signature(f.poly) == Parity::odd_only;
          check("IQ odd-only squared factor", odd);
        }
      } catch (const FactorizationError& e) {
        std::cout << "SKIP coupling " << s / 2 + 1 << " factorization -- " << e.what() << "\n";
      }
    }
    auto rep = is_flexible(mesh, tol);
    check("flexibility decision", rep.status != FlexStatus::singular,
          rep.status == FlexStatus::flexible
              ? std::string("flexible: ") + (rep.label ? to_string(*rep.label) : "?")
              : rep.status == FlexStatus::rigid ? "rigid"
                                                : rep.diagnostics);
    if (rep.status != FlexStatus::singular)
      for (const auto& gc : general_type_guards(mesh, tol))
        check("guard: " + gc.name, gc.pass, gc.detail);
  };

  if (doc.exact && g.mode != "float")
    run_checks(doc.exact_mesh, Tol{});
  else
    run_checks(doc.float_mesh, g.tol());
  std::cout << (failures ? "verify: FAILED\n" : "verify: all checks passed\n");
  return failures ? 1 : 0;
}

// Built-in battery: constructor round-trips plus the structural invariants.
int run_suite(const Global&)
{
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  Rng rng(20240817);
  const MClass labels[] = {MClass::PR,    MClass::HQ,    MClass::IR,    MClass::RQ,
                           MClass::PQ,    MClass::IQ,    MClass::Q,     MClass::PR_IR,
                           MClass::HQ_IQ, MClass::HQ_PQ, MClass::PQ_IQ};
  for (MClass label : labels) {
    bool ok = true;
    std::string why;
    try {
      for (int it = 0; it < 5; ++it) {
        MeshSpec<Rat> m = construct_random(label, rng);
        auto rep = is_flexible(m);
        if (!rep.flexible() || !rep.label || *rep.label != label) {
          ok = false;
          why = "label mismatch";
          break;
        }
        for (int s = 0; s < 4; s += 2) {
          Coupling<Rat> c{m.q[s], m.q[(s + 1) % 4], m.F[s], m.F[(s + 1) % 4]};
          auto cl = classify(c);
          BiPoly<Rat> r1 = coupling_resultant(c);
          if (r1.deg_u() != 4 || r1.deg_v() != 4) ok = false;
          auto fr = factor_resultant(c, cl);
          if (!verify_factorization(fr, c)) ok = false;
          for (const auto& f : fr.factors)
            if (f.poly.deg_u() != f.poly.deg_v()) ok = false;
        }
        if (!ok) break;
      }
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    check(std::string("battery ") + to_string(label) + (why.empty() ? "" : " (" + why + ")"), ok);
  }
  // moebius oracle on a PR mesh
  try {
    MeshSpec<Rat> m = construct_pr(rng);
    TraceOptions opts;
    opts.steps = 40;
    opts.real_only = true;
    TraceResult tr = trace(m, opts);
    check("PR trace nonempty", tr.accepted_states > 0);
  } catch (const std::exception&) {
    check("PR trace nonempty", false);
  }
  std::cout << (failures ? "suite: FAILED\n" : "suite: all checks passed\n");
  return failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"flexible Kokotsakis mesh toolkit"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--mode", g.mode, "scalar mode: auto|exact|float")
      ->check(CLI::IsMember({"auto", "exact", "float"}));
  app.add_option("--eps", g.eps, "relative tolerance for float mode");
  app.add_flag("--json", g.as_json, "machine-readable reports");

  std::string path, out_path, k_arg, params_arg, reflect_arg, label;
  int steps = 400, state_index = 0;
  bool real_only = false, suite = false;
  double tol_acc = 1e-8, alpha_min = 0.1, alpha_max = -1;
  std::uint64_t seed = 12345;

  auto* c_classify = app.add_subcommand("classify", "decide flexibility and the class label");
  c_classify->add_option("path", path)->required();

  auto* c_construct = app.add_subcommand("construct", "build a certified flexible mesh");
  c_construct->add_option("label", label, "one of the 11 class labels, or eq-general");
  c_construct->add_option("--k", k_arg, "PR joint parameters k1,k2,k3,k4");
  c_construct->add_option("--params", params_arg, "IQ parameters a1=..,c1=..,a2=..,b2=..[,k1=..,k2=..]");
  c_construct->add_option("--reflect", reflect_arg, "seed document; reflect its first coupling");
  c_construct->add_option("--seed", seed, "random seed");
  c_construct->add_option("-o,--out", out_path, "output document path");

  auto* c_trace = app.add_subcommand("trace", "numeric flexion sweep");
  c_trace->add_option("path", path)->required();
  c_trace->add_option("--steps", steps);
  c_trace->add_flag("--real", real_only, "keep real states only");
  c_trace->add_option("--tol", tol_acc, "residual acceptance tolerance");
  c_trace->add_option("--alpha-min", alpha_min);
  c_trace->add_option("--alpha-max", alpha_max);
  c_trace->add_option("--out", out_path, "CSV path (default stdout)");

  auto* c_embed = app.add_subcommand("embed", "spherical linkage embedding (OBJ + JSON)");
  c_embed->add_option("path", path)->required();
  c_embed->add_option("--tol", tol_acc, "residual acceptance tolerance");
  c_embed->add_option("--state", state_index, "accepted state index");
  c_embed->add_option("--out", out_path, "output base name")->required();

  auto* c_verify = app.add_subcommand("verify", "invariant checks on a document or the battery");
  c_verify->add_option("path", path);
  c_verify->add_flag("--suite", suite, "run the built-in constructor battery");

  auto* c_convert = app.add_subcommand("convert", "angles <-> coefficients document rewrite");
  c_convert->add_option("path", path)->required();
  c_convert->add_option("-o,--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_classify->parsed()) return cmd_classify(path, g);
    if (c_construct->parsed())
      return cmd_construct(label, k_arg, params_arg, reflect_arg, seed, out_path, g);
    if (c_trace->parsed())
      return cmd_trace(path, steps, real_only, tol_acc, alpha_min, alpha_max, out_path, g);
    if (c_embed->parsed()) return cmd_embed(path, state_index, tol_acc, out_path, g);
    if (c_verify->parsed()) return cmd_verify(path, suite, g);
    if (c_convert->parsed()) return cmd_convert(path, out_path, g);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParse;
  }
  return 0;
}
