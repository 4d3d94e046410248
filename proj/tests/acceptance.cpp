// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "koko/construct.hpp"
#include "koko/embed.hpp"
#include "koko/trace.hpp"

using namespace koko;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

double n0_root()
{
  double n = -0.25;
  for (int i = 0; i < 200; ++i) {
    double f = std::pow(n + 1, 4) + n;
    double df = 4 * std::pow(n + 1, 3) + 1;
    double step = f / df;
    n -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return n;
}

MeshSpec<double> physical_closed_form()
{
  double n0 = n0_root();
  double t = (n0 + 1) * (n0 + 1);
  MeshSpec<double> m;
  m.q[0] = {1.5, 1.0, n0, -2.0 / 3.0};
  m.q[1] = {1.5, n0, 1.0, -2.0 / 3.0};
  m.q[2] = {0.5, -0.5, t / 3.0, -t / 3.0};
  m.q[3] = {3.0 / (8 * n0 * n0 + 12 * n0 + 12), t / (4 * n0 * n0 + 6 * n0 + 6),
            -3.0 / (8 * n0 * n0 + 12 * n0 + 12), -t / (4 * n0 * n0 + 6 * n0 + 6)};
  m.F[0] = ProjReal<double>::finite(0);
  m.F[1] = ProjReal<double>::finite(0);
  m.F[2] = ProjReal<double>::finite(1);
  m.F[3] = ProjReal<double>::finite(0);
  return m;
}

// -------------------------------------------------------------------------
// 1. physical-model reproduction
// -------------------------------------------------------------------------
Outcome criterion1()
{
  Outcome out;
  double n0 = n0_root();
  out.require(std::abs(std::pow(n0 + 1, 4) + n0) < 1e-13, "n0 not a 12-digit root");
  out.require(n0 > -1 && n0 < 0, "n0 outside (-1,0)");

  // the published numeric angle table
  std::array<QuadAngles, 4> angles{
      QuadAngles{1.679854, 2.301666, 1.973198, 2.860453},
      QuadAngles{1.679854, 2.860453, 1.973198, 2.301666},
      QuadAngles{2.278478, 2.628901, kPi / 2, kPi / 2},
      QuadAngles{2.003527, kPi / 2, kPi / 2, 2.335389}};
  std::array<GapSplit, 4> splits{GapSplit{1.558808, -1.558808}, GapSplit{0.694319, -0.694319},
                                 GapSplit{1.164528, 0.406268}, GapSplit{0.907881, -0.907881}};

  MeshSpec<double> listed = physical_closed_form();
  MeshSpec<double> from_angles;
  for (int i = 0; i < 4; ++i) {
    from_angles.q[i] = coeffs_from_angles(angles[i]);
    auto F = gap_from_angles(splits[i].tau, splits[i].zeta);
    from_angles.F[i] = F;
    out.require(!F.inf, "unexpected infinite gap");
    double listedF = listed.F[i].val;
    out.require(std::abs(F.val - listedF) < 1e-5, "F differs from the listed value");
    double err = std::max({std::abs(from_angles.q[i].a - listed.q[i].a),
                           std::abs(from_angles.q[i].b - listed.q[i].b),
                           std::abs(from_angles.q[i].c - listed.q[i].c),
                           std::abs(from_angles.q[i].e - listed.q[i].e)});
    out.require(err < 1e-5, "coefficients differ from the listed values by " +
                                std::to_string(err) + " (quad " + std::to_string(i + 1) + ")");
  }

  // classification at the tolerance of the 6-digit table
  auto rep = is_flexible(from_angles, Tol{1e-5, 1e-8});
  out.require(rep.flexible(), "angle-table mesh did not classify flexible");
  out.require(rep.label && *rep.label == MClass::PQ_IQ, "label is not PQ+IQ");

  // trace the listed coefficients over alpha1 in (0.1, pi-0.1)
  TraceOptions opts;
  opts.steps = 400;
  opts.alpha_min = 0.1;
  opts.alpha_max = kPi - 0.1;
  opts.real_only = true;
  opts.tol = 1e-8;
  TraceResult tr = trace(listed, opts);
  out.require(tr.accepted_states >= 200,
              "only " + std::to_string(tr.accepted_states) + " accepted states");
  for (const auto& t : tr.traces)
    for (const auto& s : t.states)
      out.require(s.residual < 1e-8, "residual above 1e-8");
  return out;
}

// -------------------------------------------------------------------------
// 2. purely-rational moebius round-trip
// -------------------------------------------------------------------------
Outcome criterion2()
{
  Outcome out;
  Rng rng(220106);
  for (int it = 0; it < 100; ++it) {
    MeshSpec<Rat> m = construct_pr(rng);
    auto rep = is_flexible(m);
    out.require(rep.flexible(), "scalar-condition mesh classified rigid");
    out.require(rep.label && *rep.label == MClass::PR, "scalar-condition mesh not labeled PR");
  }
  int rigid = 0;
  for (int it = 0; it < 100; ++it) {
    MeshSpec<Rat> m = construct_pr_broken(rng);
    if (!is_flexible(m).flexible()) ++rigid;
  }
  out.require(rigid >= 99, "only " + std::to_string(rigid) + "/100 broken meshes rigid");

  // orbit oracle on a handful of traced PR meshes
  for (int it = 0; it < 8; ++it) {
    MeshSpec<Rat> mesh = construct_pr(rng);
    MeshSpec<double> md = mesh.to_double();
    TraceOptions opts;
    opts.steps = 50;
    opts.real_only = true;
    opts.tol = 1e-9;
    TraceResult tr = trace(md, opts);
    std::array<std::array<Mobius<double>, 2>, 4> cand;
    for (int i = 0; i < 4; ++i) {
      auto sp = factor_reducible(md.q[i]);
      if (!sp) {
        out.require(false, "PR quad failed to split");
        return out;
      }
      Mobius<double> gap = md.F[i].inf ? Mobius<double>{0, -1, 1, 0}
                                       : Mobius<double>{1, -md.F[i].val, md.F[i].val, 1};
      for (int br = 0; br < 2; ++br) {
        double root = br == 0 ? sp->k : sp->kp;
        cand[i][br] = gap * (sp->antiiso ? Mobius<double>{root, 0, 0, 1}
                                         : Mobius<double>{0, root, 1, 0});
      }
    }
    auto matches = [&](double from, double to, int qi) {
      for (int br = 0; br < 2; ++br) {
        const auto& n = cand[qi][br];
        double den = n.r * from + n.s;
        if (std::abs(den) < 1e-9) continue;
        if (std::abs((n.p * from + n.q) / den - to) <= 1e-10 * std::max(1.0, std::abs(to)))
          return true;
      }
      return false;
    };
    for (const auto& t : tr.traces)
      for (const auto& s : t.states) {
        out.require(matches(std::real(s.x[0]), std::real(s.x[1]), 0), "orbit mismatch x2");
        out.require(matches(std::real(s.x[1]), std::real(s.x[2]), 1), "orbit mismatch x3");
        out.require(matches(std::real(s.x[2]), std::real(s.x[3]), 2), "orbit mismatch x4");
      }
  }
  return out;
}

// -------------------------------------------------------------------------
// 3. Constructor battery (meshes kept for criteria 4 and 5)
// -------------------------------------------------------------------------
struct Battery {
  std::vector<std::pair<MClass, MeshSpec<Rat>>> meshes;
};

Outcome criterion3(Battery& battery)
{
  Outcome out;
  Rng rng(330711);
  const MClass labels[] = {MClass::PR,    MClass::HQ,    MClass::IR,    MClass::RQ,
                           MClass::PQ,    MClass::IQ,    MClass::Q,     MClass::PR_IR,
                           MClass::HQ_IQ, MClass::HQ_PQ, MClass::PQ_IQ};
  for (MClass label : labels) {
    for (int it = 0; it < 25; ++it) {
      MeshSpec<Rat> m;
      try {
        m = construct_random(label, rng);
      } catch (const ConstructError& e) {
        out.require(false, std::string(to_string(label)) + " sampling failed: " + e.what());
        continue;
      }
      auto rep = is_flexible(m);
      bool ok = rep.flexible() && rep.label && *rep.label == label;
      out.require(ok, std::string("draw for ") + to_string(label) + " labeled " +
                          (rep.label ? to_string(*rep.label) : "rigid/none"));
      battery.meshes.emplace_back(label, std::move(m));
    }
  }
  return out;
}

// -------------------------------------------------------------------------
// 4. Resultant structure across the battery
// -------------------------------------------------------------------------
Outcome criterion4(const Battery& battery)
{
  Outcome out;
  for (const auto& [label, m] : battery.meshes) {
    for (int s = 0; s < 4; s += 2) {
      BiPoly<Rat> rt = mesh_resultant(m, s);
      out.require(rt.deg_u() == 4 && rt.deg_v() == 4,
                  "four-quad resultant degree not (4,4) for " + std::string(to_string(label)));
      Coupling<Rat> c{m.q[s], m.q[(s + 1) % 4], m.F[s], m.F[(s + 1) % 4]};
      auto cl = classify(c);
      FactoredResultant<Rat> fr;
      try {
        fr = factor_resultant(c, cl);
      } catch (const FactorizationError& e) {
        out.require(false, std::string("factorization unavailable for ") + to_string(label) +
                               ": " + e.what());
        continue;
      }
      out.require(verify_factorization(fr, c),
                  std::string("factorization mismatch for ") + to_string(label));
      for (const auto& f : fr.factors)
        out.require(f.poly.deg_u() == f.poly.deg_v(),
                    "factor with unequal degrees for " + std::string(to_string(label)));
    }
  }
  return out;
}

// -------------------------------------------------------------------------
// 5. IQ exactness and the parity dichotomy
// -------------------------------------------------------------------------
Outcome criterion5(const Battery& battery)
{
  Outcome out;
  Rng rng(550137);
  for (int it = 0; it < 25; ++it) {
    MeshSpec<Rat> m = construct_iq(rng);
    Coupling<Rat> c{m.q[0], m.q[1], m.F[0], m.F[1]};
    BiPoly<Rat> r1 = coupling_resultant(c);
    // base = a2 x1 y2^2 - (a1 x1^2 + c1) y2 + b2 x1, leading scalar b1/a1
    BiPoly<Rat> base("x1", "y2");
    base.add_to(1, 2, c.q2.a);
    base.add_to(2, 1, -c.q1.a);
    base.add_to(0, 1, -c.q1.c);
    base.add_to(1, 0, c.q2.b);
    BiPoly<Rat> expect = base * base * Rat(c.q1.b / c.q1.a);
    out.require(expect.eq(r1), "R1 != (b1/a1) * base^2 exactly");
  }

  // parity dichotomy across every pseudo-planar coupling of the battery
  for (const auto& [label, m] : battery.meshes) {
    for (int s = 0; s < 4; s += 2) {
      Coupling<Rat> c{m.q[s], m.q[(s + 1) % 4], m.F[s], m.F[(s + 1) % 4]};
      if (!c.F1.pseudo_planar({})) continue;
      auto cl = classify(c);
      FactoredResultant<Rat> fr;
      try {
        fr = factor_resultant(c, cl);
      } catch (const FactorizationError&) {
        continue; // criterion 4 already reports these
      }
      bool want_odd = cl.cls == CClass::involutive_quadratic;
      for (const auto& f : fr.factors) {
        if (f.poly.deg_u() != 2 || f.poly.deg_v() != 2) continue;
        Parity p = odd_even_signature(f.poly);
        out.require(p == (want_odd ? Parity::odd_only : Parity::even_only),
                    std::string("parity dichotomy broken in a ") + to_string(cl.cls) +
                        " coupling of " + to_string(label));
      }
    }
  }
  return out;
}

// -------------------------------------------------------------------------
// 6. Geometry <-> algebra equivalence
// -------------------------------------------------------------------------
Outcome criterion6()
{
  Outcome out;
  std::mt19937_64 rng(660149);
  std::uniform_real_distribution<double> ang(0.2, kPi - 0.2), al(0.3, kPi - 0.3);
  int quads = 0;
  while (quads < 100) {
    QuadAngles q{ang(rng), ang(rng), ang(rng), ang(rng)};
    Coeffs<double> c = coeffs_from_angles(q);
    int states = 0;
    for (int tries = 0; tries < 200 && states < 10; ++tries) {
      double alpha = al(rng);
      double x = std::tan(alpha / 2);
      double A = c.a * x * x + c.c, B = x, C = c.b * x * x + c.e;
      double disc = B * B - 4 * A * C;
      if (std::abs(A) < 1e-12 || disc < 1e-8) continue;
      double y = (-B + std::sqrt(disc)) / (2 * A);
      double beta = 2 * std::atan(y);
      double g_res = std::abs(c.a * x * x * y * y + c.b * x * x + c.c * y * y + x * y + c.e);
      QuadEmbedding emb = embed_quad(q, alpha, beta);
      out.require((g_res < 1e-9) == (emb.closure < 1e-9), "closure/bricard residuals disagree");
      double yb = y + 0.03;
      double g_bad = std::abs(c.a * x * x * yb * yb + c.b * x * x + c.c * yb * yb + x * yb + c.e);
      QuadEmbedding bad = embed_quad(q, alpha, 2 * std::atan(yb));
      out.require(g_bad >= 1e-9 && bad.closure >= 1e-9, "perturbed state passed a residual");
      ++states;
    }
    if (states == 10) ++quads;
  }
  return out;
}

// -------------------------------------------------------------------------
// 7. Real-component restriction for general-type equimodular meshes
// -------------------------------------------------------------------------
Outcome criterion7()
{
  Outcome out;
  Rng rng(770163);
  for (int it = 0; it < 5; ++it) {
    MeshSpec<Rat> m = construct_equimodular_general(rng);
    Coupling<Rat> c{m.q[0], m.q[1], m.F[0], m.F[1]};
    auto cl = classify(c);
    out.require(cl.cls == CClass::equimodular_general, "coupling not equimodular(general)");
    out.require(c.F1.is_pm_one({}), "F1 not +-1");
    out.require(!has_real_components(c, cl.cls), "real component reported");

    TraceOptions opts;
    opts.steps = 400;
    opts.real_only = true;
    TraceResult real_tr = trace(m, opts);
    out.require(real_tr.accepted_states == 0,
                std::to_string(real_tr.accepted_states) + " real states accepted");
    opts.real_only = false;
    TraceResult cx_tr = trace(m, opts);
    out.require(cx_tr.accepted_states > 0, "complex trace empty");
  }
  return out;
}

int run(const char* name, const char* limit, Outcome (*fn)(), double budget)
{
  auto t0 = std::chrono::steady_clock::now();
  Outcome out = fn();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool in_budget = budget <= 0 || secs < budget;
  std::printf("%s criterion %s (%s%.2fs%s)%s%s\n", out.pass && in_budget ? "PASS" : "FAIL", name,
              limit, secs, in_budget ? "" : " OVER BUDGET",
              out.pass ? "" : " -- ", out.pass ? "" : out.detail.c_str());
  return out.pass && in_budget ? 0 : 1;
}

} // namespace

int main()
{
  int failures = 0;
  failures += run("1: physical model reproduction", "< 5s: ", criterion1, 5.0);
  failures += run("2: PR moebius round-trip", "< 10s: ", criterion2, 10.0);

  Battery battery;
  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o3 = criterion3(battery);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = secs < 60.0;
    std::printf("%s criterion 3: constructor battery 11x25 (< 60s: %.2fs%s)%s%s\n",
                o3.pass && in_budget ? "PASS" : "FAIL", secs, in_budget ? "" : " OVER BUDGET",
                o3.pass ? "" : " -- ", o3.pass ? "" : o3.detail.c_str());
    failures += (o3.pass && in_budget) ? 0 : 1;
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o4 = criterion4(battery);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion 4: resultant structure suite (%.2fs)%s%s\n",
                o4.pass ? "PASS" : "FAIL", secs, o4.pass ? "" : " -- ",
                o4.pass ? "" : o4.detail.c_str());
    failures += o4.pass ? 0 : 1;
  }
  {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o5 = criterion5(battery);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion 5: IQ exactness and parity dichotomy (%.2fs)%s%s\n",
                o5.pass ? "PASS" : "FAIL", secs, o5.pass ? "" : " -- ",
                o5.pass ? "" : o5.detail.c_str());
    failures += o5.pass ? 0 : 1;
  }
  failures += run("6: geometry-algebra equivalence", "< 5s: ", criterion6, 5.0);
  failures += run("7: real-component restriction", "", criterion7, 0.0);
  std::printf("%s\n", failures ? "ACCEPTANCE: FAILED" : "ACCEPTANCE: ALL CRITERIA PASS");
  return failures ? 1 : 0;
}
