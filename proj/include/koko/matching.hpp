#pragma once

#include <algorithm>

#include "koko/factorizer.hpp"

namespace koko {

// Four quads with their gap parameters, indexed cyclically. Source angles and
// gap splits ride along when known (they drive embedding, not the algebra).
template <class K>
struct MeshSpec {
  std::array<Coeffs<K>, 4> q;
  std::array<ProjReal<K>, 4> F;
  std::optional<std::array<QuadAngles, 4>> angles;
  std::optional<std::array<GapSplit, 4>> splits;

  MeshSpec<double> to_double() const
  {
    MeshSpec<double> m;
    for (int i = 0; i < 4; ++i) {
      m.q[i] = q[i].to_double();
      m.F[i] = F[i].inf ? ProjReal<double>::infinity()
                        : ProjReal<double>::finite(koko::to_double(F[i].val));
    }
    m.angles = angles;
    m.splits = splits;
    return m;
  }

  MeshSpec rotated(int s) const
  {
    MeshSpec m = *this;
    for (int i = 0; i < 4; ++i) {
      m.q[i] = q[(i + s) % 4];
      m.F[i] = F[(i + s) % 4];
    }
    if (angles)
      for (int i = 0; i < 4; ++i) (*m.angles)[i] = (*angles)[(i + s) % 4];
    if (splits)
      for (int i = 0; i < 4; ++i) (*m.splits)[i] = (*splits)[(i + s) % 4];
    return m;
  }
};

enum class MClass { PR, HQ, IR, RQ, PQ, IQ, Q, PR_IR, HQ_IQ, HQ_PQ, PQ_IQ };

inline const char* to_string(MClass m)
{
  switch (m) {
    case MClass::PR: return "PR";
    case MClass::HQ: return "HQ";
    case MClass::IR: return "IR";
    case MClass::RQ: return "RQ";
    case MClass::PQ: return "PQ";
    case MClass::IQ: return "IQ";
    case MClass::Q: return "Q";
    case MClass::PR_IR: return "PR+IR";
    case MClass::HQ_IQ: return "HQ+IQ";
    case MClass::HQ_PQ: return "HQ+PQ";
    case MClass::PQ_IQ: return "PQ+IQ";
  }
  return "?";
}

inline std::optional<MClass> mclass_from_string(const std::string& s)
{
  for (MClass m : {MClass::PR, MClass::HQ, MClass::IR, MClass::RQ, MClass::PQ, MClass::IQ,
                   MClass::Q, MClass::PR_IR, MClass::HQ_IQ, MClass::HQ_PQ, MClass::PQ_IQ})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

enum class FlexStatus { flexible, rigid, singular };

template <class K>
struct FlexReport {
  FlexStatus status = FlexStatus::rigid;
  std::optional<MClass> label;
  CClass class1 = CClass::quartic, class2 = CClass::quartic;
  ClassEvidence<K> ev1, ev2;
  std::vector<Factor<K>> shared; // d_M factors in (x1, x3), min multiplicity
  int rotation = 0;              // canonical rotation applied before splitting
  std::string diagnostics;

  bool flexible() const { return status == FlexStatus::flexible; }
};

// Res(gtilde^(i), gtilde^(i+1); x_(i+1)) of the rotated mesh, as a polynomial
// in (x_i, x_(i+2)).
template <class K>
BiPoly<K> mesh_resultant(const MeshSpec<K>& m, int i)
{
  BiPoly<K> a = eliminate_gap(m.q[i % 4], m.F[i % 4], "u", "v");
  BiPoly<K> b = eliminate_gap(m.q[(i + 1) % 4], m.F[(i + 1) % 4], "v", "w");
  return sylvester_resultant(a, b);
}

namespace detail {

// Canonical rotation: a single reducible quad goes to index 2 (position 1),
// an adjacent reducible pair to positions (1,2); with three reducibles the
// irreducible one goes last. Opposite pairs and the 0/4 cases stay put.
template <class K>
int canonical_rotation(const MeshSpec<K>& m, const Tol& tol)
{
  std::array<bool, 4> red{};
  int count = 0;
  for (int i = 0; i < 4; ++i) {
    red[i] = is_reducible(m.q[i], tol);
    count += red[i] ? 1 : 0;
  }
  if (count == 1) {
    for (int i = 0; i < 4; ++i)
      if (red[i]) return (i + 3) % 4; // shift so that i lands on position 1
  } else if (count == 2) {
    for (int i = 0; i < 4; ++i)
      if (red[i] && red[(i + 1) % 4]) return i; // adjacent pair -> positions (0,1)
  } else if (count == 3) {
    for (int i = 0; i < 4; ++i)
      if (!red[i]) return (i + 1) % 4; // irreducible lands on position 3
  }
  return 0;
}

// Factor list of the coupling (q_i, F_i, q_{i+1}) transported to the mesh
// chart (x_i, x_{i+2}) through the trailing gap F_{i+1}.
template <class K>
std::vector<Factor<K>> coupling_factors_in_chart(const MeshSpec<K>& m, int i,
                                                 const Classified<K>& cl, const Tol& tol)
{
  Coupling<K> c{m.q[i % 4], m.q[(i + 1) % 4], m.F[i % 4], m.F[(i + 1) % 4]};
  FactoredResultant<K> fr = factor_resultant(c, cl, tol);
  std::vector<Factor<K>> out;
  const std::string u = "x" + std::to_string(i % 4 + 1);
  const std::string w = "x" + std::to_string((i + 2) % 4 + 1);
  for (const auto& f : fr.factors) {
    BiPoly<K> t = through_gap(f.poly, c.F2, w);
    t.rename(u, w);
    out.push_back({t, f.mult});
  }
  return out;
}

inline std::optional<MClass> label_from_classes(CClass c1, CClass c2, bool shared_linear,
                                                bool shared_quadratic, bool shared_quartic)
{
  auto is_rqpq = [](CClass c) {
    return c == CClass::involutive_rational || c == CClass::rational_quadratic ||
           c == CClass::purely_quadratic || c == CClass::equimodular_general;
  };
  auto one_is = [&](CClass a, auto pred) {
    return (c1 == a && pred(c2)) || (c2 == a && pred(c1));
  };
  if (c1 == CClass::purely_rational && c2 == CClass::purely_rational) return MClass::PR;
  if (c1 == CClass::half_quadratic && c2 == CClass::half_quadratic) return MClass::HQ;
  if (c1 == CClass::quartic && c2 == CClass::quartic && shared_quartic) return MClass::Q;
  if (c1 == CClass::involutive_quadratic && c2 == CClass::involutive_quadratic)
    return MClass::IQ;
  if (one_is(CClass::involutive_quadratic, is_rqpq)) return MClass::PQ_IQ;
  if (one_is(CClass::half_quadratic, [](CClass c) { return c == CClass::involutive_quadratic; }))
    return MClass::HQ_IQ;
  if (one_is(CClass::purely_rational, is_rqpq)) return MClass::PR_IR;
  if (one_is(CClass::half_quadratic, is_rqpq)) return MClass::HQ_PQ;
  if (is_rqpq(c1) && is_rqpq(c2)) {
    if (shared_linear && shared_quadratic) return MClass::RQ;
    if (shared_linear) return MClass::IR;
    if (shared_quadratic) return MClass::PQ;
  }
  return std::nullopt;
}

} // namespace detail

// Flexibility criterion: the mesh is flexible iff the two four-quad resultants
// share a factor. Shared-factor detection matches the structured factor lists
// by coefficient proportionality; in exact mode the identical-vanishing of
// Res_x3(Rt1, Rt2) double-checks the decision.
template <class K>
FlexReport<K> is_flexible(const MeshSpec<K>& mesh_in, const Tol& tol = {})
{
  FlexReport<K> rep;
  for (int i = 0; i < 4; ++i)
    if (is_singular(mesh_in.q[i], tol)) {
      rep.status = FlexStatus::singular;
      rep.diagnostics =
          "quad " + std::to_string(i + 1) + " is singular: " + shape_condition(mesh_in.q[i], tol);
      return rep;
    }

  rep.rotation = detail::canonical_rotation(mesh_in, tol);
  MeshSpec<K> mesh = mesh_in.rotated(rep.rotation);

  Coupling<K> s1{mesh.q[0], mesh.q[1], mesh.F[0], mesh.F[1]};
  Coupling<K> s2{mesh.q[2], mesh.q[3], mesh.F[2], mesh.F[3]};
  Classified<K> c1 = classify(s1, tol);
  Classified<K> c2 = classify(s2, tol);
  rep.class1 = c1.cls;
  rep.class2 = c2.cls;
  rep.ev1 = c1.ev;
  rep.ev2 = c2.ev;

  bool factored_ok = true;
  std::vector<Factor<K>> f1, f2;
  try {
    f1 = detail::coupling_factors_in_chart(mesh, 0, c1, tol);
    f2 = detail::coupling_factors_in_chart(mesh, 2, c2, tol);
    // transport S2 factors from (x3, x1) to (x1, x3)
    for (auto& f : f2) f.poly = f.poly.swap_vars();
  } catch (const FactorizationError& e) {
    factored_ok = false;
    rep.diagnostics = std::string("structured factorization unavailable: ") + e.what();
  }

  bool lin = false, quad = false, quartic_shared = false;
  if (factored_ok) {
    for (const auto& a : f1)
      for (const auto& b : f2) {
        if (a.poly.deg_u() != b.poly.deg_u() || a.poly.deg_v() != b.poly.deg_v()) continue;
        if (!proportional(a.poly, b.poly, tol)) continue;
        rep.shared.push_back({a.poly, std::min(a.mult, b.mult)});
        int d = std::max(a.poly.deg_u(), a.poly.deg_v());
        if (d <= 1) lin = true;
        else if (d == 2) quad = true;
        else quartic_shared = true;
      }
  }
  bool flexible_by_factors = !rep.shared.empty();

  if constexpr (is_exact_v<K>) {
    // the gcd criterion, computed exactly
    BiPoly<K> r1 = mesh_resultant(mesh, 0);
    BiPoly<K> r2 = mesh_resultant(mesh, 2).swap_vars();
    bool flexible_exact = resultant_wrt_v(r1, r2).is_zero();
    if (factored_ok && flexible_exact != flexible_by_factors) {
      // trust the exact criterion; note the disagreement
      rep.diagnostics += (rep.diagnostics.empty() ? "" : "; ");
      rep.diagnostics += "factor matching disagreed with the exact gcd test";
    }
    rep.status = flexible_exact ? FlexStatus::flexible : FlexStatus::rigid;
  } else {
    rep.status = flexible_by_factors ? FlexStatus::flexible : FlexStatus::rigid;
  }

  if (rep.status == FlexStatus::flexible)
    rep.label = detail::label_from_classes(rep.class1, rep.class2, lin, quad, quartic_shared);
  return rep;
}

// Spherical reflection of a seed coupling: always a
// matching, whatever the seed class. F2 is pinned to 0 by the construction.
template <class K>
MeshSpec<K> reflect_coupling(const Coeffs<K>& q1, const ProjReal<K>& F1, const Coeffs<K>& q2)
{
  MeshSpec<K> m;
  m.q = {q1, q2, swap_xy(q2), swap_xy(q1)};
  m.F = {F1, ProjReal<K>::finite(K(0)), -F1, ProjReal<K>::finite(K(0))};
  return m;
}

struct GuardCheck {
  std::string name;
  bool pass;
  std::string detail;
};

// Condition (IR-g): one of {F2F4, -F2/F4, -F2F4, F2/F4} equals k with k = +-1.
template <class K>
bool ir_gap_condition(const ProjReal<K>& F2, const ProjReal<K>& F4, const K& k,
                      const Tol& tol = {})
{
  if (!(nearly_eq(k, K(1), tol) || nearly_eq(k, K(-1), tol))) return false;
  if (F2.inf || F4.inf) {
    // products and quotients with an infinite gap reach +-1 only against 0
    // or the other infinity; treat the finite combinations below only
    if (F2.inf && F4.inf) return true; // F2/F4 formally finite: +-1 reachable
    return false;
  }
  bool any = nearly_eq(K(F2.val * F4.val), k, tol) || nearly_eq(K(-F2.val * F4.val), k, tol);
  if (!nearly_zero(F4.val, K(1), tol)) {
    any = any || nearly_eq(K(F2.val / F4.val), k, tol) ||
          nearly_eq(K(-F2.val / F4.val), k, tol);
  }
  return any;
}

// General-type guards: the IR-g gap-sign conditions, the pseudo-planar
// requirement for real purely-quadratic matchings, and the IQ<->IQ pairing of
// pseudo-planar meshes.
template <class K>
std::vector<GuardCheck> general_type_guards(const MeshSpec<K>& mesh, const Tol& tol = {})
{
  std::vector<GuardCheck> out;
  Coupling<K> s1{mesh.q[0], mesh.q[1], mesh.F[0], mesh.F[1]};
  Coupling<K> s2{mesh.q[2], mesh.q[3], mesh.F[2], mesh.F[3]};
  Classified<K> c1 = classify(s1, tol);
  Classified<K> c2 = classify(s2, tol);
  bool pseudo = true;
  for (const auto& f : mesh.F) pseudo = pseudo && f.pseudo_planar(tol);

  // IR-g: matchings flexible through a shared bilinear factor need one of the
  // four signed gap conditions with k = +-1 in general type.
  bool general = !pseudo;
  auto rep = is_flexible(mesh, tol);
  bool ir_candidate = rep.flexible() && rep.label == MClass::IR;
  if (general && ir_candidate && (c1.ev.k1 || c1.ev.k2)) {
    const K k = c1.ev.k1 ? *c1.ev.k1 : *c1.ev.k2;
    bool any = ir_gap_condition(mesh.F[1], mesh.F[3], k, tol);
    out.push_back({"IR-g gap signs", any,
                   any ? "one of the four signed F2/F4 conditions holds"
                       : "no signed F2/F4 condition holds with k=+-1"});
  }

  // a real purely-quadratic matching must be pseudo-planar
  bool pq_side = c1.cls == CClass::purely_quadratic || c2.cls == CClass::purely_quadratic;
  if (pq_side) {
    out.push_back({"PQ pseudo-planar", pseudo,
                   pseudo ? "all gaps in {0, inf}" : "purely-quadratic coupling with a general gap"});
  }

  // in a pseudo-planar mesh IQ pairs only with IQ
  if (pseudo) {
    bool iq1 = c1.cls == CClass::involutive_quadratic;
    bool iq2 = c2.cls == CClass::involutive_quadratic;
    out.push_back({"IQ pairing", iq1 == iq2,
                   iq1 == iq2 ? "couplings agree on involutive-quadratic"
                              : "exactly one coupling is involutive-quadratic"});
  }
  return out;
}

} // namespace koko
