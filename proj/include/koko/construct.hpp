#pragma once

#include <random>

#include "koko/matching.hpp"
#include "koko/mobius.hpp"

namespace koko {

struct ConstructError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Rng = std::mt19937_64;

namespace rnd {

inline Rat rat(Rng& g, long lo = -6, long hi = 6, long dmax = 4)
{
  std::uniform_int_distribution<long> num(lo, hi), den(1, dmax);
  return make_rat(num(g), den(g));
}

inline Rat rat_nonzero(Rng& g, long lo = -6, long hi = 6, long dmax = 4)
{
  for (;;) {
    Rat r = rat(g, lo, hi, dmax);
    if (r != 0) return r;
  }
}

inline bool coin(Rng& g) { return std::uniform_int_distribution<int>(0, 1)(g) != 0; }

} // namespace rnd

namespace detail {

constexpr int kAttempts = 800;

inline bool admissible(const Coeffs<Rat>& q)
{
  return !dfnpoly_violation(q).has_value() && !is_singular(q);
}

inline bool admissible_irreducible(const Coeffs<Rat>& q)
{
  return admissible(q) && !is_reducible(q);
}

// Random non-singular irreducible quad with the admissibility inequalities.
inline Coeffs<Rat> random_irreducible(Rng& g)
{
  for (int it = 0; it < kAttempts; ++it) {
    Coeffs<Rat> q{rnd::rat(g), rnd::rat(g), rnd::rat(g), rnd::rat(g)};
    if (admissible_irreducible(q)) return q;
  }
  throw ConstructError("could not sample an admissible irreducible quad");
}

// Reducible quad from its two factor roots. Antiisogram kind (a=e=0) when
// antiiso, isogram kind (b=c=0) otherwise.
inline std::optional<Coeffs<Rat>> quad_from_roots(const Rat& k, const Rat& kp, bool antiiso)
{
  if (k == 0 || kp == 0 || k + kp == 0) return std::nullopt;
  Rat lead = Rat(-1) / (k + kp);
  Rat other = lead * k * kp;
  Coeffs<Rat> q = antiiso ? Coeffs<Rat>{0, other, lead, 0} : Coeffs<Rat>{lead, 0, 0, other};
  if (!admissible(q)) return std::nullopt;
  return q;
}

inline Rat second_root(Rng& g, const Rat& k)
{
  for (int it = 0; it < kAttempts; ++it) {
    Rat kp = rnd::rat_nonzero(g);
    if (kp != k && kp + k != 0) return kp;
  }
  throw ConstructError("no admissible second root");
}

// Moebius matrix of an (anti)isogram joint with its gap.
inline Mobius<Rat> pr_matrix(bool antiiso, const Rat& k, const ProjReal<Rat>& F)
{
  if (antiiso) {
    if (F.inf) return {Rat(0), Rat(-1), k, Rat(0)};
    return {k, -F.val, k * F.val, Rat(1)};
  }
  if (F.inf) return {Rat(-1), Rat(0), Rat(0), k};
  return {-F.val, k, Rat(1), k * F.val};
}

struct PrJoint {
  bool antiiso;
  Rat k;
  ProjReal<Rat> F;
};

// Read a monomial matrix back as an (anti)isogram joint.
inline std::optional<PrJoint> joint_from_matrix(const Mobius<Rat>& n, Rng& g)
{
  bool diag = n.q == 0 && n.r == 0 && n.p != 0 && n.s != 0;
  bool anti = n.p == 0 && n.s == 0 && n.q != 0 && n.r != 0;
  if (diag) {
    if (rnd::coin(g)) return PrJoint{true, n.p / n.s, ProjReal<Rat>::finite(0)};
    return PrJoint{false, -n.s / n.p, ProjReal<Rat>::infinity()};
  }
  if (anti) {
    if (rnd::coin(g)) return PrJoint{false, n.q / n.r, ProjReal<Rat>::finite(0)};
    return PrJoint{true, -n.r / n.q, ProjReal<Rat>::infinity()};
  }
  return std::nullopt;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Per-class constructors. Every constructor re-checks the admissibility
// inequalities and returns a mesh whose is_flexible label equals the class.
// ---------------------------------------------------------------------------

// PR: all quads (anti)isogonal, Moebius product forced scalar. Pseudo-planar
// joints keep everything rational; a reflection variant covers general gaps.
inline MeshSpec<Rat> construct_pr(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    if (rnd::coin(g)) {
      // reflection of an (anti)isogram coupling with a general gap
      bool a1 = rnd::coin(g), a2 = rnd::coin(g);
      auto q1 = detail::quad_from_roots(rnd::rat_nonzero(g), rnd::rat_nonzero(g), a1);
      auto q2 = detail::quad_from_roots(rnd::rat_nonzero(g), rnd::rat_nonzero(g), a2);
      if (!q1 || !q2) continue;
      ProjReal<Rat> F1 = ProjReal<Rat>::finite(rnd::rat_nonzero(g));
      MeshSpec<Rat> m = reflect_coupling(*q1, F1, *q2);
      return m;
    }
    std::array<detail::PrJoint, 4> joints;
    std::vector<Mobius<Rat>> ns;
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      joints[i] = {rnd::coin(g), rnd::rat_nonzero(g),
                   rnd::coin(g) ? ProjReal<Rat>::finite(0) : ProjReal<Rat>::infinity()};
      ns.push_back(detail::pr_matrix(joints[i].antiiso, joints[i].k, joints[i].F));
    }
    Mobius<Rat> prod = mobius_compose(ns);
    auto j4 = detail::joint_from_matrix(prod.adjoint(), g);
    if (!j4) continue;
    joints[3] = *j4;
    MeshSpec<Rat> m;
    for (int i = 0; i < 4; ++i) {
      auto q = detail::quad_from_roots(joints[i].k, detail::second_root(g, joints[i].k),
                                       joints[i].antiiso);
      if (!q) {
        ok = false;
        break;
      }
      m.q[i] = *q;
      m.F[i] = joints[i].F;
    }
    if (!ok) continue;
    return m;
  }
  throw ConstructError("PR sampling exhausted");
}

// PR with the scalar condition broken: perturb the last joint parameter.
inline MeshSpec<Rat> construct_pr_broken(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    MeshSpec<Rat> m = construct_pr(g);
    int i = std::uniform_int_distribution<int>(0, 3)(g);
    Rat delta = rnd::rat_nonzero(g, -9, 9, 3);
    Coeffs<Rat> q = m.q[i];
    // keep the (anti)isogram shape: move b (or e) only
    if (q.a == 0 && q.e == 0)
      q.b = q.b + delta;
    else
      q.e = q.e + delta;
    if (!detail::admissible(q) || !is_reducible(q)) continue;
    m.q[i] = q;
    return m;
  }
  throw ConstructError("PR-broken sampling exhausted");
}

// Explicit PR from user joint parameters: all antiisogram, all gaps zero, so
// flexibility needs the k-product to be 1.
inline MeshSpec<Rat> construct_pr_explicit(const std::array<Rat, 4>& k)
{
  Rat prod = k[0] * k[1] * k[2] * k[3];
  if (prod != 1)
    throw ConstructError("PR joint parameters violate the scalar condition: k1*k2*k3*k4 = " +
                         to_string(prod) + " != 1");
  MeshSpec<Rat> m;
  for (int i = 0; i < 4; ++i) {
    Rat kp = (k[i] == make_rat(-1, 2)) ? k[i] + 2 : k[i] + 1;
    auto q = detail::quad_from_roots(k[i], kp, true);
    if (!q)
      throw ConstructError("joint k" + std::to_string(i + 1) +
                           " admits no admissible antiisogram (k=" + to_string(k[i]) + ")");
    m.q[i] = *q;
    m.F[i] = ProjReal<Rat>::finite(0);
  }
  return m;
}

// HQ: reducible g1 (root k), irreducible g2, reducible g3 (root kap), g4 from
// the half-quadratic proportionality chain. All gaps zero.
inline MeshSpec<Rat> construct_hq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Coeffs<Rat> q2 = detail::random_irreducible(g);
    Rat k = rnd::rat_nonzero(g);
    Rat kap = rnd::rat_nonzero(g);
    auto q1 = detail::quad_from_roots(k, detail::second_root(g, k), true);
    auto q3 = detail::quad_from_roots(kap, detail::second_root(g, kap), false);
    if (!q1 || !q3) continue;
    Coeffs<Rat> q4{k * q2.b / kap, q2.e / (k * kap), k * kap * q2.a, kap * q2.c / k};
    if (!detail::admissible_irreducible(q4)) continue;
    MeshSpec<Rat> m;
    m.q = {*q1, q2, *q3, q4};
    for (auto& f : m.F) f = ProjReal<Rat>::finite(0);
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::HQ) return m;
  }
  throw ConstructError("HQ sampling exhausted");
}

// IR: both couplings carry the same second-chain parameter k'; the quadratic
// cofactors stay distinct so only the bilinear factor is shared.
inline MeshSpec<Rat> construct_ir(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Coeffs<Rat> q1 = detail::random_irreducible(g);
    Coeffs<Rat> q3 = detail::random_irreducible(g);
    Rat kp = rnd::rat_nonzero(g);
    Coeffs<Rat> q2{q1.c / kp, kp * q1.a, q1.e / kp, kp * q1.b};
    Coeffs<Rat> q4{q3.c / kp, kp * q3.a, q3.e / kp, kp * q3.b};
    if (!detail::admissible_irreducible(q2) || !detail::admissible_irreducible(q4)) continue;
    MeshSpec<Rat> m;
    m.q = {q1, q2, q3, q4};
    for (auto& f : m.F) f = ProjReal<Rat>::finite(0);
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::IR) return m;
  }
  throw ConstructError("IR sampling exhausted");
}

// RQ: one rational-quadratic coupling reflected, so linear and quadratic
// factors are both shared.
inline MeshSpec<Rat> construct_rq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Coeffs<Rat> q1 = detail::random_irreducible(g);
    if (q1.a * q1.e == q1.b * q1.c) continue; // that would make the coupling IR
    Rat kp = rnd::rat_nonzero(g);
    Coeffs<Rat> q2{q1.c / kp, kp * q1.a, q1.e / kp, kp * q1.b};
    if (!detail::admissible_irreducible(q2)) continue;
    MeshSpec<Rat> m = reflect_coupling(q1, ProjReal<Rat>::finite(0), q2);
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::RQ) return m;
  }
  throw ConstructError("RQ sampling exhausted");
}

// PQ: the repara parametrization with rational m, reflected.
inline std::optional<std::pair<Coeffs<Rat>, Coeffs<Rat>>> pq_coupling_from(const Rat& m, Rat b1,
                                                                           Rat c1, Rat b2, Rat c2,
                                                                           Rat e2)
{
  if (m == 0 || m == 1 || m == -1) return std::nullopt;
  if (b1 == 0 || c1 == 0 || b2 == 0 || c2 == 0 || e2 == 0) return std::nullopt;
  Rat m2 = m * m;
  Rat L = b2 * c2 * m2 - b1 * c1;
  if (L == 0) return std::nullopt;
  Rat T = 4 * b2 * c2 * m2 - 4 * b1 * c1 - m2 + 1;
  Rat a1 = b1 * b2 * T / (4 * e2 * L);
  Rat e1 = c2 * e2 * m2 / b1;
  Rat a2 = b1 * c1 * T / (4 * e2 * m2 * L);
  Coeffs<Rat> q1{a1, b1, c1, e1}, q2{a2, b2, c2, e2};
  if (!detail::admissible_irreducible(q1) || !detail::admissible_irreducible(q2))
    return std::nullopt;
  return std::make_pair(q1, q2);
}

inline MeshSpec<Rat> construct_pq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Rat m = rnd::rat_nonzero(g, -5, 5, 3);
    auto pair = pq_coupling_from(m, rnd::rat_nonzero(g), rnd::rat_nonzero(g), rnd::rat_nonzero(g),
                                 rnd::rat_nonzero(g), rnd::rat_nonzero(g));
    if (!pair) continue;
    Coupling<Rat> s{pair->first, pair->second, ProjReal<Rat>::finite(0),
                    ProjReal<Rat>::finite(0)};
    auto cl = classify(s);
    if (cl.cls != CClass::purely_quadratic || cl.ev.c4_branch != 1) continue;
    MeshSpec<Rat> mesh = reflect_coupling(pair->first, ProjReal<Rat>::finite(0), pair->second);
    auto rep = is_flexible(mesh);
    if (rep.flexible() && rep.label == MClass::PQ) return mesh;
  }
  throw ConstructError("PQ sampling exhausted");
}

// IQ: both couplings on the involutive chain, bases proportional.
inline MeshSpec<Rat> construct_iq_explicit(const Rat& a1, const Rat& c1, const Rat& a2,
                                           const Rat& b2, const Rat& k1, const Rat& k2)
{
  if (a1 == 0 || c1 == 0 || a2 == 0 || b2 == 0 || k1 == 0 || k2 == 0)
    throw ConstructError("IQ parameters must be nonzero");
  if (a1 * c1 == a2 * b2)
    throw ConstructError("IQ degeneracy a1*c1 = a2*b2: the squared base would split");
  Coeffs<Rat> q1{a1, k1 * a1, c1, k1 * c1};
  Coeffs<Rat> q2{a2, b2, k1 * a2, k1 * b2};
  Coeffs<Rat> q3{a2, k2 * a2, b2, k2 * b2};
  Coeffs<Rat> q4{a1, c1, k2 * a1, k2 * c1};
  for (const auto* q : {&q1, &q2, &q3, &q4})
    if (auto v = dfnpoly_violation(*q))
      throw ConstructError("IQ parameters violate " + *v);
  MeshSpec<Rat> m;
  m.q = {q1, q2, q3, q4};
  for (auto& f : m.F) f = ProjReal<Rat>::finite(0);
  return m;
}

inline MeshSpec<Rat> construct_iq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    try {
      MeshSpec<Rat> m = construct_iq_explicit(rnd::rat_nonzero(g), rnd::rat_nonzero(g),
                                              rnd::rat_nonzero(g), rnd::rat_nonzero(g),
                                              rnd::rat_nonzero(g, -3, 3, 3),
                                              rnd::rat_nonzero(g, -3, 3, 3));
      auto rep = is_flexible(m);
      if (rep.flexible() && rep.label == MClass::IQ) return m;
    } catch (const ConstructError&) {
    }
  }
  throw ConstructError("IQ sampling exhausted");
}

// Q: reflection of a quartic coupling (pseudo-planar or general gap).
inline MeshSpec<Rat> construct_q(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Coeffs<Rat> q1 = detail::random_irreducible(g);
    Coeffs<Rat> q2 = detail::random_irreducible(g);
    ProjReal<Rat> F1 =
        rnd::coin(g) ? ProjReal<Rat>::finite(0) : ProjReal<Rat>::finite(rnd::rat_nonzero(g));
    Coupling<Rat> s{q1, q2, F1, ProjReal<Rat>::finite(0)};
    if (classify(s).cls != CClass::quartic) continue;
    MeshSpec<Rat> m = reflect_coupling(q1, F1, q2);
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::Q) return m;
  }
  throw ConstructError("Q sampling exhausted");
}

// Q from a user seed coupling (quads 1,2 and the interior gap of a document).
inline MeshSpec<Rat> construct_q_reflect(const Coeffs<Rat>& q1, const ProjReal<Rat>& F1,
                                         const Coeffs<Rat>& q2)
{
  for (const auto* q : {&q1, &q2}) {
    if (auto v = dfnpoly_violation(*q)) throw ConstructError("seed quad violates " + *v);
    if (is_singular(*q)) throw ConstructError("seed quad is singular");
  }
  return reflect_coupling(q1, F1, q2);
}

// PR+IR: first coupling on the first chain (k), second purely rational with
// the Moebius closure completed through the adjoint.
inline MeshSpec<Rat> construct_pr_ir(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Coeffs<Rat> q1 = detail::random_irreducible(g);
    Rat k = rnd::rat_nonzero(g);
    Coeffs<Rat> q2{q1.a / k, k * q1.c, q1.b / k, k * q1.e};
    if (!detail::admissible_irreducible(q2)) continue;
    // component relation x3 = k x1
    Mobius<Rat> M{k, Rat(0), Rat(0), Rat(1)};
    detail::PrJoint j3{rnd::coin(g), rnd::rat_nonzero(g),
                       rnd::coin(g) ? ProjReal<Rat>::finite(0) : ProjReal<Rat>::infinity()};
    Mobius<Rat> n3 = detail::pr_matrix(j3.antiiso, j3.k, j3.F);
    auto j4 = detail::joint_from_matrix((n3 * M).adjoint(), g);
    if (!j4) continue;
    auto q3 = detail::quad_from_roots(j3.k, detail::second_root(g, j3.k), j3.antiiso);
    auto q4 = detail::quad_from_roots(j4->k, detail::second_root(g, j4->k), j4->antiiso);
    if (!q3 || !q4) continue;
    MeshSpec<Rat> m;
    m.q = {q1, q2, *q3, *q4};
    m.F = {ProjReal<Rat>::finite(0), ProjReal<Rat>::finite(0), j3.F, j4->F};
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::PR_IR) return m;
  }
  throw ConstructError("PR+IR sampling exhausted");
}

// HQ+IQ: the general-gap seed (F1 = 1) whose reducible second quad pins the
// odd-only shared factor; the second coupling is involutive with matching
// base.
inline MeshSpec<Rat> construct_hq_iq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    // quad 4 = (4a1, 4c1, 4k2 a1, 4k2 c1) needs k2 a1c1 < 1/256 and
    // k2 (a1-c1)^2 < 1/64; keep a1, c1 small and k2 inside (1/2, 3/2)
    std::uniform_int_distribution<long> small(1, 3), den(60, 100), kn(1, 11);
    Rat a1 = make_rat(rnd::coin(g) ? small(g) : -small(g), den(g));
    Rat c1 = make_rat(rnd::coin(g) ? small(g) : -small(g), den(g));
    Rat k2 = make_rat(6 + kn(g), 12); // in (1/2, 3/2)
    Rat c2 = rnd::rat_nonzero(g, -4, 4, 4);
    if (c2 == -1 || c2 == make_rat(-1, 2)) continue;
    Rat b2 = -c2 - 1;
    if (b2 == 0) continue;
    Coeffs<Rat> q1{a1, -a1, c1, -c1};
    Coeffs<Rat> q2{0, b2, c2, 0};
    Coeffs<Rat> q3{1, k2, -1, -k2};
    Coeffs<Rat> q4{4 * a1, 4 * c1, 4 * k2 * a1, 4 * k2 * c1};
    bool ok = true;
    for (const auto* q : {&q1, &q2, &q3, &q4})
      ok = ok && !dfnpoly_violation(*q).has_value() && !is_singular(*q);
    if (!ok || 16 * a1 * c1 == -1) continue;
    MeshSpec<Rat> m;
    m.q = {q1, q2, q3, q4};
    m.F = {ProjReal<Rat>::finite(1), ProjReal<Rat>::finite(0), ProjReal<Rat>::finite(0),
           ProjReal<Rat>::finite(0)};
    auto rep = is_flexible(m);
    if (rep.flexible() && rep.label == MClass::HQ_IQ) return m;
  }
  throw ConstructError("HQ+IQ sampling exhausted");
}

// HQ+PQ: purely-quadratic second coupling, first coupling half-quadratic with
// its substituted factor matched to one alpha branch.
inline MeshSpec<Rat> construct_hq_pq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Rat m = rnd::rat_nonzero(g, -5, 5, 3);
    auto pair = pq_coupling_from(m, rnd::rat_nonzero(g), rnd::rat_nonzero(g), rnd::rat_nonzero(g),
                                 rnd::rat_nonzero(g), rnd::rat_nonzero(g));
    if (!pair) continue;
    const Coeffs<Rat>& q3 = pair->first;
    const Coeffs<Rat>& q4 = pair->second;
    Coupling<Rat> s2{q3, q4, ProjReal<Rat>::finite(0), ProjReal<Rat>::finite(0)};
    auto cl2 = classify(s2);
    if (cl2.cls != CClass::purely_quadratic || cl2.ev.c4_branch != 1 || !cl2.ev.m2) continue;
    auto mr = sqrt_exact(*cl2.ev.m2);
    if (!mr) continue;
    std::array<Rat, 5> al = alphas_pq(q3, q4, *mr, rnd::coin(g) ? +1 : -1);
    if (al[3] == 0) continue; // alpha11 must not vanish
    Rat rho = rnd::rat_nonzero(g, -3, 3, 2);
    Rat k = rho * al[3];
    if (k == 0) continue;
    Coeffs<Rat> q1{rho * al[0], rho * al[2] / (k * k), rho * al[1], rho * al[4] / (k * k)};
    if (!detail::admissible_irreducible(q1)) continue;
    auto q2 = detail::quad_from_roots(k, detail::second_root(g, k), true);
    if (!q2) continue;
    MeshSpec<Rat> mesh;
    mesh.q = {q1, *q2, q3, q4};
    for (auto& f : mesh.F) f = ProjReal<Rat>::finite(0);
    auto rep = is_flexible(mesh);
    if (rep.flexible() && rep.label == MClass::HQ_PQ) return mesh;
  }
  throw ConstructError("HQ+PQ sampling exhausted");
}

// PQ+IQ: a rational-quadratic first coupling whose cofactor satisfies the
// rank-1 compatibility u v = (u-v)^4, matched to a general-gap involutive
// coupling with F3 = +-1 (the physical-model structure).
inline MeshSpec<Rat> construct_pq_iq(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Rat w = rnd::rat_nonzero(g, -6, 6, 4);
    if (w == 1 || w == -1) continue;
    Rat t = (Rat(1) / w - w) / 4;
    Rat sigma = t * (w + Rat(1) / w) / 2;
    Rat u = (sigma + t) / 2, v = (sigma - t) / 2;
    if (u == 0 || v == 0) continue;
    Rat a1 = rnd::rat_nonzero(g, -3, 3, 2);
    Rat b1 = rnd::rat_nonzero(g, -3, 3, 2);
    Rat e1 = u / a1, c1 = v / b1;
    Coeffs<Rat> q1{a1, b1, c1, e1};
    Rat k = rnd::rat_nonzero(g, -3, 3, 2);
    Coeffs<Rat> q2{a1 / k, k * c1, b1 / k, k * e1};
    if (!detail::admissible_irreducible(q1) || !detail::admissible_irreducible(q2)) continue;
    std::array<Rat, 5> al = alphas_rq_chain1(q1, k);
    if (al[3] == 0 || al[0] == 0 || al[1] == 0 || al[2] == 0) continue;
    Rat rho = Rat(1) / al[3];
    Rat a3 = rnd::rat_nonzero(g, -3, 3, 2);
    Rat c3 = a3 * al[1] / al[0];
    Rat a4 = rho * al[0] / (4 * a3);
    Rat b4 = rho * al[2] / (4 * a3);
    if (a4 == 0 || b4 == 0 || c3 == 0) continue;
    Coeffs<Rat> q3{a3, -a3, c3, -c3};
    Coeffs<Rat> q4{a4, b4, -a4, -b4};
    if (256 * a3 * c3 * a4 * b4 == 1) continue;
    bool ok = true;
    for (const auto* q : {&q3, &q4}) ok = ok && !dfnpoly_violation(*q).has_value();
    if (!ok) continue;
    MeshSpec<Rat> mesh;
    mesh.q = {q1, q2, q3, q4};
    mesh.F = {ProjReal<Rat>::finite(0), ProjReal<Rat>::finite(0),
              ProjReal<Rat>::finite(rnd::coin(g) ? 1 : -1), ProjReal<Rat>::finite(0)};
    auto rep = is_flexible(mesh);
    if (rep.flexible() && rep.label == MClass::PQ_IQ) return mesh;
  }
  throw ConstructError("PQ+IQ sampling exhausted");
}

// Equimodular coupling of general type (gap F1 = +-1), reflected.
// Flexible with no real components: the real trace must stay empty. Real
// instances sit on the slice b1 = -a1 (the appendix omegas are imaginary):
//   q1 = (a, -a, v^2 a, -v^2 a), q2 = (a2, u^2 a2, -a2, -u^2 a2),
//   a2 = s/(16 u v a), which pins 256 a1c1a2b2 = 1.
inline MeshSpec<Rat> construct_equimodular_general(Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    Rat v = rnd::rat_nonzero(g, -3, 3, 2);
    Rat u = rnd::rat_nonzero(g, -3, 3, 2);
    Rat a1 = rnd::rat_nonzero(g, -3, 3, 2);
    Rat sgn = rnd::coin(g) ? Rat(1) : Rat(-1);
    Rat a2 = sgn / (16 * u * v * a1);
    Coeffs<Rat> q1{a1, -a1, v * v * a1, -v * v * a1};
    Coeffs<Rat> q2{a2, u * u * a2, -a2, -u * u * a2};
    if (!detail::admissible_irreducible(q1) || !detail::admissible_irreducible(q2)) continue;
    ProjReal<Rat> F1 = ProjReal<Rat>::finite(rnd::coin(g) ? 1 : -1);
    Coupling<Rat> s{q1, q2, F1, ProjReal<Rat>::finite(0)};
    if (classify(s).cls != CClass::equimodular_general) continue;
    MeshSpec<Rat> mesh = reflect_coupling(q1, F1, q2);
    if (is_flexible(mesh).flexible()) return mesh;
  }
  throw ConstructError("equimodular-general sampling exhausted");
}

inline MeshSpec<Rat> construct_random(MClass label, Rng& g)
{
  switch (label) {
    case MClass::PR: return construct_pr(g);
    case MClass::HQ: return construct_hq(g);
    case MClass::IR: return construct_ir(g);
    case MClass::RQ: return construct_rq(g);
    case MClass::PQ: return construct_pq(g);
    case MClass::IQ: return construct_iq(g);
    case MClass::Q: return construct_q(g);
    case MClass::PR_IR: return construct_pr_ir(g);
    case MClass::HQ_IQ: return construct_hq_iq(g);
    case MClass::HQ_PQ: return construct_hq_pq(g);
    case MClass::PQ_IQ: return construct_pq_iq(g);
  }
  throw ConstructError("unknown label");
}

// Random rational nudge of one coefficient, magnitude in [1e-3, 1e-2].
inline MeshSpec<Rat> perturb_one_coefficient(const MeshSpec<Rat>& m, Rng& g)
{
  for (int it = 0; it < detail::kAttempts; ++it) {
    MeshSpec<Rat> out = m;
    int qi = std::uniform_int_distribution<int>(0, 3)(g);
    int ci = std::uniform_int_distribution<int>(0, 3)(g);
    long num = std::uniform_int_distribution<long>(1, 10)(g);
    Rat delta = make_rat(num, 1000) * (rnd::coin(g) ? 1 : -1);
    Coeffs<Rat>& q = out.q[qi];
    Rat* slot = ci == 0 ? &q.a : ci == 1 ? &q.b : ci == 2 ? &q.c : &q.e;
    *slot = *slot + delta;
    if (is_singular(q) || dfnpoly_violation(q).has_value()) continue;
    return out;
  }
  throw ConstructError("perturbation sampling exhausted");
}

} // namespace koko
