#pragma once

#include <optional>
#include <string>

#include "koko/bricard.hpp"

namespace koko {

// Two consecutive quads with their gap parameters. The class of the coupling
// depends on (q1, F1, q2) only; F2 matters for the mesh-level resultants.
template <class K>
struct Coupling {
  Coeffs<K> q1, q2;
  ProjReal<K> F1, F2;
};

enum class CClass {
  purely_rational,
  half_quadratic,
  involutive_rational,
  rational_quadratic,
  purely_quadratic,
  involutive_quadratic,
  quartic,
  equimodular_general, // general type folds IR/RQ/PQ together
};

inline const char* to_string(CClass c)
{
  switch (c) {
    case CClass::purely_rational: return "purely-rational";
    case CClass::half_quadratic: return "half-quadratic";
    case CClass::involutive_rational: return "involutive-rational";
    case CClass::rational_quadratic: return "rational-quadratic";
    case CClass::purely_quadratic: return "purely-quadratic";
    case CClass::involutive_quadratic: return "involutive-quadratic";
    case CClass::quartic: return "quartic";
    case CClass::equimodular_general: return "equimodular(general)";
  }
  return "?";
}

inline bool is_equimodular(CClass c)
{
  return c == CClass::involutive_rational || c == CClass::rational_quadratic ||
         c == CClass::purely_quadratic || c == CClass::equimodular_general;
}

// Re-checkable record of which conditions fired during classification.
template <class K>
struct ClassEvidence {
  bool pseudo_planar = true;
  bool switched = false; // F1 = inf, coefficients switched before testing
  bool red1 = false, red2 = false;
  bool chain1 = false, chain2 = false; // the direct (y2=k x1) and inverse (x1 y2=k') chains
  std::optional<K> k1, k2;             // chain parameters: y2 = k1 x1 / x1 y2 = k2
  int c4_branch = 0;                   // 1..3 when a purely-quadratic system fired
  std::optional<K> m2;                 // common ratio of the first branch
  std::optional<K> c5_ratio;           // common ratio a1/b1 = ... of the involutive chain
  bool f1_pm_one = false;              // general type: F1 = +-1

  std::string describe() const
  {
    std::string s;
    auto add = [&](const std::string& t) {
      if (!s.empty()) s += "; ";
      s += t;
    };
    if (switched) add("F1=inf coefficient switch applied");
    if (red1) add("g~1 reducible");
    if (red2) add("g2 reducible");
    if (chain1) add("direct chain holds, k=" + (k1 ? to_string_any(*k1) : std::string("?")));
    if (chain2) add("inverse chain holds, k'=" + (k2 ? to_string_any(*k2) : std::string("?")));
    if (c4_branch) {
      add("discriminant-ratio system " + std::to_string(c4_branch) +
          (m2 ? " (m^2=" + to_string_any(*m2) + ")" : ""));
    }
    if (c5_ratio) add("involutive chain ratio " + to_string_any(*c5_ratio));
    if (!pseudo_planar && f1_pm_one) add("F1=+-1");
    return s.empty() ? "no condition fired" : s;
  }
};

template <class K>
struct Classified {
  CClass cls;
  ClassEvidence<K> ev;
};

namespace detail {

// k such that (y2 - k x1)^2 | R1, i.e. a1/a2 = b1/c2 = b2/c1 = e2/e1 = k.
template <class K>
std::optional<K> chain1_value(const Coeffs<K>& g1, const Coeffs<K>& g2, const Tol& tol)
{
  std::vector<K> nums = {g1.a, g1.b, g2.b, g2.e};
  std::vector<K> dens = {g2.a, g2.c, g1.c, g1.e};
  auto r = ratio_chain_value(nums, dens, tol);
  if (!r) return std::nullopt;
  if (nearly_zero(r->second, k_abs(r->first), tol)) return std::nullopt; // ratio at infinity
  return K(r->first / r->second);
}

// k' such that (x1 y2 - k')^2 | R1: a1/b2 = b1/e2 = a2/c1 = c2/e1 = 1/k'.
template <class K>
std::optional<K> chain2_value(const Coeffs<K>& g1, const Coeffs<K>& g2, const Tol& tol)
{
  std::vector<K> nums = {g1.a, g1.b, g2.a, g2.c};
  std::vector<K> dens = {g2.b, g2.e, g1.c, g1.e};
  auto r = ratio_chain_value(nums, dens, tol);
  if (!r) return std::nullopt;
  if (nearly_zero(r->first, k_abs(r->second), tol)) return std::nullopt;
  return K(r->second / r->first); // chain value is 1/k'
}

template <class K>
K disc_mid(const Coeffs<K>& g)
{
  return K(K(1) - K(4) * g.a * g.e - K(4) * g.b * g.c);
}

} // namespace detail

// Pseudo-planar decision tree. Requires F1 in {0, inf}; the inf case is
// reduced to 0 by the coefficient switch.
template <class K>
Classified<K> classify_pseudo_planar(const Coupling<K>& c, const Tol& tol = {})
{
  if (!c.F1.pseudo_planar(tol))
    throw std::invalid_argument("classify_pseudo_planar: F1 not in {0, inf}");
  if (is_singular(c.q1, tol) || is_singular(c.q2, tol))
    throw std::invalid_argument("classify: singular coupling");

  ClassEvidence<K> ev;
  ev.pseudo_planar = true;
  Coeffs<K> g1 = c.q1;
  if (c.F1.inf) {
    g1 = switch_coeffs(g1);
    ev.switched = true;
  }
  const Coeffs<K>& g2 = c.q2;

  ev.red1 = is_reducible(g1, tol);
  ev.red2 = is_reducible(g2, tol);
  if (ev.red1 && ev.red2) return {CClass::purely_rational, ev};
  if (ev.red1 || ev.red2) return {CClass::half_quadratic, ev};

  ev.k1 = detail::chain1_value(g1, g2, tol);
  ev.k2 = detail::chain2_value(g1, g2, tol);
  ev.chain1 = ev.k1.has_value();
  ev.chain2 = ev.k2.has_value();
  if (ev.chain1 && ev.chain2) return {CClass::involutive_rational, ev};
  if (ev.chain1 || ev.chain2) return {CClass::rational_quadratic, ev};

  const K d1 = detail::disc_mid(g1), d2 = detail::disc_mid(g2);
  {
    // first discriminant-ratio system: a1c1/a2b2 = d1/d2 = b1e1/c2e2 != 1
    std::vector<K> nums = {K(g1.a * g1.c), d1, K(g1.b * g1.e)};
    std::vector<K> dens = {K(g2.a * g2.b), d2, K(g2.c * g2.e)};
    if (ratio_chain_holds(nums, dens, tol)) {
      std::vector<K> nums1 = nums, dens1 = dens;
      nums1.push_back(K(1));
      dens1.push_back(K(1));
      if (!ratio_chain_holds(nums1, dens1, tol)) {
        ev.c4_branch = 1;
        if (auto r = ratio_chain_value(nums, dens, tol))
          if (!nearly_zero(r->second, k_abs(r->first), tol)) ev.m2 = K(r->first / r->second);
        return {CClass::purely_quadratic, ev};
      }
    }
  }
  {
    const K s = coeff_scale(g1), t = coeff_scale(g2), st = K(s * t);
    bool z1 = nearly_zero(K(g1.b * g1.e), K(s * s), tol) &&
              nearly_zero(K(g2.a * g2.b), K(t * t), tol);
    if (z1 && nearly_zero(K(K(16) * g1.a * g1.c * g2.c * g2.e - d1 * d2), K(st * st), tol)) {
      ev.c4_branch = 2;
      return {CClass::purely_quadratic, ev};
    }
    bool z2 = nearly_zero(K(g1.a * g1.c), K(s * s), tol) &&
              nearly_zero(K(g2.c * g2.e), K(t * t), tol);
    if (z2 && nearly_zero(K(K(16) * g1.b * g1.e * g2.a * g2.b - d1 * d2), K(st * st), tol)) {
      ev.c4_branch = 3;
      return {CClass::purely_quadratic, ev};
    }
  }
  {
    // involutive chain: a1/b1 = c1/e1 = a2/c2 = b2/e2, with a1/a2 != b2/c1
    std::vector<K> nums = {g1.a, g1.c, g2.a, g2.b};
    std::vector<K> dens = {g1.b, g1.e, g2.c, g2.e};
    if (ratio_chain_holds(nums, dens, tol)) {
      const K s = std::max<K>(coeff_scale(g1), coeff_scale(g2));
      if (!nearly_zero(K(g1.a * g1.c - g2.a * g2.b), K(s * s), tol)) {
        if (auto r = ratio_chain_value(nums, dens, tol))
          if (!nearly_zero(r->second, k_abs(r->first), tol)) ev.c5_ratio = K(r->first / r->second);
        return {CClass::involutive_quadratic, ev};
      }
    }
  }
  return {CClass::quartic, ev};
}

// General-gap decision tree for F1 outside {0, inf}.
template <class K>
Classified<K> classify_general(const Coupling<K>& c, const Tol& tol = {})
{
  if (c.F1.pseudo_planar(tol))
    throw std::invalid_argument("classify_general: F1 in {0, inf}");
  if (is_singular(c.q1, tol) || is_singular(c.q2, tol))
    throw std::invalid_argument("classify: singular coupling");

  ClassEvidence<K> ev;
  ev.pseudo_planar = false;
  ev.f1_pm_one = c.F1.is_pm_one(tol);
  const Coeffs<K>& g1 = c.q1;
  const Coeffs<K>& g2 = c.q2;

  ev.red1 = is_reducible(g1, tol); // gtilde1 shares reducibility with g1
  ev.red2 = is_reducible(g2, tol);
  if (ev.red1 && ev.red2) return {CClass::purely_rational, ev};
  if (ev.red1 || ev.red2) return {CClass::half_quadratic, ev};

  const K s1 = coeff_scale(g1), s2 = coeff_scale(g2);
  const K s11 = K(s1 * s1), s22 = K(s2 * s2);
  const K d1 = detail::disc_mid(g1), d2 = detail::disc_mid(g2);
  if (ev.f1_pm_one) {
    // equimodular conditions: a1/e1 = b1/c1, a2/e2 = c2/b2, cross-coupled discriminant ratio
    bool c1 = nearly_zero(K(g1.a * g1.c - g1.b * g1.e), s11, tol);
    bool c2 = nearly_zero(K(g2.a * g2.b - g2.c * g2.e), s22, tol);
    K lhs = K((d1 - K(8) * g1.a * g1.c) * (d2 - K(8) * g2.a * g2.b));
    K rhs = K(K(256) * g1.a * g1.c * g2.a * g2.b);
    if (c1 && c2 && nearly_zero(K(lhs - rhs), K(s11 * s22), tol))
      return {CClass::equimodular_general, ev};
  }
  {
    // involutive chain: all four ratios equal -1
    bool chain = nearly_zero(K(g1.a + g1.b), s1, tol) && nearly_zero(K(g1.c + g1.e), s1, tol) &&
                 nearly_zero(K(g2.a + g2.c), s2, tol) && nearly_zero(K(g2.b + g2.e), s2, tol);
    if (chain) {
      ev.c5_ratio = K(-1);
      if (!ev.f1_pm_one) return {CClass::involutive_quadratic, ev};
      K guard = K(K(256) * g1.a * g1.c * g2.a * g2.b);
      if (!nearly_zero(K(guard - K(1)), std::max<K>(K(1), k_abs(guard)), tol))
        return {CClass::involutive_quadratic, ev};
      ev.c5_ratio.reset();
    }
  }
  return {CClass::quartic, ev};
}

template <class K>
Classified<K> classify(const Coupling<K>& c, const Tol& tol = {})
{
  return c.F1.pseudo_planar(tol) ? classify_pseudo_planar(c, tol) : classify_general(c, tol);
}

// The coupling read from the other end: quads swap order and transpose their
// variable roles, the interior gap flips sign. Same class by the symmetric
// symmetric-extension property; the trailing gap is class-irrelevant.
template <class K>
Coupling<K> reverse(const Coupling<K>& c)
{
  return Coupling<K>{swap_xy(c.q2), swap_xy(c.q1), -c.F1, ProjReal<K>::finite(K(0))};
}

// Discriminants of g1, gtilde1, g2 as quadratics in the eliminated variable
// (eq d2). Delta1' is in y1; Delta1 and Delta2 in x2.
template <class K>
struct Discriminants {
  Poly<K> d1_prime, d1, d2;
};

template <class K>
Discriminants<K> discriminants(const Coupling<K>& c, const Tol& tol = {})
{
  if (is_singular(c.q1, tol) || is_singular(c.q2, tol))
    throw std::invalid_argument("discriminants: singular coupling");
  const Coeffs<K>& g1 = c.q1;
  const Coeffs<K>& g2 = c.q2;
  auto dprime = [](const Coeffs<K>& g) {
    return Poly<K>(std::vector<K>{K(K(-4) * g.b * g.e), K(0), detail::disc_mid(g), K(0),
                                  K(K(-4) * g.a * g.c)});
  };
  Discriminants<K> out;
  out.d1_prime = dprime(g1);
  out.d2 = Poly<K>(std::vector<K>{K(K(-4) * g2.c * g2.e), K(0), detail::disc_mid(g2), K(0),
                                  K(K(-4) * g2.a * g2.b)});
  if (c.F1.inf) {
    // y1 = -1/x2: clear x2^4, which reverses the even coefficient order
    Poly<K> p = out.d1_prime;
    out.d1 = Poly<K>(std::vector<K>{p.coeff(4), K(-p.coeff(3)), p.coeff(2), K(-p.coeff(1)),
                                    p.coeff(0)});
  } else {
    const K F = c.F1.val;
    Poly<K> plus(std::vector<K>{F, K(1)});        // x2 + F
    Poly<K> minus(std::vector<K>{K(1), K(-F)});   // 1 - F x2
    Poly<K> p2 = plus * plus, m2 = minus * minus;
    out.d1 = p2 * p2 * K(K(-4) * g1.a * g1.c) + p2 * m2 * detail::disc_mid(g1) +
             m2 * m2 * K(K(-4) * g1.b * g1.e);
  }
  return out;
}

// Prop real-sol: an equimodular coupling has a real component only in
// pseudo-planar type with the signed ratio chain positive.
template <class K>
bool has_real_components(const Coupling<K>& c, CClass cls, const Tol& tol = {})
{
  if (!is_equimodular(cls))
    throw std::invalid_argument("has_real_components: class not equimodular");
  if (!c.F1.pseudo_planar(tol)) return false;
  Coeffs<K> g1 = c.F1.inf ? switch_coeffs(c.q1) : c.q1;
  const Coeffs<K>& g2 = c.q2;
  std::vector<K> nums = {K(g1.a * g1.c), detail::disc_mid(g1), K(g1.b * g1.e)};
  std::vector<K> dens = {K(g2.a * g2.b), detail::disc_mid(g2), K(g2.c * g2.e)};
  if (!ratio_chain_holds(nums, dens, tol)) return false;
  // the common value must be finite, nonzero and positive
  const K s = std::max<K>(std::max<K>(k_abs(nums[0]), k_abs(nums[1])), k_abs(nums[2]));
  const K t = std::max<K>(std::max<K>(k_abs(dens[0]), k_abs(dens[1])), k_abs(dens[2]));
  for (int i = 0; i < 3; ++i) {
    bool nz = nearly_zero(nums[i], s, tol);
    bool dz = nearly_zero(dens[i], t, tol);
    if (nz != dz) return false;  // ratio 0 or infinity somewhere
    if (!nz && k_sign(K(nums[i] * dens[i])) <= 0) return false;
  }
  return true;
}

// R1 = Res(gtilde1, g2; x2) in (x1, y2).
template <class K>
BiPoly<K> coupling_resultant(const Coupling<K>& c)
{
  BiPoly<K> gt1 = eliminate_gap(c.q1, c.F1, "x1", "x2");
  BiPoly<K> g2 = bricard_poly(c.q2, "x2", "y2");
  return sylvester_resultant(gt1, g2);
}

} // namespace koko
