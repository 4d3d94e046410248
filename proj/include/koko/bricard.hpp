#pragma once

#include <array>
#include <optional>
#include <string>

#include "koko/bipoly.hpp"
#include "koko/projreal.hpp"

namespace koko {

// Arc lengths of a spherical quad, all strictly inside (0, pi).
struct QuadAngles {
  double lambda, gamma, mu, delta;
};

struct GapSplit {
  double tau = 0, zeta = 0;
};

// Normalized Bricard coefficients of g(x,y) = a x^2 y^2 + b x^2 + c y^2 + xy + e.
template <class K>
struct Coeffs {
  K a{0}, b{0}, c{0}, e{0};

  Coeffs<double> to_double() const
  {
    return {koko::to_double(a), koko::to_double(b), koko::to_double(c), koko::to_double(e)};
  }
};

template <class K>
BiPoly<K> bricard_poly(const Coeffs<K>& q, std::string u = "x", std::string v = "y")
{
  BiPoly<K> g(u, v);
  g.add_to(2, 2, q.a);
  g.add_to(2, 0, q.b);
  g.add_to(0, 2, q.c);
  g.add_to(1, 1, K(1));
  g.add_to(0, 0, q.e);
  return g;
}

// The F = inf normalization: same curve, coefficients switched so the middle
// term stays +xy.
template <class K>
Coeffs<K> switch_coeffs(const Coeffs<K>& q)
{
  return {K(-q.b), K(-q.a), K(-q.e), K(-q.c)};
}

template <class K>
Coeffs<K> swap_xy(const Coeffs<K>& q)
{
  return {q.a, q.c, q.b, q.e};
}

// Violated inequality of the admissibility set, if any.
template <class K>
std::optional<std::string> dfnpoly_violation(const Coeffs<K>& q, const Tol& tol = {})
{
  const K one{1}, quarter = K(K(1) / K(4));
  K lhs = K(one - K(4) * q.a * q.e - K(4) * q.b * q.c);
  K l2 = K(lhs * lhs);
  K r2 = K(K(64) * q.a * q.b * q.c * q.e);
  if constexpr (is_exact_v<K>) {
    if (!(l2 > r2)) return "(1-4ae-4bc)^2 > 64abce";
    if (!(K((q.a - q.b) * (q.e - q.c)) < quarter)) return "(a-b)(e-c) < 1/4";
    if (!(K((q.a - q.c) * (q.e - q.b)) < quarter)) return "(a-c)(e-b) < 1/4";
  } else {
    double m = std::max({1.0, koko::to_double(l2), koko::to_double(r2)});
    if (koko::to_double(l2) - koko::to_double(r2) <= -tol.rel * m)
      return "(1-4ae-4bc)^2 > 64abce";
    if (koko::to_double(K((q.a - q.b) * (q.e - q.c))) >= 0.25 + tol.rel)
      return "(a-b)(e-c) < 1/4";
    if (koko::to_double(K((q.a - q.c) * (q.e - q.b))) >= 0.25 + tol.rel)
      return "(a-c)(e-b) < 1/4";
  }
  return std::nullopt;
}

template <class K>
K coeff_scale(const Coeffs<K>& q)
{
  K m{1}; // the xy coefficient is pinned at 1
  m = std::max<K>(m, k_abs(q.a));
  m = std::max<K>(m, k_abs(q.b));
  m = std::max<K>(m, k_abs(q.c));
  m = std::max<K>(m, k_abs(q.e));
  return m;
}

// Singular: ae = 0 and bc = 0. These are exactly the (anti)deltoids.
template <class K>
bool is_singular(const Coeffs<K>& q, const Tol& tol = {})
{
  K s = coeff_scale(q);
  return nearly_zero(K(q.a * q.e), K(s * s), tol) && nearly_zero(K(q.b * q.c), K(s * s), tol);
}

// Reducible (given non-singular): a = e = 0 or b = c = 0.
template <class K>
bool is_reducible(const Coeffs<K>& q, const Tol& tol = {})
{
  K s = coeff_scale(q);
  bool ae = nearly_zero(q.a, s, tol) && nearly_zero(q.e, s, tol);
  bool bc = nearly_zero(q.b, s, tol) && nearly_zero(q.c, s, tol);
  return ae || bc;
}

// Which (anti)deltoid / (anti)isogram condition the zero pattern matches
// (shape bookkeeping for reports). Empty when no pair vanishes.
template <class K>
std::string shape_condition(const Coeffs<K>& q, const Tol& tol = {})
{
  K s = coeff_scale(q);
  auto z = [&](const K& v) { return nearly_zero(v, s, tol); };
  if (z(q.b) && z(q.c)) return "isogram (b=c=0)";
  if (z(q.a) && z(q.e)) return "antiisogram (a=e=0)";
  if (z(q.c) && z(q.e)) return "deltoid (c=e=0)";
  if (z(q.a) && z(q.b)) return "antideltoid (a=b=0)";
  if (z(q.b) && z(q.e)) return "deltoid (b=e=0)";
  if (z(q.a) && z(q.c)) return "antideltoid (a=c=0)";
  return "";
}

// Explicit factorization of a reducible non-singular polynomial:
//   a=e=0:  c (k x - y)(k' x - y),  k+k' = -1/c, kk' = b/c
//   b=c=0:  a (x y - k)(x y - k'),  k+k' = -1/a, kk' = e/a
// kk' != 0 always. In exact mode the split needs the discriminant to be a
// rational square; otherwise nullopt (callers fall back to the paired form).
template <class K>
struct ReducibleSplit {
  bool antiiso; // true: a=e=0 kind, factors (k x - y); false: b=c=0, (x y - k)
  K k, kp;
  K lead; // c or a

  BiPoly<K> factor(const K& root, std::string u = "x", std::string v = "y") const
  {
    BiPoly<K> f(u, v);
    if (antiiso) {
      f.add_to(1, 0, root);
      f.add_to(0, 1, K(-1));
    } else {
      f.add_to(1, 1, K(1));
      f.add_to(0, 0, K(-root));
    }
    return f;
  }
};

template <class K>
std::optional<ReducibleSplit<K>> factor_reducible(const Coeffs<K>& q, const Tol& tol = {})
{
  if (is_singular(q, tol) || !is_reducible(q, tol))
    throw std::invalid_argument("factor_reducible: input not non-singular reducible");
  K s = coeff_scale(q);
  bool antiiso = nearly_zero(q.a, s, tol) && nearly_zero(q.e, s, tol);
  K lead = antiiso ? q.c : q.a;
  K other = antiiso ? q.b : q.e;
  K disc = K(K(1) - K(4) * lead * other);
  K root;
  if constexpr (is_exact_v<K>) {
    auto r = sqrt_exact(disc);
    if (!r) return std::nullopt;
    root = *r;
  } else {
    if (disc < 0) return std::nullopt;
    root = std::sqrt(disc);
  }
  K k = K((K(-1) + root) / (K(2) * lead));
  K kp = K((K(-1) - root) / (K(2) * lead));
  return ReducibleSplit<K>{antiiso, k, kp, lead};
}

// Coefficients of x2^i in gtilde (eq-style expansion around the gap Moebius
// substitution); valid for finite F.
template <class K>
struct GapH {
  Poly<K> h2, h1, h0;
};

template <class K>
GapH<K> gap_h(const Coeffs<K>& q, const K& F)
{
  const K F2 = K(F * F);
  Poly<K> h2(std::vector<K>{K(q.e * F2 + q.c), K(-F), K(q.b * F2 + q.a)});
  Poly<K> h1(std::vector<K>{K(K(2) * F * (q.c - q.e)), K(K(1) - F2), K(K(2) * F * (q.a - q.b))});
  Poly<K> h0(std::vector<K>{K(q.c * F2 + q.e), F, K(q.a * F2 + q.b)});
  return {h2, h1, h0};
}

// H^(i): y(1 - F x') - (F + x') for finite F, y x' + 1 at infinity.
template <class K>
BiPoly<K> gap_poly(const ProjReal<K>& F, std::string yn = "y", std::string xn = "x'")
{
  BiPoly<K> h(yn, xn);
  if (F.inf) {
    h.add_to(1, 1, K(1));
    h.add_to(0, 0, K(1));
    return h;
  }
  h.add_to(1, 0, K(1));
  h.add_to(1, 1, K(-F.val));
  h.add_to(0, 0, K(-F.val));
  h.add_to(0, 1, K(-1));
  return h;
}

// gtilde = Res(g, H; y) as a polynomial in (x, x'). F in {0, inf} keeps the
// Bricard shape (rename / coefficient switch); finite F uses the h012
// expansion, which equals the raw Sylvester determinant.
template <class K>
BiPoly<K> eliminate_gap(const Coeffs<K>& q, const ProjReal<K>& F, std::string u = "x",
                        std::string v = "x'")
{
  if (F.inf) return bricard_poly(switch_coeffs(q), u, v);
  if (F.val == K(0)) return bricard_poly(q, u, v);
  GapH<K> h = gap_h(q, F.val);
  BiPoly<K> g(u, v);
  for (int i = 0; i <= h.h2.degree(); ++i) g.add_to(i, 2, h.h2.coeff(i));
  for (int i = 0; i <= h.h1.degree(); ++i) g.add_to(i, 1, h.h1.coeff(i));
  for (int i = 0; i <= h.h0.degree(); ++i) g.add_to(i, 0, h.h0.coeff(i));
  return g;
}

// Reducibility of a quadratic-in-v bivariate polynomial over C, decided by
// whether the v-discriminant is a square in C[u]. Matches coefficient-level
// reducibility for Bricard data and works for general-gap gtilde too.
template <class K>
bool quadratic_reducible(const BiPoly<K>& g, const Tol& tol = {})
{
  if (g.deg_v() != 2) throw std::invalid_argument("quadratic_reducible: deg_v != 2");
  Poly<K> A = g.v_slice(2), B = g.v_slice(1), C = g.v_slice(0);
  Poly<K> disc = B * B - A * C * K(4);
  return poly_is_square_in_C(disc, tol);
}

Coeffs<double> coeffs_from_angles(const QuadAngles& q);

// Inversion of the coefficient map; nullopt when no quad exists. unique is
// cleared when a whole family fits (all-zero coefficients) and the canonical
// all-pi/2 representative is returned.
std::optional<QuadAngles> angles_from_coeffs(const Coeffs<double>& c, bool* unique = nullptr);

} // namespace koko
