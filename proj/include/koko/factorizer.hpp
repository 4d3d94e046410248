#pragma once

#include <vector>

#include "koko/coupling.hpp"

namespace koko {

struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Parity { odd_only, even_only, mixed };

inline const char* to_string(Parity p)
{
  switch (p) {
    case Parity::odd_only: return "odd-only";
    case Parity::even_only: return "even-only";
    case Parity::mixed: return "mixed";
  }
  return "?";
}

// Total-degree parity of the nonzero monomials.
template <class K>
Parity odd_even_signature(const BiPoly<K>& p)
{
  bool odd = false, even = false;
  for (int i = 0; i <= p.deg_u(); ++i)
    for (int j = 0; j <= p.deg_v(); ++j)
      if (!(p.coeff(i, j) == K(0))) ((i + j) % 2 ? odd : even) = true;
  if (odd && even) return Parity::mixed;
  return odd ? Parity::odd_only : Parity::even_only;
}

// Moebius substitution on the first variable: u -> (alpha t + beta)/(gamma t + delta),
// cleared by (gamma t + delta)^deg_u.
template <class K>
BiPoly<K> subst_first_mobius(const BiPoly<K>& p, const K& alpha, const K& beta, const K& gamma,
                             const K& delta, std::string new_name = "t")
{
  const int D = std::max(p.deg_u(), 0);
  Poly<K> num(std::vector<K>{beta, alpha});
  Poly<K> den(std::vector<K>{delta, gamma});
  std::vector<Poly<K>> num_pow(D + 1), den_pow(D + 1);
  num_pow[0] = Poly<K>::constant(K(1));
  den_pow[0] = Poly<K>::constant(K(1));
  for (int i = 1; i <= D; ++i) {
    num_pow[i] = num_pow[i - 1] * num;
    den_pow[i] = den_pow[i - 1] * den;
  }
  BiPoly<K> out(new_name, p.v_name());
  for (int i = 0; i <= p.deg_u(); ++i) {
    Poly<K> w = num_pow[i] * den_pow[D - i];
    for (int j = 0; j <= p.deg_v(); ++j) {
      const K& cij = p.coeff(i, j);
      if (cij == K(0)) continue;
      for (int t = 0; t <= w.degree(); ++t)
        if (!(w.coeff(t) == K(0))) out.add_to(t, j, K(cij * w.coeff(t)));
    }
  }
  return out;
}

template <class K>
BiPoly<K> subst_second_mobius(const BiPoly<K>& p, const K& alpha, const K& beta, const K& gamma,
                              const K& delta, std::string new_name = "t")
{
  BiPoly<K> s = subst_first_mobius(p.swap_vars(), alpha, beta, gamma, delta, new_name);
  return s.swap_vars();
}

// Transport a factor of R1(x1, y2) to the (x1, x3) chart through H2.
template <class K>
BiPoly<K> through_gap(const BiPoly<K>& p, const ProjReal<K>& F2, std::string new_name = "x3")
{
  BiPoly<K> r;
  if (F2.inf)
    r = subst_second_mobius(p, K(0), K(-1), K(1), K(0), new_name);
  else if (F2.val == K(0)) {
    r = p;
  } else {
    r = subst_second_mobius(p, K(1), F2.val, K(-F2.val), K(1), new_name);
  }
  r.rename(p.u_name(), new_name);
  return r;
}

template <class K>
struct Factor {
  BiPoly<K> poly;
  int mult = 1;
};

template <class K>
struct FactoredResultant {
  K scalar{1};
  std::vector<Factor<K>> factors;
  bool paired = false;       // conjugate factor pairs merged into rational products
  bool degenerate_pm = false; // both +-m branches coincide

  BiPoly<K> expand() const
  {
    BiPoly<K> acc = BiPoly<K>::constant(scalar, "x1", "y2");
    for (const auto& f : factors)
      for (int i = 0; i < f.mult; ++i) acc = acc * f.poly;
    return acc;
  }
};

// alpha_{ij} of the biquadratic cofactor (a22, a20, a02, a11, a00).
// Column 1: rational-quadratic via the direct chain with value k.
template <class K>
std::array<K, 5> alphas_rq_chain1(const Coeffs<K>& g1, const K& k)
{
  K P = K(g1.a * g1.e - g1.b * g1.c);
  return {K(g1.a * g1.b / (k * k)), K(P * P), K(P * P / (k * k)),
          K((K(2) * P * P - g1.a * g1.e - g1.b * g1.c) / k), K(g1.c * g1.e)};
}

// Column 2: rational-quadratic via the second chain with value k'.
template <class K>
std::array<K, 5> alphas_rq_chain2(const Coeffs<K>& g1, const K& kp)
{
  K P = K(g1.a * g1.e - g1.b * g1.c);
  return {K(P * P / (kp * kp)), K(g1.a * g1.b), K(g1.c * g1.e / (kp * kp)),
          K((K(2) * P * P - g1.a * g1.e - g1.b * g1.c) / kp), K(P * P)};
}

// Column 3: purely-quadratic, one factor per sign of m. The a11 entry of the
// +m branch is the negated table expression (checked against the expanded
// resultant under the repara parametrization).
template <class K>
std::array<K, 5> alphas_pq(const Coeffs<K>& g1, const Coeffs<K>& g2, const K& m, int sign)
{
  const Tol guard_tol{};
  K L = K(g2.b * g2.c * m * m - g1.b * g1.c);
  if (nearly_zero(g1.b, K(1), guard_tol) || nearly_zero(g2.e, K(1), guard_tol) ||
      nearly_zero(m, K(1), guard_tol) || nearly_zero(L, K(1), guard_tol))
    throw FactorizationError("alpha table needs b1, e2, m and b2c2m^2-b1c1 nonzero");
  K sm = sign > 0 ? m : K(-m);
  K Kk = K(K(1) - m * m - K(4) * g1.b * g1.c + K(4) * g2.b * g2.c * m * m);
  K one_pm = K(K(1) + sm);
  K a22 = K(g1.b * Kk / (K(4) * g2.e * m * m));
  K a20 = K(g1.b * g2.b * one_pm * one_pm / (K(4) * L));
  K a02 = K(g1.c * g2.c * one_pm * one_pm / (K(4) * L));
  K a11 = K(K(-sign) * (one_pm * (g1.b * g1.c + sm * m * m * g2.b * g2.c) - K(4) * L * L) /
            (K(2) * m * L));
  K a00 = K(g2.e * L / g1.b);
  return {a22, a20, a02, a11, a00};
}

template <class K>
BiPoly<K> biquadratic_from_alphas(const std::array<K, 5>& al, std::string u = "x1",
                                  std::string v = "y2")
{
  // (a22 u^2 + a02) v^2 + a11 u v + (a20 u^2 + a00)
  BiPoly<K> r(u, v);
  r.add_to(2, 2, al[0]);
  r.add_to(2, 0, al[1]);
  r.add_to(0, 2, al[2]);
  r.add_to(1, 1, al[3]);
  r.add_to(0, 0, al[4]);
  return r;
}

namespace detail {

// Settle the leading scalar: R1 = scalar * product. Throws when the claimed
// shape does not reproduce the resultant.
template <class K>
void settle_scalar(FactoredResultant<K>& fr, const BiPoly<K>& R1, const Tol& tol)
{
  fr.scalar = K(1);
  BiPoly<K> prod = fr.expand();
  auto ratio = proportional(R1, prod, tol);
  if (!ratio) throw FactorizationError("factorization does not match the resultant");
  fr.scalar = K(ratio->first / ratio->second);
}

template <class K>
BiPoly<K> reducible_poly_factor(const ReducibleSplit<K>& sp, const K& root, std::string u,
                                std::string v)
{
  return sp.factor(root, u, v);
}

} // namespace detail

// Certified irreducibility of a biquadratic: a bilinear factor exists iff the
// discriminant in the second variable is a square in C[u].
template <class K>
bool biquadratic_irreducible(const BiPoly<K>& r, const Tol& tol = {})
{
  if (r.deg_v() != 2 || r.deg_u() > 2)
    throw std::invalid_argument("biquadratic_irreducible: not a biquadratic");
  return !quadratic_reducible(r, tol);
}

// Closed-form factorization of R1 per class.
template <class K>
FactoredResultant<K> factor_resultant(const Coupling<K>& c, const Classified<K>& cl,
                                      const Tol& tol = {})
{
  const BiPoly<K> R1 = coupling_resultant(c);
  Coeffs<K> g1 = (c.F1.inf) ? switch_coeffs(c.q1) : c.q1;
  const Coeffs<K>& g2 = c.q2;
  const bool pseudo = c.F1.pseudo_planar(tol);
  FactoredResultant<K> fr;

  switch (cl.cls) {
    case CClass::purely_rational: {
      auto s1 = pseudo ? factor_reducible(g1, tol) : std::optional<ReducibleSplit<K>>();
      auto s2 = factor_reducible(g2, tol);
      if (!pseudo) {
        // reducible gtilde1 with general gap: factor through the split of g1
        // composed with the gap Moebius map; fall back to pairing otherwise
        s1 = factor_reducible(c.q1, tol);
      }
      BiPoly<K> gt1 = eliminate_gap(c.q1, c.F1, "x1", "x2");
      BiPoly<K> g2p = bricard_poly(g2, "x2", "y2");
      if (s1 && s2) {
        std::vector<BiPoly<K>> f1s, f2s;
        if (pseudo) {
          f1s = {s1->factor(s1->k, "x1", "x2"), s1->factor(s1->kp, "x1", "x2")};
        } else {
          for (K root : {s1->k, s1->kp}) {
            BiPoly<K> f = s1->factor(root, "x1", "y1");
            // y1 -> Moebius(x2) through H1
            f1s.push_back(through_gap(f, c.F1, "x2"));
          }
        }
        f2s = {s2->factor(s2->k, "x2", "y2"), s2->factor(s2->kp, "x2", "y2")};
        for (const auto& f1 : f1s)
          for (const auto& f2 : f2s) fr.factors.push_back({sylvester_resultant(f1, f2), 1});
      } else if (s2) {
        for (const auto& f2 : {s2->factor(s2->k, "x2", "y2"), s2->factor(s2->kp, "x2", "y2")})
          fr.factors.push_back({sylvester_resultant(gt1, f2), 1});
        fr.paired = true;
      } else if (s1) {
        std::vector<BiPoly<K>> f1s;
        if (pseudo)
          f1s = {s1->factor(s1->k, "x1", "x2"), s1->factor(s1->kp, "x1", "x2")};
        else
          for (K root : {s1->k, s1->kp})
            f1s.push_back(through_gap(s1->factor(root, "x1", "y1"), c.F1, "x2"));
        for (const auto& f1 : f1s) fr.factors.push_back({sylvester_resultant(f1, g2p), 1});
        fr.paired = true;
      } else {
        fr.factors.push_back({R1, 1});
        fr.paired = true;
      }
      break;
    }
    case CClass::half_quadratic: {
      BiPoly<K> gt1 = eliminate_gap(c.q1, c.F1, "x1", "x2");
      bool red1 = cl.ev.red1;
      if (red1) {
        auto sp = factor_reducible(pseudo ? g1 : c.q1, tol);
        if (!sp) {
          fr.factors.push_back({R1, 1});
          fr.paired = true;
          break;
        }
        for (K root : {sp->k, sp->kp}) {
          BiPoly<K> g2p = bricard_poly(g2, "x2", "y2");
          BiPoly<K> sub;
          if (pseudo) {
            // x2 = root * x1 or x2 = root / x1
            sub = sp->antiiso
                      ? subst_first_mobius(g2p, root, K(0), K(0), K(1), "x1")
                      : subst_first_mobius(g2p, K(0), root, K(1), K(0), "x1");
          } else {
            // y1 = phi(x1) from the split of g1, then x2 = Moebius(y1) via H1
            // x2 = (y1 - F)/(F y1 + 1)
            K F = c.F1.inf ? K(0) : c.F1.val; // F1=inf handled by pseudo path
            // compose x2(y1) with y1(x1)
            K A, B, C, D;
            if (sp->antiiso) { // y1 = root x1
              A = root;
              B = K(0);
              C = K(0);
              D = K(1);
            } else { // y1 = root / x1
              A = K(0);
              B = root;
              C = K(1);
              D = K(0);
            }
            // x2 = (y1 - F)/(F y1 + 1)
            K a2 = K(A - F * C), b2 = K(B - F * D), c2 = K(F * A + C), d2 = K(F * B + D);
            sub = subst_first_mobius(g2p, a2, b2, c2, d2, "x1");
          }
          fr.factors.push_back({sub, 1});
        }
      } else {
        auto sp = factor_reducible(g2, tol);
        if (!sp) {
          fr.factors.push_back({R1, 1});
          fr.paired = true;
          break;
        }
        for (K root : {sp->k, sp->kp}) {
          // x2 = y2/root (antiiso kind) or x2 = root/y2 (iso kind)
          BiPoly<K> sub = sp->antiiso
                              ? subst_second_mobius(gt1, K(1), K(0), K(0), root, "y2")
                              : subst_second_mobius(gt1, K(0), root, K(1), K(0), "y2");
          fr.factors.push_back({sub, 1});
        }
      }
      break;
    }
    case CClass::involutive_rational: {
      if (!cl.ev.k1 || !cl.ev.k2) throw FactorizationError("involutive-rational without chains");
      BiPoly<K> f1("x1", "y2"), f2("x1", "y2");
      f1.add_to(0, 1, K(1));
      f1.add_to(1, 0, K(-*cl.ev.k1)); // y2 - k x1
      f2.add_to(1, 1, K(1));
      f2.add_to(0, 0, K(-*cl.ev.k2)); // x1 y2 - k'
      fr.factors.push_back({f1, 2});
      fr.factors.push_back({f2, 2});
      break;
    }
    case CClass::rational_quadratic: {
      if (!pseudo)
        throw FactorizationError(
            "rational-quadratic general-type real factorization unsupported");
      BiPoly<K> lin("x1", "y2");
      std::array<K, 5> al;
      if (cl.ev.k1) {
        lin.add_to(0, 1, K(1));
        lin.add_to(1, 0, K(-*cl.ev.k1));
        al = alphas_rq_chain1(g1, *cl.ev.k1);
      } else if (cl.ev.k2) {
        lin.add_to(1, 1, K(1));
        lin.add_to(0, 0, K(-*cl.ev.k2));
        al = alphas_rq_chain2(g1, *cl.ev.k2);
      } else {
        throw FactorizationError("rational-quadratic without a chain");
      }
      fr.factors.push_back({lin, 2});
      fr.factors.push_back({biquadratic_from_alphas(al), 1});
      break;
    }
    case CClass::purely_quadratic: {
      if (!pseudo)
        throw FactorizationError("purely-quadratic general-type real factorization unsupported "
                                 "(no real components)");
      if (cl.ev.c4_branch != 1 || !cl.ev.m2)
        throw FactorizationError("purely-quadratic factorization needs the +ratio branch");
      K m;
      if constexpr (is_exact_v<K>) {
        auto r = sqrt_exact(*cl.ev.m2);
        if (!r) throw FactorizationError("m^2 is not a rational square; rerun in float mode");
        m = *r;
      } else {
        if (*cl.ev.m2 < 0) throw FactorizationError("m^2 negative");
        m = std::sqrt(*cl.ev.m2);
      }
      BiPoly<K> rp = biquadratic_from_alphas(alphas_pq(g1, g2, m, +1));
      BiPoly<K> rm = biquadratic_from_alphas(alphas_pq(g1, g2, m, -1));
      if (proportional(rp, rm, tol)) fr.degenerate_pm = true;
      fr.factors.push_back({rp, 1});
      fr.factors.push_back({rm, 1});
      break;
    }
    case CClass::involutive_quadratic: {
      if (pseudo) {
        // (b1/a1) (a2 x1 y2^2 - (a1 x1^2 + c1) y2 + b2 x1)^2
        BiPoly<K> base("x1", "y2");
        base.add_to(1, 2, g2.a);
        base.add_to(2, 1, K(-g1.a));
        base.add_to(0, 1, K(-g1.c));
        base.add_to(1, 0, g2.b);
        fr.factors.push_back({base, 2});
      } else {
        GapH<K> h = gap_h(c.q1, c.F1.val);
        BiPoly<K> base("x1", "y2");
        for (int i = 0; i <= h.h1.degree(); ++i) {
          base.add_to(i, 2, K(g2.a * h.h1.coeff(i)));
          base.add_to(i, 0, K(g2.b * h.h1.coeff(i)));
        }
        for (int i = 0; i <= h.h2.degree(); ++i) base.add_to(i, 1, K(-h.h2.coeff(i)));
        fr.factors.push_back({base, 2});
      }
      break;
    }
    case CClass::equimodular_general: {
      // appendix parametrization: omega1^2 = e1/a1, omega2^2 = e2/a2,
      // y2 = +-omega2 (x1 - omega1)/(x1 + omega1); two squared bilinears when
      // the omegas are rational, otherwise the conjugate pair collapses to
      // one squared real biquadratic
      K w1sq = K(c.q1.e / c.q1.a), w2sq = K(c.q2.e / c.q2.a);
      auto try_rational = [&]() -> bool {
        K w1, w2;
        if constexpr (is_exact_v<K>) {
          auto r1 = sqrt_exact(w1sq), r2 = sqrt_exact(w2sq);
          if (!r1 || !r2) return false;
          w1 = *r1;
          w2 = *r2;
        } else {
          if (w1sq < 0 || w2sq < 0) return false;
          w1 = std::sqrt(w1sq);
          w2 = std::sqrt(w2sq);
        }
        for (int sgn : {+1, -1}) {
          K k = sgn > 0 ? w2 : K(-w2);
          BiPoly<K> f("x1", "y2"); // (x1 + w1) y2 - k (x1 - w1)
          f.add_to(1, 1, K(1));
          f.add_to(0, 1, w1);
          f.add_to(1, 0, K(-k));
          f.add_to(0, 0, K(k * w1));
          fr.factors.push_back({f, 2});
        }
        return true;
      };
      if (!try_rational()) {
        // (x1^2 - w1^2) y2^2 + 4 w1w2 x1 y2 - w2^2 (x1^2 - w1^2), squared
        K prodsq = K(w1sq * w2sq);
        K w1w2;
        if constexpr (is_exact_v<K>) {
          auto r = sqrt_exact(prodsq);
          if (!r)
            throw FactorizationError("equimodular(general): omega product is irrational");
          w1w2 = *r;
        } else {
          if (prodsq < 0)
            throw FactorizationError("equimodular(general): omega product is complex");
          w1w2 = std::sqrt(prodsq);
        }
        BiPoly<K> R1c = R1;
        bool done = false;
        for (int sgn : {+1, -1}) {
          K pw = sgn > 0 ? w1w2 : K(-w1w2);
          BiPoly<K> f("x1", "y2");
          f.add_to(2, 2, K(1));
          f.add_to(0, 2, K(-w1sq));
          f.add_to(1, 1, K(4) * pw);
          f.add_to(2, 0, K(-w2sq));
          f.add_to(0, 0, K(w1sq * w2sq));
          BiPoly<K> sq = f * f;
          if (proportional(R1c, sq, tol)) {
            fr.factors.push_back({f, 2});
            fr.paired = true;
            done = true;
            break;
          }
        }
        if (!done)
          throw FactorizationError("equimodular(general): paired factor did not divide");
      }
      break;
    }
    case CClass::quartic: {
      fr.factors.push_back({R1, 1});
      break;
    }
  }
  detail::settle_scalar(fr, R1, tol);
  return fr;
}

template <class K>
bool verify_factorization(const FactoredResultant<K>& fr, const Coupling<K>& c,
                          const Tol& tol = {})
{
  BiPoly<K> R1 = coupling_resultant(c);
  BiPoly<K> prod = fr.expand();
  if constexpr (is_exact_v<K>) return prod.eq(R1, tol);
  BiPoly<K> diff = prod - R1;
  return nearly_zero(diff.max_abs(), R1.max_abs(), tol);
}

} // namespace koko
