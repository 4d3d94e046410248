#pragma once

#include <optional>
#include <vector>

#include "koko/scalar.hpp"

namespace koko {

// Univariate polynomial, coefficients ascending. Used for discriminants,
// square tests and quadratic chain solving; the bivariate grid lives in
// bipoly.hpp.
template <class K>
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(const K& v) { return Poly(std::vector<K>{v}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  K coeff(int i) const
  {
    return (i >= 0 && i < static_cast<int>(c_.size())) ? c_[i] : K(0);
  }
  const std::vector<K>& coeffs() const { return c_; }

  K max_abs() const
  {
    K m{0};
    for (const auto& v : c_) m = std::max<K>(m, k_abs(v));
    return m;
  }

  void set(int i, const K& v)
  {
    if (i >= static_cast<int>(c_.size())) c_.resize(i + 1, K(0));
    c_[i] = v;
    trim();
  }

  template <class A>
  A eval(const A& x) const
  {
    A acc{};
    for (int i = degree(); i >= 0; --i) acc = acc * x + A(to_double_if<A>(c_[i]));
    return acc;
  }
  K operator()(const K& x) const
  {
    K acc{0};
    for (int i = degree(); i >= 0; --i) acc = K(acc * x + c_[i]);
    return acc;
  }

  Poly operator+(const Poly& o) const
  {
    std::vector<K> r(std::max(c_.size(), o.c_.size()), K(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = K(r[i] + o.c_[i]);
    return Poly(std::move(r));
  }
  Poly operator-(const Poly& o) const
  {
    std::vector<K> r(std::max(c_.size(), o.c_.size()), K(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] = K(r[i] - o.c_[i]);
    return Poly(std::move(r));
  }
  Poly operator*(const Poly& o) const
  {
    if (is_zero() || o.is_zero()) return Poly();
    std::vector<K> r(c_.size() + o.c_.size() - 1, K(0));
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] = K(r[i + j] + c_[i] * o.c_[j]);
    return Poly(std::move(r));
  }
  Poly operator*(const K& s) const
  {
    std::vector<K> r(c_);
    for (auto& v : r) v = K(v * s);
    return Poly(std::move(r));
  }
  Poly operator-() const { return *this * K(-1); }

  bool eq(const Poly& o, const Tol& tol = {}) const
  {
    K scale = std::max<K>(max_abs(), o.max_abs());
    int d = std::max(degree(), o.degree());
    for (int i = 0; i <= d; ++i)
      if (!nearly_zero(K(coeff(i) - o.coeff(i)), scale, tol)) return false;
    return true;
  }

private:
  template <class A>
  static double to_double_if(const K& v)
  {
    return to_double(v);
  }

  void trim()
  {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<K> c_;
};

// Exact (or tolerance-checked) division; nullopt when not divisible.
template <class K>
std::optional<Poly<K>> poly_div_exact(const Poly<K>& p, const Poly<K>& d, const Tol& tol = {})
{
  if (d.is_zero()) throw std::invalid_argument("poly_div_exact: zero divisor");
  if (p.is_zero()) return Poly<K>();
  if (p.degree() < d.degree()) return std::nullopt;
  std::vector<K> rem(p.coeffs());
  std::vector<K> q(p.degree() - d.degree() + 1, K(0));
  const K lead = d.coeff(d.degree());
  const K scale = p.max_abs();
  for (int i = p.degree(); i >= d.degree(); --i) {
    K t = K(rem[i] / lead);
    q[i - d.degree()] = t;
    for (int j = 0; j <= d.degree(); ++j)
      rem[i - d.degree() + j] = K(rem[i - d.degree() + j] - t * d.coeff(j));
  }
  for (const auto& v : rem)
    if (!nearly_zero(v, scale, tol)) return std::nullopt;
  return Poly<K>(std::move(q));
}

// Is p a square in C[x]? Testing the monic part suffices: the leading scalar
// always has a complex square root.
template <class K>
bool poly_is_square_in_C(const Poly<K>& p, const Tol& tol = {})
{
  if (p.is_zero()) return true;
  int d = p.degree();
  if (d % 2 != 0) return false;
  if (d == 0) return true;
  const K lead = p.coeff(d);
  const int h = d / 2;
  std::vector<K> s(h + 1, K(0));
  s[h] = K(1);
  // match coefficients of the monic part from the top down
  for (int i = h - 1; i >= 0; --i) {
    K acc{0};
    for (int j = i + 1; j < h; ++j)
      if (h + i - j <= h) acc = K(acc + s[j] * s[h + i - j]);
    s[i] = K((p.coeff(d - (h - i)) / lead - acc) / K(2));
  }
  Poly<K> sq = Poly<K>(s) * Poly<K>(s) * lead;
  return sq.eq(p, tol);
}

} // namespace koko
