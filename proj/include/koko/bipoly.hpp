#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>

#include "koko/poly.hpp"

namespace koko {

// Dense bivariate polynomial c[i][j] u^i v^j with tight degree bounds.
// The zero polynomial has degree (-1,-1) and an empty grid.
template <class K>
class BiPoly {
public:
  BiPoly() : du_(-1), dv_(-1) {}
  BiPoly(std::string u, std::string v) : du_(-1), dv_(-1), un_(std::move(u)), vn_(std::move(v)) {}

  static BiPoly constant(const K& k, std::string u = "x", std::string v = "y")
  {
    BiPoly p(std::move(u), std::move(v));
    if (!(k == K(0))) {
      p.du_ = p.dv_ = 0;
      p.c_ = {k};
    }
    return p;
  }

  static BiPoly monomial(const K& k, int i, int j, std::string u = "x", std::string v = "y")
  {
    BiPoly p(std::move(u), std::move(v));
    p.set(i, j, k);
    return p;
  }

  int deg_u() const { return du_; }
  int deg_v() const { return dv_; }
  bool is_zero() const { return du_ < 0; }
  const std::string& u_name() const { return un_; }
  const std::string& v_name() const { return vn_; }
  void rename(std::string u, std::string v)
  {
    un_ = std::move(u);
    vn_ = std::move(v);
  }

  K coeff(int i, int j) const
  {
    if (i < 0 || j < 0 || i > du_ || j > dv_) return K(0);
    return c_[static_cast<std::size_t>(i) * (dv_ + 1) + j];
  }

  void set(int i, int j, const K& v)
  {
    grow(i, j);
    c_[static_cast<std::size_t>(i) * (dv_ + 1) + j] = v;
    normalize();
  }

  void add_to(int i, int j, const K& v)
  {
    grow(i, j);
    auto& slot = c_[static_cast<std::size_t>(i) * (dv_ + 1) + j];
    slot = K(slot + v);
    normalize();
  }

  K max_abs() const
  {
    K m{0};
    for (const auto& v : c_) m = std::max<K>(m, k_abs(v));
    return m;
  }

  BiPoly operator+(const BiPoly& o) const
  {
    BiPoly r(un_, vn_);
    r.reserve(std::max(du_, o.du_), std::max(dv_, o.dv_));
    for (int i = 0; i <= r.du_; ++i)
      for (int j = 0; j <= r.dv_; ++j) r.raw(i, j) = K(coeff(i, j) + o.coeff(i, j));
    r.normalize();
    return r;
  }
  BiPoly operator-(const BiPoly& o) const
  {
    BiPoly r(un_, vn_);
    r.reserve(std::max(du_, o.du_), std::max(dv_, o.dv_));
    for (int i = 0; i <= r.du_; ++i)
      for (int j = 0; j <= r.dv_; ++j) r.raw(i, j) = K(coeff(i, j) - o.coeff(i, j));
    r.normalize();
    return r;
  }
  BiPoly operator*(const BiPoly& o) const
  {
    if (is_zero() || o.is_zero()) return BiPoly(un_, vn_);
    BiPoly r(un_, vn_);
    r.reserve(du_ + o.du_, dv_ + o.dv_);
    for (int i = 0; i <= du_; ++i)
      for (int j = 0; j <= dv_; ++j) {
        if (coeff(i, j) == K(0)) continue;
        for (int k = 0; k <= o.du_; ++k)
          for (int l = 0; l <= o.dv_; ++l) {
            auto& slot = r.raw(i + k, j + l);
            slot = K(slot + coeff(i, j) * o.coeff(k, l));
          }
      }
    r.normalize();
    return r;
  }
  BiPoly operator*(const K& s) const
  {
    BiPoly r(*this);
    for (auto& v : r.c_) v = K(v * s);
    r.normalize();
    return r;
  }
  BiPoly operator-() const { return *this * K(-1); }

  bool eq(const BiPoly& o, const Tol& tol = {}) const
  {
    K scale = std::max<K>(max_abs(), o.max_abs());
    for (int i = 0; i <= std::max(du_, o.du_); ++i)
      for (int j = 0; j <= std::max(dv_, o.dv_); ++j)
        if (!nearly_zero(K(coeff(i, j) - o.coeff(i, j)), scale, tol)) return false;
    return true;
  }

  // Slice by power of v: polynomial in u multiplying v^j.
  Poly<K> v_slice(int j) const
  {
    std::vector<K> c(du_ >= 0 ? du_ + 1 : 0, K(0));
    for (int i = 0; i <= du_; ++i) c[i] = coeff(i, j);
    return Poly<K>(std::move(c));
  }
  Poly<K> u_slice(int i) const
  {
    std::vector<K> c(dv_ >= 0 ? dv_ + 1 : 0, K(0));
    for (int j = 0; j <= dv_; ++j) c[j] = coeff(i, j);
    return Poly<K>(std::move(c));
  }

  // p(u0, v) as a univariate polynomial in v.
  Poly<K> eval_u(const K& u0) const
  {
    std::vector<K> c(dv_ >= 0 ? dv_ + 1 : 0, K(0));
    for (int j = 0; j <= dv_; ++j) {
      K acc{0};
      for (int i = du_; i >= 0; --i) acc = K(acc * u0 + coeff(i, j));
      c[j] = acc;
    }
    return Poly<K>(std::move(c));
  }
  Poly<K> eval_v(const K& v0) const
  {
    std::vector<K> c(du_ >= 0 ? du_ + 1 : 0, K(0));
    for (int i = 0; i <= du_; ++i) {
      K acc{0};
      for (int j = dv_; j >= 0; --j) acc = K(acc * v0 + coeff(i, j));
      c[i] = acc;
    }
    return Poly<K>(std::move(c));
  }

  K operator()(const K& u0, const K& v0) const { return eval_u(u0)(v0); }

  template <class A>
  A eval(const A& u0, const A& v0) const
  {
    A acc{};
    for (int i = du_; i >= 0; --i) {
      A row{};
      for (int j = dv_; j >= 0; --j) row = row * v0 + A(to_double(coeff(i, j)));
      acc = acc * u0 + row;
    }
    return acc;
  }

  BiPoly swap_vars() const
  {
    BiPoly r(vn_, un_);
    if (is_zero()) return r;
    r.reserve(dv_, du_);
    for (int i = 0; i <= du_; ++i)
      for (int j = 0; j <= dv_; ++j) r.raw(j, i) = coeff(i, j);
    r.normalize();
    return r;
  }

  std::string str() const
  {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = du_; i >= 0; --i)
      for (int j = dv_; j >= 0; --j) {
        if (coeff(i, j) == K(0)) continue;
        if (!first) os << " + ";
        os << "(" << coeff(i, j) << ")";
        if (i) os << "*" << un_ << "^" << i;
        if (j) os << "*" << vn_ << "^" << j;
        first = false;
      }
    return os.str();
  }

private:
  void reserve(int du, int dv)
  {
    du_ = du;
    dv_ = dv;
    c_.assign(static_cast<std::size_t>(du + 1) * (dv + 1), K(0));
  }
  K& raw(int i, int j) { return c_[static_cast<std::size_t>(i) * (dv_ + 1) + j]; }
  void grow(int i, int j)
  {
    if (i <= du_ && j <= dv_) return;
    int ndu = std::max(i, du_), ndv = std::max(j, dv_);
    std::vector<K> nc(static_cast<std::size_t>(ndu + 1) * (ndv + 1), K(0));
    for (int a = 0; a <= du_; ++a)
      for (int b = 0; b <= dv_; ++b) nc[static_cast<std::size_t>(a) * (ndv + 1) + b] = coeff(a, b);
    c_ = std::move(nc);
    du_ = ndu;
    dv_ = ndv;
  }
  void normalize()
  {
    int ndu = -1, ndv = -1;
    for (int i = 0; i <= du_; ++i)
      for (int j = 0; j <= dv_; ++j)
        if (!(coeff(i, j) == K(0))) {
          ndu = std::max(ndu, i);
          ndv = std::max(ndv, j);
        }
    if (ndu == du_ && ndv == dv_) return;
    if (ndu < 0) {
      c_.clear();
      du_ = dv_ = -1;
      return;
    }
    std::vector<K> nc(static_cast<std::size_t>(ndu + 1) * (ndv + 1));
    for (int i = 0; i <= ndu; ++i)
      for (int j = 0; j <= ndv; ++j) nc[static_cast<std::size_t>(i) * (ndv + 1) + j] = coeff(i, j);
    c_ = std::move(nc);
    du_ = ndu;
    dv_ = ndv;
  }

  int du_, dv_;
  std::vector<K> c_;
  std::string un_ = "x", vn_ = "y";
};

// Exact quotient p / d, or nullopt. Long division in u with exact univariate
// division of the v-coefficients; in float mode the residual must stay under
// tol.rel * |p|.
template <class K>
std::optional<BiPoly<K>> poly_divide_exact(const BiPoly<K>& p, const BiPoly<K>& d,
                                           const Tol& tol = {})
{
  if (d.is_zero()) throw std::invalid_argument("poly_divide_exact: zero divisor");
  if (p.is_zero()) return BiPoly<K>(p.u_name(), p.v_name());
  if (p.deg_u() < d.deg_u() || p.deg_v() < d.deg_v()) return std::nullopt;

  const K scale = p.max_abs();
  BiPoly<K> rem = p;
  BiPoly<K> q(p.u_name(), p.v_name());
  const int dd = d.deg_u();
  const Poly<K> lead = [&] {
    std::vector<K> c(d.deg_v() + 1, K(0));
    for (int j = 0; j <= d.deg_v(); ++j) c[j] = d.coeff(dd, j);
    return Poly<K>(std::move(c));
  }();

  while (!rem.is_zero() && rem.deg_u() >= dd) {
    const int i = rem.deg_u();
    auto qi = poly_div_exact(rem.u_slice(i), lead, tol);
    if (!qi) return std::nullopt;
    for (int j = 0; j <= qi->degree(); ++j)
      if (!(qi->coeff(j) == K(0))) q.add_to(i - dd, j, qi->coeff(j));
    // rem -= u^(i-dd) * qi(v) * d
    BiPoly<K> term(p.u_name(), p.v_name());
    for (int j = 0; j <= qi->degree(); ++j)
      if (!(qi->coeff(j) == K(0))) term.add_to(i - dd, j, qi->coeff(j));
    rem = rem - term * d;
    if (!rem.is_zero() && rem.deg_u() >= i) return std::nullopt; // no progress
  }
  if (!rem.is_zero()) {
    if (is_exact_v<K>) return std::nullopt;
    if (!nearly_zero(rem.max_abs(), scale, tol)) return std::nullopt;
  }
  return q;
}

// Rank-1 test on the two coefficient grids: p = (num/den) * q with a
// division-free cross check. Returns the (num, den) pair or nullopt.
template <class K>
std::optional<std::pair<K, K>> proportional(const BiPoly<K>& p, const BiPoly<K>& q,
                                            const Tol& tol = {})
{
  if (p.is_zero() && q.is_zero()) return std::make_pair(K(1), K(1));
  if (p.is_zero() || q.is_zero()) return std::nullopt;
  if (p.deg_u() != q.deg_u() || p.deg_v() != q.deg_v()) return std::nullopt;
  const K sp = p.max_abs(), sq = q.max_abs();
  // reference entry: largest |p_ij| + |q_ij|
  int ri = 0, rj = 0;
  K best{-1};
  for (int i = 0; i <= p.deg_u(); ++i)
    for (int j = 0; j <= p.deg_v(); ++j) {
      K w = K(k_abs(p.coeff(i, j)) + k_abs(q.coeff(i, j)));
      if (w > best) {
        best = w;
        ri = i;
        rj = j;
      }
    }
  const K pr = p.coeff(ri, rj), qr = q.coeff(ri, rj);
  const K scale = K(sp * sq);
  for (int i = 0; i <= p.deg_u(); ++i)
    for (int j = 0; j <= p.deg_v(); ++j)
      if (!nearly_zero(K(p.coeff(i, j) * qr - q.coeff(i, j) * pr), scale, tol))
        return std::nullopt;
  if (nearly_zero(qr, sq, tol)) return std::nullopt; // q entirely zero where p is not
  return std::make_pair(pr, qr);
}

namespace detail {

template <class K>
BiPoly<K> det_memo(const std::vector<std::vector<BiPoly<K>>>& m, std::uint32_t mask,
                   std::map<std::uint32_t, BiPoly<K>>& memo, int n)
{
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  int row = __builtin_popcount(mask);
  BiPoly<K> acc;
  if (row == n) {
    acc = BiPoly<K>::constant(K(1));
  } else {
    int parity = 0;
    for (int c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      if (!m[row][c].is_zero()) {
        BiPoly<K> sub = det_memo(m, mask | (1u << c), memo, n);
        BiPoly<K> term = m[row][c] * sub;
        acc = (parity % 2 == 0) ? acc + term : acc - term;
      }
      ++parity;
    }
  }
  memo.emplace(mask, acc);
  return acc;
}

template <class K>
Poly<K> det_memo_uni(const std::vector<std::vector<Poly<K>>>& m, std::uint32_t mask,
                     std::map<std::uint32_t, Poly<K>>& memo, int n)
{
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  int row = __builtin_popcount(mask);
  Poly<K> acc;
  if (row == n) {
    acc = Poly<K>::constant(K(1));
  } else {
    int parity = 0;
    for (int c = 0; c < n; ++c) {
      if (mask & (1u << c)) continue;
      if (!m[row][c].is_zero()) {
        Poly<K> term = m[row][c] * det_memo_uni(m, mask | (1u << c), memo, n);
        acc = (parity % 2 == 0) ? acc + term : acc - term;
      }
      ++parity;
    }
  }
  memo.emplace(mask, acc);
  return acc;
}

} // namespace detail

// Resultant of two polynomials sharing BOTH variables, eliminating v: the
// Sylvester determinant with univariate entries in u. Vanishing identically
// certifies a common factor of positive v-degree.
template <class K>
Poly<K> resultant_wrt_v(const BiPoly<K>& p, const BiPoly<K>& q)
{
  if (p.is_zero() || q.is_zero()) throw std::invalid_argument("resultant_wrt_v: zero input");
  const int m = p.deg_v(), n = q.deg_v();
  if (m <= 0 && n <= 0) throw std::invalid_argument("resultant_wrt_v: nothing to eliminate");
  if (m <= 0) {
    Poly<K> base = p.v_slice(0), acc = Poly<K>::constant(K(1));
    for (int i = 0; i < n; ++i) acc = acc * base;
    return acc;
  }
  if (n <= 0) {
    Poly<K> base = q.v_slice(0), acc = Poly<K>::constant(K(1));
    for (int i = 0; i < m; ++i) acc = acc * base;
    return acc;
  }
  const int N = m + n;
  std::vector<std::vector<Poly<K>>> mat(N, std::vector<Poly<K>>(N));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) mat[r][r + (m - k)] = p.v_slice(k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) mat[n + r][r + (n - k)] = q.v_slice(k);
  std::map<std::uint32_t, Poly<K>> memo;
  return detail::det_memo_uni(mat, 0u, memo, N);
}

// Sylvester resultant eliminating p's second variable, which is q's first:
// p in (u,v), q in (v,w) -> det Syl_v(p,q) in (u,w). Degenerate conventions:
// deg_v p = 0 gives p^deg_v(q); both constant in v is an error.
template <class K>
BiPoly<K> sylvester_resultant(const BiPoly<K>& p, const BiPoly<K>& q)
{
  if (p.is_zero() || q.is_zero())
    throw std::invalid_argument("sylvester_resultant: zero input");
  const int m = p.deg_v();
  const int n = q.deg_u();
  if (m <= 0 && n <= 0) throw std::invalid_argument("sylvester_resultant: nothing to eliminate");

  const std::string un = p.u_name(), wn = q.v_name();
  // rows of p-coefficients are polynomials in u; rows of q-coefficients in w
  auto p_entry = [&](int k) { // coeff of v^k as BiPoly in (u,w)
    BiPoly<K> e(un, wn);
    Poly<K> s = p.v_slice(k);
    for (int i = 0; i <= s.degree(); ++i)
      if (!(s.coeff(i) == K(0))) e.add_to(i, 0, s.coeff(i));
    return e;
  };
  auto q_entry = [&](int k) {
    BiPoly<K> e(un, wn);
    Poly<K> s = q.u_slice(k); // coeff of v^k: polynomial in w
    for (int j = 0; j <= s.degree(); ++j)
      if (!(s.coeff(j) == K(0))) e.add_to(0, j, s.coeff(j));
    return e;
  };

  if (m <= 0) { // p constant in v
    BiPoly<K> base = p_entry(0), acc = BiPoly<K>::constant(K(1), un, wn);
    for (int i = 0; i < n; ++i) acc = acc * base;
    acc.rename(un, wn);
    return acc;
  }
  if (n <= 0) {
    BiPoly<K> base = q_entry(0), acc = BiPoly<K>::constant(K(1), un, wn);
    for (int i = 0; i < m; ++i) acc = acc * base;
    acc.rename(un, wn);
    return acc;
  }

  const int N = m + n;
  std::vector<std::vector<BiPoly<K>>> mat(N, std::vector<BiPoly<K>>(N, BiPoly<K>(un, wn)));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) mat[r][r + (m - k)] = p_entry(k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) mat[n + r][r + (n - k)] = q_entry(k);

  std::map<std::uint32_t, BiPoly<K>> memo;
  BiPoly<K> det = detail::det_memo(mat, 0u, memo, N);
  det.rename(un, wn);
  return det;
}

} // namespace koko
