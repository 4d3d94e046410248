#pragma once

#include <vector>

#include "koko/projreal.hpp"

namespace koko {

// 2x2 matrix (p q; r s), ps - qr != 0, acting on the projective line as
// x -> (p x + q)/(r x + s). Scalar multiples are identified.
template <class K>
struct Mobius {
  K p{1}, q{0}, r{0}, s{1};

  static Mobius identity() { return Mobius{}; }

  K det() const { return K(p * s - q * r); }

  Mobius operator*(const Mobius& o) const
  {
    return Mobius{K(p * o.p + q * o.r), K(p * o.q + q * o.s), K(r * o.p + s * o.r),
                  K(r * o.q + s * o.s)};
  }

  Mobius adjoint() const { return Mobius{s, K(-q), K(-r), p}; }

  ProjReal<K> apply(const ProjReal<K>& x, const Tol& tol = {}) const
  {
    K num, den;
    if (x.inf) {
      num = p;
      den = r;
    } else {
      num = K(p * x.val + q);
      den = K(r * x.val + s);
    }
    K scale = std::max<K>(k_abs(num), k_abs(den));
    if (nearly_zero(den, scale, tol)) return ProjReal<K>::infinity();
    return ProjReal<K>::finite(K(num / den));
  }

  bool is_scalar(const Tol& tol = {}) const
  {
    K scale = std::max<K>(std::max<K>(k_abs(p), k_abs(q)), std::max<K>(k_abs(r), k_abs(s)));
    return nearly_zero(q, scale, tol) && nearly_zero(r, scale, tol) &&
           nearly_zero(K(p - s), scale, tol);
  }

  // Projective equality via cross products of the flattened entries.
  bool proj_eq(const Mobius& o, const Tol& tol = {}) const
  {
    const K a[4] = {p, q, r, s};
    const K b[4] = {o.p, o.q, o.r, o.s};
    K scale{0};
    for (int i = 0; i < 4; ++i) scale = std::max<K>(scale, std::max<K>(k_abs(a[i]), k_abs(b[i])));
    scale = K(scale * scale);
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (!nearly_zero(K(a[i] * b[j] - a[j] * b[i]), scale, tol)) return false;
    return true;
  }
};

// Product in listed application order: compose({N1,N2,N3}) = N3*N2*N1, the
// map applying N1 first.
template <class K>
Mobius<K> mobius_compose(const std::vector<Mobius<K>>& ms)
{
  Mobius<K> acc = Mobius<K>::identity();
  for (const auto& m : ms) acc = m * acc;
  return acc;
}

template <class K>
bool mobius_is_scalar(const Mobius<K>& m, const Tol& tol = {})
{
  return m.is_scalar(tol);
}

} // namespace koko
