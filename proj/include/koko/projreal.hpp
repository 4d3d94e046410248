#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "koko/scalar.hpp"

namespace koko {

inline std::string to_string_any(const Rat& r) { return to_string(r); }
inline std::string to_string_any(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Point of RP^1: a finite scalar or the infinity tag. Infinity is never
// encoded as a large float.
template <class K>
struct ProjReal {
  bool inf = false;
  K val{0};

  static ProjReal infinity() { return ProjReal{true, K(0)}; }
  static ProjReal finite(const K& v) { return ProjReal{false, v}; }

  bool is_zero(const Tol& tol = {}) const { return !inf && nearly_zero(val, K(1), tol); }
  bool is_pm_one(const Tol& tol = {}) const
  {
    return !inf && (nearly_eq(val, K(1), tol) || nearly_eq(val, K(-1), tol));
  }
  bool pseudo_planar(const Tol& tol = {}) const { return inf || is_zero(tol); }

  ProjReal operator-() const { return inf ? *this : finite(K(-val)); }

  bool eq(const ProjReal& o, const Tol& tol = {}) const
  {
    if (inf != o.inf) return false;
    return inf || nearly_eq(val, o.val, tol);
  }

  std::string str() const { return inf ? "inf" : to_string_any(val); }
};

// Gap parameter from the two fixed dihedral offsets: F = tan((zeta+tau)/2),
// infinite when zeta+tau is an odd multiple of pi.
inline ProjReal<double> gap_from_angles(double tau, double zeta, double eps = 1e-12)
{
  double h = (tau + zeta) / 2.0;
  if (std::abs(std::cos(h)) <= eps) return ProjReal<double>::infinity();
  return ProjReal<double>::finite(std::tan(h));
}

} // namespace koko
