#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>
#include <vector>

#include "koko/rational.hpp"

namespace koko {

// Float-mode equality: relative eps against a caller-supplied scale, absolute
// eps near zero. Exact mode ignores it.
struct Tol {
  double rel = 1e-9;
  double abs = 1e-12;
};

template <class K>
inline constexpr bool is_exact_v = std::is_same_v<K, Rat>;

inline bool nearly_zero(const Rat& v, const Rat&, const Tol&) { return v == 0; }

inline bool nearly_zero(double v, double scale, const Tol& tol)
{
  return std::abs(v) <= std::max(tol.abs, tol.rel * std::abs(scale));
}

inline bool nearly_eq(const Rat& a, const Rat& b, const Tol&) { return a == b; }

inline bool nearly_eq(double a, double b, const Tol& tol)
{
  return nearly_zero(a - b, std::max(std::abs(a), std::abs(b)), tol);
}

template <class K>
inline K k_abs(const K& v)
{
  if constexpr (is_exact_v<K>)
    return v < 0 ? K(-v) : v;
  else
    return std::abs(v);
}

template <class K>
inline int k_sign(const K& v)
{
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

// All 2x2 minors of the 2xN matrix (nums | dens) vanish. This is the
// division-free reading of the proportional chains: a (0,0) column is
// compatible with any ratio, an all-zero matrix passes.
template <class K>
bool ratio_chain_holds(const std::vector<K>& nums, const std::vector<K>& dens,
                       const Tol& tol = {})
{
  if (nums.size() != dens.size() || nums.size() < 2)
    throw std::invalid_argument("ratio_chain_holds: lists must have equal length >= 2");
  const std::size_t n = nums.size();
  K scale = k_abs(K(nums[0] * dens[0]));
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max<K>(scale, k_abs(K(nums[i] * nums[i])));
    scale = std::max<K>(scale, k_abs(K(dens[i] * dens[i])));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!nearly_zero(K(nums[i] * dens[j] - nums[j] * dens[i]), scale, tol)) return false;
  return true;
}

// Common ratio of a rank-1 chain as a (num, den) pair from the first
// non-vacuous column; nullopt if the matrix is all zero.
template <class K>
std::optional<std::pair<K, K>> ratio_chain_value(const std::vector<K>& nums,
                                                 const std::vector<K>& dens,
                                                 const Tol& tol = {})
{
  if (!ratio_chain_holds(nums, dens, tol)) return std::nullopt;
  K scale{0};
  for (std::size_t i = 0; i < nums.size(); ++i) {
    scale = std::max<K>(scale, k_abs(nums[i]));
    scale = std::max<K>(scale, k_abs(dens[i]));
  }
  for (std::size_t i = 0; i < nums.size(); ++i)
    if (!nearly_zero(nums[i], scale, tol) || !nearly_zero(dens[i], scale, tol))
      return std::make_pair(nums[i], dens[i]);
  return std::nullopt;
}

} // namespace koko
