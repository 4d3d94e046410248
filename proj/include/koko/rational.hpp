#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace koko {

// Exact scalar of the kernel. All classification equalities are decided on
// this type when the input data is rational.
using Rat = mpq_class;

inline double to_double(const Rat& r) { return r.get_d(); }
inline double to_double(double x) { return x; }

// mpq_class(num, den) does not canonicalize; this does.
inline Rat make_rat(long num, long den)
{
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const Rat& r) { return r.get_str(); }

// Accepts "p/q", plain integers and finite decimals ("-3", "0.25", "1e-3" is
// rejected: exponents are float territory).
inline std::optional<Rat> rat_from_string(const std::string& s)
{
  if (s.empty()) return std::nullopt;
  if (s.find('/') != std::string::npos) {
    try {
      Rat r(s, 10);
      if (r.get_den() == 0) return std::nullopt; // canonicalize would divide by zero
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      return std::nullopt;
    }
  }
  auto dot = s.find('.');
  std::string digits = s;
  std::size_t frac_len = 0;
  if (dot != std::string::npos) {
    frac_len = s.size() - dot - 1;
    digits = s.substr(0, dot) + s.substr(dot + 1);
  }
  if (digits.empty() || digits == "-" || digits == "+") return std::nullopt;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    char c = digits[i];
    if (i == 0 && (c == '-' || c == '+')) continue;
    if (c < '0' || c > '9') return std::nullopt;
  }
  try {
    mpz_class num(digits, 10);
    mpz_class den(1);
    for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
    Rat r(num, den);
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

// Exact square root when the rational is a perfect square.
inline std::optional<Rat> sqrt_exact(const Rat& r)
{
  if (r < 0) return std::nullopt;
  const mpz_class& num = r.get_num();
  const mpz_class& den = r.get_den();
  if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
    return std::nullopt;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
  Rat out(sn, sd);
  out.canonicalize();
  return out;
}

} // namespace koko
