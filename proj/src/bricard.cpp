#include "koko/bricard.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace koko {

namespace {
constexpr double kPi = std::numbers::pi;

void check_open(double v, const char* name)
{
  if (!(v > 0.0 && v < kPi)) throw std::domain_error(std::string(name) + " outside (0, pi)");
}
} // namespace

Coeffs<double> coeffs_from_angles(const QuadAngles& q)
{
  check_open(q.lambda, "lambda");
  check_open(q.gamma, "gamma");
  check_open(q.mu, "mu");
  check_open(q.delta, "delta");
  const double A = std::cos(q.lambda + q.gamma + q.delta) - std::cos(q.mu);
  const double B = std::cos(q.lambda + q.gamma - q.delta) - std::cos(q.mu);
  const double C = std::cos(q.lambda - q.gamma + q.delta) - std::cos(q.mu);
  const double D = 4.0 * std::sin(q.gamma) * std::sin(q.delta);
  const double E = std::cos(q.lambda - q.gamma - q.delta) - std::cos(q.mu);
  return {A / D, B / D, C / D, E / D};
}

std::optional<QuadAngles> angles_from_coeffs(const Coeffs<double>& c, bool* unique)
{
  if (unique) *unique = true;
  const double scale = to_double(coeff_scale(c));
  if (std::abs(c.a) + std::abs(c.b) + std::abs(c.c) + std::abs(c.e) <= 1e-14 * scale) {
    if (unique) *unique = false; // one representative of the family
    return QuadAngles{kPi / 2, kPi / 2, kPi / 2, kPi / 2};
  }
  const double cos_lambda = c.b + c.c - c.a - c.e;
  if (std::abs(cos_lambda) >= 1.0) return std::nullopt;
  const double lambda = std::acos(cos_lambda);
  const double sin_lambda = std::sin(lambda);
  // cot in (0,pi) is a bijection onto R
  const double gamma = std::atan2(sin_lambda, c.b - c.c - c.a + c.e);
  const double delta = std::atan2(sin_lambda, c.c + c.e - c.a - c.b);
  if (!(gamma > 0 && gamma < kPi && delta > 0 && delta < kPi)) return std::nullopt;
  const double D = 4.0 * std::sin(gamma) * std::sin(delta);
  const double cos_mu = std::cos(lambda + gamma + delta) - c.a * D;
  if (std::abs(cos_mu) >= 1.0) return std::nullopt;
  const double mu = std::acos(cos_mu);
  QuadAngles q{lambda, gamma, mu, delta};
  // the three linear relations plus A pin everything; reject if B, C, E drift
  Coeffs<double> back = coeffs_from_angles(q);
  const double err = std::max({std::abs(back.a - c.a), std::abs(back.b - c.b),
                               std::abs(back.c - c.c), std::abs(back.e - c.e)});
  if (err > 1e-9 * std::max(1.0, scale)) return std::nullopt;
  return q;
}

} // namespace koko
