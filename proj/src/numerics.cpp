#include "semsum/numerics.hpp"

#include <cmath>
#include <numbers>

namespace semsum {

namespace {

void check_series_domain(std::uint64_t b, std::uint64_t c) {
  if (c < b + 2)
    throw series_divergence_error("factorial-ratio series diverges unless c >= b + 2");
}

}  // namespace

SeriesResult series_sum_factorial_ratio(std::uint64_t b, std::uint64_t c, double tol,
                                        std::uint64_t max_terms) {
  check_series_domain(b, c);
  const double gap = static_cast<double>(c - b - 1);

  SeriesResult out;
  double term = 1.0;  // s(0) = b! c! / (c! b!)
  for (std::uint64_t k = 0;; ++k) {
    out.value += term;
    out.terms_used = k + 1;
    // Remaining mass after K terms telescopes to s(K) * (b+K+1) / (c-b-1).
    out.tail_bound = term * static_cast<double>(b + k + 1) / gap;
    if (out.tail_bound < tol || out.terms_used >= max_terms) break;
    term *= static_cast<double>(b + k + 1) / static_cast<double>(c + k + 1);
  }
  return out;
}

Rational series_closed_form(std::uint64_t b, std::uint64_t c) {
  check_series_domain(b, c);
  return Rational(c, c - b - 1);
}

double epsilon_bound(double a) {
  if (!(a > 0.0)) throw std::domain_error("epsilon_bound requires a > 0");
  return 3.0 * (1.0 + std::log(a)) / a +
         4.0 * std::exp(1.0 / 12.0) * std::exp2(-a / 2.0);
}

Rational beta_integral(std::uint64_t a, std::uint64_t b, const Rational& c) {
  if (c < 0 || c > 1) throw std::domain_error("beta_integral requires c in [0, 1]");
  Rational power = 1;
  for (std::uint64_t i = 0; i < a + b + 1; ++i) power *= c;
  return Rational(factorial(a) * factorial(b), factorial(a + b + 1)) * power;
}

double beta_integral(std::uint64_t a, std::uint64_t b, double c) {
  return to_double(beta_integral(a, b, Rational(c)));
}

std::pair<double, double> zeta_tail_bounds(std::uint64_t k, double t) {
  if (k < 1) throw std::domain_error("zeta_tail_bounds requires k >= 1");
  if (!(t > 1.0)) throw std::domain_error("zeta_tail_bounds requires t > 1");
  const double lower = std::pow(static_cast<double>(k + 1), -(t - 1.0)) / (t - 1.0);
  const double upper = std::pow(static_cast<double>(k), -(t - 1.0)) / (t - 1.0);
  return {lower, upper};
}

RobbinsBounds robbins_bounds(std::uint64_t m) {
  if (m < 1) throw std::domain_error("robbins_bounds requires m >= 1");
  const double md = static_cast<double>(m);
  const double base = 0.5 * std::log(2.0 * std::numbers::pi) + (md + 0.5) * std::log(md) - md;
  return {base + 1.0 / (12.0 * md + 1.0), base + 1.0 / (12.0 * md)};
}

}  // namespace semsum
