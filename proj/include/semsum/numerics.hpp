#pragma once

#include <cstdint>
#include <utility>

#include "semsum/errors.hpp"
#include "semsum/rational.hpp"

namespace semsum {

// Partial sum of a factorial-ratio series plus a rigorous bound on the
// remaining mass: the true sum lies in [value, value + tail_bound].
struct SeriesResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::uint64_t terms_used = 0;
};

inline constexpr std::uint64_t kDefaultSeriesMaxTerms = 1u << 22;

// Sum over k >= 0 of s(k) = (b+k)! c! / ((c+k)! b!), for integers
// 0 <= b <= c - 2. Terms are accumulated until the tail certificate
// s(K) * (b+K+1) / (c-b-1) drops below tol or max_terms is reached; the
// certificate is returned as tail_bound either way.
SeriesResult series_sum_factorial_ratio(std::uint64_t b, std::uint64_t c, double tol,
                                        std::uint64_t max_terms = kDefaultSeriesMaxTerms);

// Closed form c / (c - b - 1) of the same series (verified against partial
// sums by the test suite before being relied on anywhere).
Rational series_closed_form(std::uint64_t b, std::uint64_t c);

// epsilon(a) = 3(1 + ln a)/a + 4 e^{1/12} 2^{-a/2}, for a > 0.
double epsilon_bound(double a);

// Integral of (c - x)^a x^b over [0, c] = a! b! / (a+b+1)! * c^(a+b+1).
Rational beta_integral(std::uint64_t a, std::uint64_t b, const Rational& c);
double beta_integral(std::uint64_t a, std::uint64_t b, double c);

// Bounds on the zeta tail sum_{j=k+1..inf} j^-t, for k >= 1 and t > 1:
// lower = (k+1)^{-(t-1)}/(t-1), upper = k^{-(t-1)}/(t-1).
std::pair<double, double> zeta_tail_bounds(std::uint64_t k, double t);

// Stirling bounds on m!, kept in log space: log_lower <= log(m!) <= log_upper.
struct RobbinsBounds {
  double log_lower = 0.0;
  double log_upper = 0.0;
};
RobbinsBounds robbins_bounds(std::uint64_t m);

}  // namespace semsum
