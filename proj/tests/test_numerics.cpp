#include <doctest.h>

#include <cmath>

#include "semsum/numerics.hpp"
#include "semsum/rng.hpp"

using namespace semsum;

TEST_CASE("series telescopes to known values") {
  // terms 6/((k+2)(k+3)) telescope to 3
  const auto r13 = series_sum_factorial_ratio(1, 3, 1e-9);
  CHECK(r13.value <= 3.0);
  CHECK(r13.value + r13.tail_bound == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(series_closed_form(1, 3) == 3);

  // terms 2/((k+1)(k+2)) telescope to 2
  const auto r02 = series_sum_factorial_ratio(0, 2, 1e-9);
  CHECK(r02.value + r02.tail_bound == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(series_closed_form(0, 2) == 2);

  CHECK_THROWS_AS(series_sum_factorial_ratio(3, 4, 1e-6), series_divergence_error);
  CHECK_THROWS_AS(series_sum_factorial_ratio(3, 3, 1e-6), series_divergence_error);
  CHECK_THROWS_AS(series_closed_form(5, 6), series_divergence_error);
}

TEST_CASE("partial sums confirm the closed form on random parameters") {
  CounterRng rng(101, 0);
  for (int i = 0; i < 15; ++i) {
    const std::uint64_t b = rng.next_u64() % 80;
    const std::uint64_t c = b + 2 + rng.next_u64() % 80;
    const auto r = series_sum_factorial_ratio(b, c, 1e-13, 4 << 20);
    const double closed = to_double(series_closed_form(b, c));
    CHECK(r.value <= closed * (1 + 1e-12));
    CHECK(closed <= r.value + r.tail_bound + 1e-9 * closed);
  }
}

TEST_CASE("series sandwich on a sample grid") {
  for (std::uint64_t b = 1; b <= 40; b += 3) {
    for (std::uint64_t c = b + 2; c <= 60; c += 5) {
      const double lo = static_cast<double>(c + 1) / (c - b);
      const double hi = lo * (1.0 + epsilon_bound(static_cast<double>(c - b)));
      const auto r = series_sum_factorial_ratio(b, c, (hi - lo) * 1e-3, 20000);
      CHECK(r.value >= lo - 1e-9);
      CHECK(r.value + r.tail_bound <= hi + 1e-9);
    }
  }
}

TEST_CASE("epsilon bound values and shape") {
  CHECK(epsilon_bound(4.0) == doctest::Approx(2.8766).epsilon(1e-4));
  CHECK(epsilon_bound(2.0) == doctest::Approx(4.7135).epsilon(1e-4));
  // direct recomputation
  CHECK(epsilon_bound(7.5) ==
        doctest::Approx(3.0 * (1.0 + std::log(7.5)) / 7.5 +
                        4.0 * std::exp(1.0 / 12.0) * std::pow(2.0, -3.75)));

  double prev = epsilon_bound(1.0);
  for (double a = 1.5; a < 400.0; a *= 1.5) {
    const double cur = epsilon_bound(a);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(epsilon_bound(1e9) < 1e-6);
  CHECK_THROWS_AS(epsilon_bound(0.0), std::domain_error);
  CHECK_THROWS_AS(epsilon_bound(-1.0), std::domain_error);
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fb, double fm, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, fm, flm, left, tol / 2, depth - 1) +
         simpson_rec(f, m, b, fm, fb, frm, right, tol / 2, depth - 1);
}

double quadrature(const std::function<double(double)>& f, double a, double b) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson_rec(f, a, b, fa, fb, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 1e-13, 40);
}

}  // namespace

TEST_CASE("beta integral closed form") {
  CHECK(beta_integral(1, 1, Rational(1)) == Rational(1, 6));
  CHECK(beta_integral(0, 0, Rational(1, 2)) == Rational(1, 2));
  CHECK(beta_integral(2, 3, Rational(1)) == Rational(1, 60));
  CHECK_THROWS_AS(beta_integral(1, 1, Rational(2)), std::domain_error);

  for (unsigned a = 0; a <= 12; a += 3) {
    for (unsigned b = 0; b <= 12; b += 4) {
      for (double c : {1.0, 0.5}) {
        const auto f = [&](double x) {
          return std::pow(c - x, double(a)) * std::pow(x, double(b));
        };
        CHECK(beta_integral(a, b, c) == doctest::Approx(quadrature(f, 0.0, c)).epsilon(1e-10));
      }
    }
  }
}

TEST_CASE("zeta tail bounds") {
  const auto [lo1, hi1] = zeta_tail_bounds(1, 2.0);
  CHECK(lo1 == doctest::Approx(0.5));
  CHECK(hi1 == doctest::Approx(1.0));
  const double basel_tail = 1.6449340668482264 - 1.0;  // pi^2/6 - 1
  CHECK(lo1 <= basel_tail);
  CHECK(basel_tail <= hi1);

  const auto [lo2, hi2] = zeta_tail_bounds(10, 3.0);
  CHECK(lo2 == doctest::Approx(1.0 / 242.0));
  CHECK(hi2 == doctest::Approx(1.0 / 200.0));
  double partial = 0.0;
  for (int i = 11; i <= 100000; ++i) partial += std::pow(i, -3.0);
  CHECK(lo2 <= partial);
  CHECK(partial <= hi2);

  for (std::uint64_t k : {1ull, 3ull, 20ull})
    for (double t : {1.1, 2.5, 6.0}) {
      const auto [lo, hi] = zeta_tail_bounds(k, t);
      CHECK(lo < hi);
    }
  CHECK_THROWS_AS(zeta_tail_bounds(0, 2.0), std::domain_error);
  CHECK_THROWS_AS(zeta_tail_bounds(3, 1.0), std::domain_error);
}

TEST_CASE("robbins bounds bracket the factorial") {
  const auto one = robbins_bounds(1);
  CHECK(std::exp(one.log_lower) == doctest::Approx(0.9959).epsilon(1e-3));
  CHECK(std::exp(one.log_upper) == doctest::Approx(1.0023).epsilon(1e-3));
  CHECK(one.log_lower <= 0.0);
  CHECK(0.0 <= one.log_upper);

  const auto ten = robbins_bounds(10);
  const double log_10f = std::log(3628800.0);
  CHECK(ten.log_lower <= log_10f);
  CHECK(log_10f <= ten.log_upper);

  double log_fact = 0.0;
  for (std::uint64_t m = 1; m <= 170; ++m) {
    log_fact += std::log(static_cast<double>(m));
    const auto bounds = robbins_bounds(m);
    CHECK(bounds.log_lower <= log_fact + 1e-12);
    CHECK(log_fact <= bounds.log_upper + 1e-12);
  }
  CHECK_THROWS_AS(robbins_bounds(0), std::domain_error);
}

TEST_CASE("counter rng is a pure function of seed, stream, counter") {
  CounterRng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  CounterRng c(42, 4);
  CHECK(a.next_u64() != c.next_u64());

  CounterRng d(42, 3);
  for (int i = 0; i < 50; ++i) {
    const double x = d.next_unit();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("simplex sample is a normalized point and seed-stable") {
  CounterRng rng(7, 0);
  const auto p = simplex_uniform_sample(5, rng);
  double sum = 0.0;
  for (double x : p) {
    CHECK(x > 0.0);
    sum += x;
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  CounterRng r1(9, 2), r2(9, 2);
  CHECK(simplex_uniform_sample(4, r1) == simplex_uniform_sample(4, r2));
  CHECK_THROWS_AS(simplex_uniform_sample(1, rng), std::domain_error);
}
