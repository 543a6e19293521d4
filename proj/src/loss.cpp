#include "semsum/loss.hpp"

#include <cmath>
#include <limits>

namespace semsum {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

DivergenceValue f_divergence_point(const ConvexGenerator& gen, Report x,
                                   const Interpretation<double>& interp) {
  const double ix = interp[x];
  if (ix < 0.0 || ix > 1.0 + 1e-12)
    throw std::domain_error("interpretation mass outside [0, 1]");

  if (ix == 0.0) {
    // i(x) f(1/i(x)) -> lim f(t)/t as t -> inf.
    if (std::isinf(gen.f_at_zero) || std::isinf(gen.slope_at_infinity)) return {0.0, true};
    return {gen.f_at_zero + gen.slope_at_infinity, false};
  }

  const double mass_off_x = 1.0 - ix;
  if (mass_off_x > 0.0 && std::isinf(gen.f_at_zero)) return {0.0, true};
  const double zero_part = mass_off_x > 0.0 ? mass_off_x * gen.f_at_zero : 0.0;
  return {zero_part + ix * gen.f(1.0 / ix), false};
}

namespace generators {

ConvexGenerator total_variation() {
  return {"total-variation", [](double t) { return std::abs(t - 1.0) / 2.0; }, 0.5, 0.5};
}

ConvexGenerator kl() {
  return {"kl", [](double t) { return t * std::log(t); }, 0.0, kInf};
}

ConvexGenerator reverse_kl() {
  return {"reverse-kl", [](double t) { return -std::log(t); }, kInf, 0.0};
}

ConvexGenerator chi_square() {
  return {"chi-square", [](double t) { return (t - 1.0) * (t - 1.0); }, 1.0, kInf};
}

}  // namespace generators

bool convex_on_grid(const std::function<double(double)>& f) {
  static constexpr double kPoints[] = {1e-6, 1e-3, 0.1, 0.5, 0.9, 1.0, 1.1, 2.0, 10.0, 1e3};
  static constexpr double kLambdas[] = {0.25, 0.5, 0.75};
  for (double a : kPoints)
    for (double b : kPoints)
      for (double lambda : kLambdas) {
        const double mid = lambda * a + (1.0 - lambda) * b;
        if (f(mid) > lambda * f(a) + (1.0 - lambda) * f(b) + 1e-9) return false;
      }
  return true;
}

}  // namespace semsum
