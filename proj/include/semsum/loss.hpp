#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "semsum/distribution.hpp"
#include "semsum/model.hpp"

namespace semsum {

// Deterministic summarizer for single reports, indexed by report mask.
using DeterministicPolicy = std::vector<Summary>;

// 1 - i(W): the minimal variational distance from i to any distribution
// supported on W.
template <class Scalar>
Scalar set_loss(std::span<const Report> group, const Interpretation<Scalar>& interp) {
  Scalar inside = 0;
  for (Report r : group) inside += interp[r];
  return Scalar(1) - inside;
}

namespace detail {

template <class Scalar>
Scalar group_mass_in_summary(const Distribution<Scalar>& p, std::span<const Report> group,
                             const Summary& y) {
  Scalar sum = 0;
  for (Report r : group)
    if (y.consistent_with(r)) sum += p[r];
  return sum;
}

template <class Scalar>
void check_policy(const Distribution<Scalar>& p, const DeterministicPolicy& policy) {
  if (policy.size() != p.alphabet().report_count())
    throw std::invalid_argument("policy needs one summary per report");
  for (std::uint32_t m = 0; m < policy.size(); ++m) {
    if (p[Report{m}] == 0) continue;
    validate_summary(p.alphabet(), policy[m]);
    if (!policy[m].consistent_with(Report{m}))
      throw std::domain_error("policy assigns an inconsistent summary to a report with p > 0");
  }
}

}  // namespace detail

// Expected weighted loss sum_x p(x) sum_W u(x,W) (1 - i_{policy(x)}(W)).
template <class Scalar>
Scalar semantic_loss(const Distribution<Scalar>& p, const DeterministicPolicy& policy,
                     const SemanticWeights& u) {
  detail::check_policy(p, policy);
  Scalar total = 0;
  for (std::uint32_t m = 0; m < policy.size(); ++m) {
    const Report x{m};
    if (p[x] == 0) continue;
    const auto entries = u.entries_for(x);
    if (entries.empty()) continue;
    const Summary& y = policy[m];
    const Scalar denom = p.mass_consistent(y);  // >= p(x) > 0
    Scalar term = 0;
    for (const WeightEntry& e : entries) {
      const Scalar inside = detail::group_mass_in_summary(p, e.group, y);
      term += scalar_cast<Scalar>(e.weight) * (Scalar(1) - inside / denom);
    }
    total += p[x] * term;
  }
  return total;
}

inline constexpr std::uint64_t kDefaultGridBudget = 50000;

namespace detail {

// Largest resolution whose simplex grid over `parts` coordinates stays within
// the point budget.
inline unsigned grid_resolution_for(unsigned requested, std::size_t parts,
                                    std::uint64_t budget) {
  unsigned g = requested;
  while (g > 1 && binomial(g + parts - 1, parts - 1) > budget) --g;
  return g;
}

// inf over q in P(W) of the variational distance to i, evaluated from the
// definition: the constructive candidate (i restricted to W, renormalized)
// plus a sweep of simplex grid points.
template <class Scalar>
Scalar definitional_group_loss(std::span<const Report> group,
                               const Interpretation<Scalar>& interp, unsigned grid_resolution,
                               std::uint64_t budget) {
  Scalar inside = 0;
  for (Report r : group) inside += interp[r];
  const Scalar outside = Scalar(1) - inside;  // mass of i off W

  auto distance = [&](std::span<const Scalar> q) -> Scalar {
    Scalar acc = 0;
    for (std::size_t r = 0; r < group.size(); ++r) {
      const Scalar diff = q[r] - interp[group[r]];
      acc += diff < 0 ? -diff : diff;
    }
    return (acc + outside) / 2;
  };

  // Constructive candidate: raise the mass i already puts on W proportionally
  // (uniform over W when i(W) = 0).
  std::vector<Scalar> q(group.size());
  for (std::size_t r = 0; r < group.size(); ++r)
    q[r] = inside != 0 ? interp[group[r]] / inside
                       : scalar_cast<Scalar>(Rational(1, group.size()));
  Scalar best = distance(q);

  const unsigned g = grid_resolution_for(grid_resolution, group.size(), budget);
  for_each_type(g, static_cast<std::uint32_t>(group.size()),
                [&](const std::vector<std::uint64_t>& ticks) {
                  for (std::size_t r = 0; r < group.size(); ++r)
                    q[r] = scalar_cast<Scalar>(Rational(ticks[r], g));
                  best = std::min(best, distance(q));
                });
  return best;
}

}  // namespace detail

// Test oracle: the same loss with the inner infimum taken by brute force over
// candidate distributions on each W instead of the closed form. The grid is
// coarsened for large W so the sweep stays within `budget` points.
template <class Scalar>
Scalar semantic_loss_definitional(const Distribution<Scalar>& p,
                                  const DeterministicPolicy& policy, const SemanticWeights& u,
                                  unsigned grid_resolution,
                                  std::uint64_t budget = kDefaultGridBudget) {
  if (grid_resolution < 10) throw std::domain_error("grid_resolution must be >= 10");
  detail::check_policy(p, policy);
  Scalar total = 0;
  for (std::uint32_t m = 0; m < policy.size(); ++m) {
    const Report x{m};
    if (p[x] == 0) continue;
    const auto entries = u.entries_for(x);
    if (entries.empty()) continue;
    const auto interp = interpretation(p, policy[m]);
    Scalar term = 0;
    for (const WeightEntry& e : entries)
      term += scalar_cast<Scalar>(e.weight) *
              detail::definitional_group_loss<Scalar>(e.group, interp, grid_resolution, budget);
    total += p[x] * term;
  }
  return total;
}

// Convex generator for pointwise f-divergences. Where f(0) or lim f(t)/t is
// divergent, the corresponding field is +infinity and results come back
// tagged infinite.
struct ConvexGenerator {
  std::string name;
  std::function<double(double)> f;  // defined on (0, inf)
  double f_at_zero = 0.0;
  double slope_at_infinity = 0.0;  // lim_{t->inf} f(t)/t
};

struct DivergenceValue {
  double value = 0.0;
  bool infinite = false;

  friend bool operator==(const DivergenceValue&, const DivergenceValue&) = default;
};

// D_f(1_x || i) = f(0) + i(x) [ f(1/i(x)) - f(0) ].
DivergenceValue f_divergence_point(const ConvexGenerator& gen, Report x,
                                   const Interpretation<double>& interp);

namespace generators {
ConvexGenerator total_variation();
ConvexGenerator kl();
ConvexGenerator reverse_kl();
ConvexGenerator chi_square();
}  // namespace generators

// Midpoint convexity probe over a fixed grid of argument pairs.
bool convex_on_grid(const std::function<double(double)>& f);

}  // namespace semsum
