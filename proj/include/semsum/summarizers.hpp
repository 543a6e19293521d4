#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "semsum/distribution.hpp"
#include "semsum/loss.hpp"
#include "semsum/model.hpp"
#include "semsum/numerics.hpp"

namespace semsum {

inline constexpr std::uint64_t kDefaultEnumCap = 1'000'000;

// Add-one estimates built from a report sequence: q is the plain smoothed
// empirical distribution, q_hat adds one extra unit on the current report.
struct LaplaceEstimates {
  Alphabet alphabet;
  std::uint64_t n = 0;
  Report current;
  std::vector<Rational> q;      // (count(a) + 1) / (n + |X|)
  std::vector<Rational> q_hat;  // (count(a) + 1 + [a = current]) / (n + |X| + 1)
};

LaplaceEstimates laplace(const ReportSequence& sequence);

namespace detail {

// score(y) = sum_W u(x,W) (1 - p(W n X(y)) / p(X(y))), minimized over the
// C(v,j) candidates; first minimum wins, so ties go to the smallest events
// mask.
template <class Scalar>
std::pair<Summary, Scalar> known_p_best(const Distribution<Scalar>& p, Report x, unsigned j,
                                        const SemanticWeights& u) {
  const auto candidates = consistent_summaries(p.alphabet(), x, j);
  const auto entries = u.entries_for(x);
  Summary best = candidates.front();
  Scalar best_score = 0;
  bool first = true;
  for (const Summary& y : candidates) {
    const Scalar denom = p.mass_consistent(y);
    Scalar score = 0;
    for (const WeightEntry& e : entries) {
      const Scalar inside = group_mass_in_summary(p, e.group, y);
      score += scalar_cast<Scalar>(e.weight) * (Scalar(1) - inside / denom);
    }
    if (first || score < best_score) {
      first = false;
      best = y;
      best_score = std::move(score);
    }
  }
  return {best, std::move(best_score)};
}

}  // namespace detail

// Minimum-loss consistent summary of x when p is known.
template <class Scalar>
Summary known_p_summarize(const Distribution<Scalar>& p, Report x, unsigned j,
                          const SemanticWeights& u) {
  if (p[x] == 0) throw std::domain_error("known_p_summarize requires p(x) > 0");
  return detail::known_p_best(p, x, j, u).first;
}

// Expected loss of the per-report optimal summarizer under p.
template <class Scalar>
Scalar min_semantic_loss(const Distribution<Scalar>& p, unsigned j, const SemanticWeights& u) {
  Scalar total = 0;
  for (std::uint32_t m = 0; m < p.alphabet().report_count(); ++m) {
    const Report x{m};
    if (p[x] == 0) continue;
    total += p[x] * detail::known_p_best(p, x, j, u).second;
  }
  return total;
}

// Per-report optimal policy; reports with p(x) = 0 get their first consistent
// candidate so the vector stays valid everywhere.
template <class Scalar>
DeterministicPolicy known_p_policy(const Distribution<Scalar>& p, unsigned j,
                                   const SemanticWeights& u) {
  DeterministicPolicy policy;
  policy.reserve(p.alphabet().report_count());
  for (std::uint32_t m = 0; m < p.alphabet().report_count(); ++m) {
    const Report x{m};
    policy.push_back(p[x] == 0 ? consistent_summaries(p.alphabet(), x, j).front()
                               : detail::known_p_best(p, x, j, u).first);
  }
  return policy;
}

// eta = q(W n X(y)) * S(b, c) with b = n+|X| - (n+|X|+1) q_hat(X(y)),
// c = n+|X|, and S the factorial-ratio series. Exact rational evaluation via
// the verified closed form S = c/(c-b-1).
Rational eta_exact(const ReportSequence& sequence, const Summary& y,
                   std::span<const Report> group);
Rational eta_exact(const Alphabet& alphabet, const EmpiricalCounts& counts, Report current,
                   const Summary& y, std::span<const Report> group);

// Double-precision eta with certified absolute error <= tol.
double eta(const ReportSequence& sequence, const Summary& y, std::span<const Report> group,
           double tol);

// Deterministic summarizer over full report sequences (current + history).
using SequencePolicy = std::function<Summary(const ReportSequence&)>;

// Average over all |X|^n sequences of the weighted (1 - eta) loss, each
// sequence weighted by 1/(|T| |P_n|). Exact rational arithmetic throughout.
Rational uniform_avg_loss_exact(const SequencePolicy& policy, std::uint64_t n,
                                const Alphabet& alphabet, unsigned j, const SemanticWeights& u,
                                double tol, std::uint64_t enum_cap = kDefaultEnumCap);

// argmin_y sum_W u(x(1),W) (1 - q(W n X(y)) / q_hat(X(y))); ties to the
// smallest events mask.
Summary universal_summarize(const ReportSequence& sequence, unsigned j,
                            const SemanticWeights& u);

// The minimized criterion value of universal_summarize.
Rational mu(const ReportSequence& sequence, unsigned j, const SemanticWeights& u);

SequencePolicy universal_policy(unsigned j, SemanticWeights u);

// u* [ (|X|-1)|X| / (n - sqrt(n) + |X| - 1) * eps(|X| 2^-j) + eps(sqrt(n)) ]
// with u* = sum_{x,W} u(x,W) / |X|.
double lambda_bound(std::uint64_t n, const Alphabet& alphabet, unsigned j,
                    const SemanticWeights& u);

struct UniversalLossReport {
  Rational exact_value;  // loss of the universal policy
  Rational mu_sum;       // sum of mu(x^n) / (|T| |P_n|)
  double lambda_bound = 0.0;
  double u_star = 0.0;
};

// Computes the universal policy's exact loss together with its mu-criterion
// bracket; the result satisfies exact_value in [mu_sum - lambda_bound, mu_sum].
UniversalLossReport min_uniform_avg_loss(std::uint64_t n, const Alphabet& alphabet, unsigned j,
                                         const SemanticWeights& u, double tol,
                                         std::uint64_t enum_cap = kDefaultEnumCap);

}  // namespace semsum
