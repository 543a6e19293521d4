#include "semsum/summarizers.hpp"

#include <cmath>
#include <stdexcept>

namespace semsum {

namespace {

// Boundary between exact-rational and double evaluation for eta.
constexpr std::uint64_t kExactEtaBoundary = 64;

// Visits every report mask in X(y) (submasks of the free bits).
template <class Fn>
void for_each_consistent_mask(const Alphabet& alphabet, const Summary& y, Fn&& fn) {
  const std::uint32_t free_bits = alphabet.event_mask() & ~y.events;
  std::uint32_t sub = free_bits;
  while (true) {
    fn(y.values | sub);
    if (sub == 0) break;
    sub = (sub - 1) & free_bits;
  }
}

// (n+|X|+1) * q_hat(X(y)): integer because every member contributes
// count(a) + 1 and the current report one extra unit.
std::uint64_t hat_mass_numerator(const Alphabet& alphabet, const EmpiricalCounts& counts,
                                 const Summary& y) {
  std::uint64_t num = 1;
  for_each_consistent_mask(alphabet, y,
                           [&](std::uint32_t m) { num += counts.counts[m] + 1; });
  return num;
}

// (n+|X|) * q(W n X(y)).
std::uint64_t group_mass_numerator(const EmpiricalCounts& counts, const Summary& y,
                                   std::span<const Report> group) {
  std::uint64_t num = 0;
  for (Report r : group)
    if (y.consistent_with(r)) num += counts.counts[r.mask] + 1;
  return num;
}

void check_eta_inputs(const Alphabet& alphabet, Report current, const Summary& y) {
  validate_report(alphabet, current);
  validate_summary(alphabet, y);
  if (!y.consistent_with(current))
    throw std::domain_error("eta requires a summary consistent with the current report");
}

}  // namespace

LaplaceEstimates laplace(const ReportSequence& sequence) {
  const Alphabet& alphabet = sequence.alphabet();
  const auto counts = empirical(sequence);
  const std::uint64_t denom = counts.n + alphabet.report_count();

  LaplaceEstimates out{alphabet, counts.n, sequence.current(), {}, {}};
  out.q.reserve(counts.counts.size());
  out.q_hat.reserve(counts.counts.size());
  for (std::uint32_t m = 0; m < counts.counts.size(); ++m) {
    const std::uint64_t extra = m == sequence.current().mask ? 1 : 0;
    out.q.emplace_back(counts.counts[m] + 1, denom);
    out.q_hat.emplace_back(counts.counts[m] + 1 + extra, denom + 1);
  }
  return out;
}

Rational eta_exact(const Alphabet& alphabet, const EmpiricalCounts& counts, Report current,
                   const Summary& y, std::span<const Report> group) {
  check_eta_inputs(alphabet, current, y);
  const std::uint64_t c = counts.n + alphabet.report_count();
  const std::uint64_t hat_num = hat_mass_numerator(alphabet, counts, y);
  if (hat_num > c) throw std::domain_error("eta series parameter b below zero");
  const std::uint64_t b = c - hat_num;  // series diverges iff b >= c - 1

  const Rational group_mass(group_mass_numerator(counts, y, group), c);
  return group_mass * series_closed_form(b, c);
}

Rational eta_exact(const ReportSequence& sequence, const Summary& y,
                   std::span<const Report> group) {
  return eta_exact(sequence.alphabet(), empirical(sequence), sequence.current(), y, group);
}

double eta(const ReportSequence& sequence, const Summary& y, std::span<const Report> group,
           double tol) {
  if (!(tol > 0)) throw std::domain_error("eta requires tol > 0");
  const Alphabet& alphabet = sequence.alphabet();
  const auto counts = empirical(sequence);
  if (counts.n + alphabet.report_count() <= kExactEtaBoundary)
    return to_double(eta_exact(alphabet, counts, sequence.current(), y, group));

  check_eta_inputs(alphabet, sequence.current(), y);
  const std::uint64_t c = counts.n + alphabet.report_count();
  const std::uint64_t hat_num = hat_mass_numerator(alphabet, counts, y);
  if (hat_num > c || hat_num < 2) throw std::domain_error("eta series parameters out of range");
  return static_cast<double>(group_mass_numerator(counts, y, group)) /
         static_cast<double>(hat_num - 1);
}

namespace {

struct UniversalChoice {
  Summary summary;
  Rational score;
};

UniversalChoice universal_best(const Alphabet& alphabet, const EmpiricalCounts& counts,
                               Report current, unsigned j, const SemanticWeights& u) {
  const auto candidates = consistent_summaries(alphabet, current, j);
  const auto entries = u.entries_for(current);
  const BigInt plain_denom = counts.n + alphabet.report_count();  // n + |X|

  UniversalChoice best;
  bool first = true;
  for (const Summary& y : candidates) {
    const std::uint64_t hat_num = hat_mass_numerator(alphabet, counts, y);
    Rational score = 0;
    for (const WeightEntry& e : entries) {
      const std::uint64_t group_num = group_mass_numerator(counts, y, e.group);
      // 1 - q(W n X(y)) / q_hat(X(y))
      score += e.weight * (Rational(1) - Rational(BigInt(group_num) * (plain_denom + 1),
                                                  plain_denom * hat_num));
    }
    if (first || score < best.score) {
      first = false;
      best = {y, std::move(score)};
    }
  }
  return best;
}

void check_policy_output(const Alphabet& alphabet, Report current, unsigned j,
                         const Summary& y) {
  validate_summary(alphabet, y);
  if (y.length() != j) throw std::domain_error("policy produced a summary of the wrong length");
  if (!y.consistent_with(current))
    throw std::domain_error("policy produced a summary inconsistent with the current report");
}

// Runs fn over every length-n sequence; fn receives the sequence and the
// 1/(|T| |P_n|) averaging weight.
template <class Fn>
void for_each_sequence(std::uint64_t n, const Alphabet& alphabet, std::uint64_t enum_cap,
                       Fn&& fn) {
  if (n < 1) throw std::domain_error("sequence length n must be >= 1");
  const std::uint32_t size = alphabet.report_count();

  BigInt total = 1;
  for (std::uint64_t i = 0; i < n; ++i) total *= size;
  if (total > enum_cap)
    throw resource_error("|X|^n exceeds the enumeration cap of " + std::to_string(enum_cap) +
                         "; use the Monte Carlo estimator instead");

  const BigInt p_n = num_types(n, size);
  std::vector<Report> reports(n, Report{0});
  while (true) {
    ReportSequence sequence(alphabet, reports);
    const auto counts = empirical(sequence);
    const Rational weight(BigInt(1), type_class_size(counts) * p_n);
    fn(sequence, counts, weight);

    std::uint64_t pos = 0;
    while (pos < n && ++reports[pos].mask == size) reports[pos++].mask = 0;
    if (pos == n) break;
  }
}

}  // namespace

Rational uniform_avg_loss_exact(const SequencePolicy& policy, std::uint64_t n,
                                const Alphabet& alphabet, unsigned j, const SemanticWeights& u,
                                double /*tol*/, std::uint64_t enum_cap) {
  if (j < 1 || j > alphabet.events())
    throw std::domain_error("summary length j must satisfy 1 <= j <= v");

  Rational total = 0;
  for_each_sequence(n, alphabet, enum_cap,
                    [&](const ReportSequence& sequence, const EmpiricalCounts& counts,
                        const Rational& weight) {
                      const Report current = sequence.current();
                      const Summary y = policy(sequence);
                      check_policy_output(alphabet, current, j, y);
                      Rational term = 0;
                      for (const WeightEntry& e : u.entries_for(current))
                        term += e.weight *
                                (Rational(1) - eta_exact(alphabet, counts, current, y, e.group));
                      total += weight * term;
                    });
  return total;
}

Summary universal_summarize(const ReportSequence& sequence, unsigned j,
                            const SemanticWeights& u) {
  return universal_best(sequence.alphabet(), empirical(sequence), sequence.current(), j, u)
      .summary;
}

Rational mu(const ReportSequence& sequence, unsigned j, const SemanticWeights& u) {
  return universal_best(sequence.alphabet(), empirical(sequence), sequence.current(), j, u)
      .score;
}

SequencePolicy universal_policy(unsigned j, SemanticWeights u) {
  return [j, u = std::move(u)](const ReportSequence& sequence) {
    return universal_summarize(sequence, j, u);
  };
}

double lambda_bound(std::uint64_t n, const Alphabet& alphabet, unsigned j,
                    const SemanticWeights& u) {
  if (n < 1) throw std::domain_error("lambda_bound requires n >= 1");
  if (j < 1 || j > alphabet.events())
    throw std::domain_error("summary length j must satisfy 1 <= j <= v");
  const double size = alphabet.report_count();
  const double u_star = to_double(u.total_weight()) / size;
  if (u_star == 0.0) return 0.0;
  const double scarce_fraction = (size - 1.0) * size /
                                 (static_cast<double>(n) - std::sqrt(static_cast<double>(n)) +
                                  size - 1.0);
  return u_star * (scarce_fraction * epsilon_bound(size * std::exp2(-double(j))) +
                   epsilon_bound(std::sqrt(static_cast<double>(n))));
}

UniversalLossReport min_uniform_avg_loss(std::uint64_t n, const Alphabet& alphabet, unsigned j,
                                         const SemanticWeights& u, double tol,
                                         std::uint64_t enum_cap) {
  UniversalLossReport out;
  out.exact_value = uniform_avg_loss_exact(universal_policy(j, u), n, alphabet, j, u, tol,
                                           enum_cap);
  Rational mu_sum = 0;
  for_each_sequence(n, alphabet, enum_cap,
                    [&](const ReportSequence& sequence, const EmpiricalCounts& counts,
                        const Rational& weight) {
                      mu_sum += weight * universal_best(alphabet, counts, sequence.current(),
                                                        j, u)
                                             .score;
                    });
  out.mu_sum = std::move(mu_sum);
  out.lambda_bound = lambda_bound(n, alphabet, j, u);
  out.u_star = to_double(u.total_weight()) / alphabet.report_count();

  const Rational gap = out.mu_sum - out.exact_value;
  if (gap < 0 || to_double(gap) > out.lambda_bound + 1e-9)
    throw std::logic_error("universal loss bracket violated");
  return out;
}

}  // namespace semsum
