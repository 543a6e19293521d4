#include "semsum/model.hpp"

#include <algorithm>
#include <stdexcept>

namespace semsum {

BigInt factorial(std::uint64_t n) {
  BigInt out = 1;
  for (std::uint64_t i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

Alphabet::Alphabet(unsigned v) : v_(v) {
  if (v < 1 || v > kMaxEvents)
    throw std::invalid_argument("alphabet: event count must be in [1, " +
                                std::to_string(kMaxEvents) + "]");
}

void validate_report(const Alphabet& alphabet, Report x) {
  if (x.mask > alphabet.event_mask())
    throw std::invalid_argument("report mask out of range for alphabet");
}

void validate_summary(const Alphabet& alphabet, const Summary& y) {
  if (y.events == 0 || y.events > alphabet.event_mask())
    throw std::invalid_argument("summary selects no events or events out of range");
  if ((y.values & ~y.events) != 0)
    throw std::invalid_argument("summary values set outside selected events");
}

ReportSequence::ReportSequence(Alphabet alphabet, std::vector<Report> reports)
    : alphabet_(alphabet), reports_(std::move(reports)) {
  if (reports_.empty()) throw std::invalid_argument("report sequence must be non-empty");
  for (Report r : reports_) validate_report(alphabet_, r);
}

void SemanticWeights::add(Report x, std::vector<Report> group, Rational weight) {
  if (weight < 0) throw std::invalid_argument("semantic weight must be nonnegative");
  std::sort(group.begin(), group.end());
  group.erase(std::unique(group.begin(), group.end()), group.end());
  if (!std::binary_search(group.begin(), group.end(), x))
    throw std::invalid_argument("semantic weight entry requires x in its group");

  auto key_less = [](const WeightEntry& e, const WeightEntry& f) {
    if (e.x != f.x) return e.x < f.x;
    return e.group < f.group;
  };
  WeightEntry entry{x, std::move(group), std::move(weight)};
  auto it = std::lower_bound(entries_.begin(), entries_.end(), entry, key_less);
  if (it != entries_.end() && it->x == entry.x && it->group == entry.group)
    throw std::invalid_argument("duplicate semantic weight entry for (x, group)");
  entries_.insert(it, std::move(entry));
}

std::span<const WeightEntry> SemanticWeights::entries_for(Report x) const {
  auto lo = std::lower_bound(entries_.begin(), entries_.end(), x,
                             [](const WeightEntry& e, Report r) { return e.x < r; });
  auto hi = std::upper_bound(lo, entries_.end(), x,
                             [](Report r, const WeightEntry& e) { return r < e.x; });
  return {&*lo, static_cast<std::size_t>(hi - lo)};
}

Rational SemanticWeights::total_weight() const {
  Rational sum = 0;
  for (const auto& e : entries_) sum += e.weight;
  return sum;
}

SemanticWeights SemanticWeights::identification(const Alphabet& alphabet) {
  SemanticWeights u;
  for (std::uint32_t m = 0; m < alphabet.report_count(); ++m)
    u.add(Report{m}, {Report{m}}, 1);
  return u;
}

SemanticWeights SemanticWeights::per_event(const Alphabet& alphabet,
                                           const std::vector<double>& event_weights) {
  if (event_weights.size() != alphabet.events())
    throw std::invalid_argument("per-event weights need one weight per event");
  SemanticWeights u;
  for (std::uint32_t m = 0; m < alphabet.report_count(); ++m) {
    for (unsigned e = 0; e < alphabet.events(); ++e) {
      if (event_weights[e] == 0.0) continue;
      const std::uint32_t bit = std::uint32_t{1} << e;
      std::vector<Report> group;
      group.reserve(alphabet.report_count() / 2);
      for (std::uint32_t g = 0; g < alphabet.report_count(); ++g)
        if ((g & bit) == (m & bit)) group.push_back(Report{g});
      u.add(Report{m}, std::move(group), Rational(event_weights[e]));
    }
  }
  return u;
}

std::vector<Summary> consistent_summaries(const Alphabet& alphabet, Report x, unsigned j) {
  validate_report(alphabet, x);
  if (j < 1 || j > alphabet.events())
    throw std::domain_error("summary length j must satisfy 1 <= j <= v");

  std::vector<Summary> out;
  // Gosper's hack walks the j-subsets in ascending mask order.
  std::uint32_t events = (std::uint32_t{1} << j) - 1;
  const std::uint32_t limit = std::uint32_t{1} << alphabet.events();
  while (events < limit) {
    out.push_back(Summary{events, x.mask & events});
    const std::uint32_t c = events & -events;
    const std::uint32_t r = events + c;
    events = (((r ^ events) >> 2) / c) | r;
    if (events == 0) break;  // j == 0 cannot happen; guards the j == v wrap
  }
  return out;
}

std::vector<Report> consistent_reports(const Alphabet& alphabet, const Summary& y) {
  validate_summary(alphabet, y);
  std::vector<Report> out;
  out.reserve(alphabet.report_count() >> y.length());
  for (std::uint32_t m = 0; m < alphabet.report_count(); ++m)
    if (y.consistent_with(Report{m})) out.push_back(Report{m});
  return out;
}

EmpiricalCounts empirical(const ReportSequence& sequence) {
  EmpiricalCounts out;
  out.counts.assign(sequence.alphabet().report_count(), 0);
  for (Report r : sequence.reports()) ++out.counts[r.mask];
  out.n = sequence.size();
  return out;
}

BigInt type_class_size(const EmpiricalCounts& counts) {
  BigInt out = factorial(counts.n);
  for (std::uint64_t c : counts.counts)
    if (c > 1) out /= factorial(c);
  return out;
}

BigInt num_types(std::uint64_t n, std::uint64_t alphabet_size) {
  if (n < 1 || alphabet_size < 1)
    throw std::domain_error("num_types requires n >= 1 and alphabet_size >= 1");
  return binomial(n + alphabet_size - 1, alphabet_size - 1);
}

namespace {

void for_each_type_impl(std::uint64_t remaining, std::uint32_t slot,
                        std::vector<std::uint64_t>& counts,
                        const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
  if (slot + 1 == counts.size()) {
    counts[slot] = remaining;
    fn(counts);
    return;
  }
  for (std::uint64_t c = 0; c <= remaining; ++c) {
    counts[slot] = c;
    for_each_type_impl(remaining - c, slot + 1, counts, fn);
  }
}

}  // namespace

void for_each_type(std::uint64_t n, std::uint32_t alphabet_size,
                   const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
  if (alphabet_size == 0) throw std::domain_error("alphabet_size must be positive");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for_each_type_impl(n, 0, counts, fn);
}

}  // namespace semsum
