#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "semsum/errors.hpp"
#include "semsum/rational.hpp"

namespace semsum {

// Universe of v binary events; the report space is the 2^v subsets of them.
class Alphabet {
public:
  // Hard cap keeping 2^v enumeration tractable.
  static constexpr unsigned kMaxEvents = 16;

  explicit Alphabet(unsigned v);

  unsigned events() const { return v_; }
  std::uint32_t report_count() const { return std::uint32_t{1} << v_; }  // |X|
  std::uint32_t event_mask() const { return report_count() - 1; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
  unsigned v_;
};

// One report: bit e-1 is set iff event e occurred.
struct Report {
  std::uint32_t mask = 0;

  friend auto operator<=>(const Report&, const Report&) = default;
};

// Truthful j-event extract of a report: `events` selects which events are
// mentioned, `values` carries their occurrence bits (values is a subset of
// events).
struct Summary {
  std::uint32_t events = 0;
  std::uint32_t values = 0;

  unsigned length() const { return static_cast<unsigned>(std::popcount(events)); }

  // x in X(y): x agrees with this summary on every selected event.
  bool consistent_with(Report x) const { return (x.mask & events) == values; }

  friend auto operator<=>(const Summary&, const Summary&) = default;
};

// reports[0] is the current report x(1); the remaining entries are the history.
class ReportSequence {
public:
  ReportSequence(Alphabet alphabet, std::vector<Report> reports);

  const Alphabet& alphabet() const { return alphabet_; }
  Report current() const { return reports_.front(); }
  const std::vector<Report>& reports() const { return reports_; }
  std::uint64_t size() const { return reports_.size(); }

private:
  Alphabet alphabet_;
  std::vector<Report> reports_;
};

// Occurrence counts n*pi over the report alphabet; counts is indexed by mask.
struct EmpiricalCounts {
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;
};

// One semantic-weight entry: importance of conveying that x lies in `group`.
struct WeightEntry {
  Report x;
  std::vector<Report> group;  // sorted by mask, always contains x
  Rational weight;            // nonnegative, finite
};

// Sparse map (report, report-subset) -> nonnegative weight. At most one entry
// per (x, group) pair; entries with x outside the group are rejected.
class SemanticWeights {
public:
  SemanticWeights() = default;

  void add(Report x, std::vector<Report> group, Rational weight);

  const std::vector<WeightEntry>& entries() const { return entries_; }
  std::span<const WeightEntry> entries_for(Report x) const;
  bool empty() const { return entries_.empty(); }
  Rational total_weight() const;

  // u(x, {x}) = 1 for every report.
  static SemanticWeights identification(const Alphabet& alphabet);
  // One group per event e with positive weight: all reports agreeing with x
  // on event e.
  static SemanticWeights per_event(const Alphabet& alphabet,
                                   const std::vector<double>& event_weights);

private:
  std::vector<WeightEntry> entries_;  // sorted by (x, group)
};

// All C(v, j) truthful length-j summaries of x, ascending by events mask.
std::vector<Summary> consistent_summaries(const Alphabet& alphabet, Report x, unsigned j);

// X(y): every report agreeing with y on its selected events, ascending by mask.
std::vector<Report> consistent_reports(const Alphabet& alphabet, const Summary& y);

EmpiricalCounts empirical(const ReportSequence& sequence);

// |T^n|: number of sequences sharing the empirical distribution (multinomial).
BigInt type_class_size(const EmpiricalCounts& counts);

// |P_n(X)| = binomial(n + |X| - 1, |X| - 1).
BigInt num_types(std::uint64_t n, std::uint64_t alphabet_size);

// Enumerates every count vector of total n over `alphabet_size` symbols.
void for_each_type(std::uint64_t n, std::uint32_t alphabet_size,
                   const std::function<void(const std::vector<std::uint64_t>&)>& fn);

void validate_report(const Alphabet& alphabet, Report x);
void validate_summary(const Alphabet& alphabet, const Summary& y);

}  // namespace semsum
