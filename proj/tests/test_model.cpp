#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "semsum/model.hpp"
#include "semsum/rng.hpp"

using namespace semsum;

TEST_CASE("alphabet bounds") {
  CHECK_THROWS_AS(Alphabet(0), std::invalid_argument);
  CHECK_THROWS_AS(Alphabet(17), std::invalid_argument);
  CHECK(Alphabet(16).report_count() == 65536);
  CHECK(Alphabet(3).event_mask() == 7);
}

TEST_CASE("consistent_summaries enumerates truthful extracts") {
  const Alphabet a2(2);
  const auto two = consistent_summaries(a2, Report{3}, 1);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == Summary{1, 1});
  CHECK(two[1] == Summary{2, 2});

  CHECK(consistent_summaries(Alphabet(7), Report{0}, 2).size() == 21);

  const auto full = consistent_summaries(Alphabet(3), Report{5}, 3);
  REQUIRE(full.size() == 1);
  CHECK(full[0] == Summary{7, 5});

  CHECK_THROWS_AS(consistent_summaries(a2, Report{0}, 0), std::domain_error);
  CHECK_THROWS_AS(consistent_summaries(a2, Report{0}, 3), std::domain_error);
}

TEST_CASE("consistent_summaries is ascending in events mask") {
  const Alphabet a4(4);
  for (unsigned j = 1; j <= 4; ++j) {
    const auto summaries = consistent_summaries(a4, Report{9}, j);
    for (std::size_t i = 1; i < summaries.size(); ++i)
      CHECK(summaries[i - 1].events < summaries[i].events);
  }
}

TEST_CASE("consistent_reports recovers the free bits") {
  const Alphabet a2(2);
  const auto reports = consistent_reports(a2, Summary{1, 1});
  REQUIRE(reports.size() == 2);
  CHECK(reports[0] == Report{1});
  CHECK(reports[1] == Report{3});

  CHECK(consistent_reports(Alphabet(3), Summary{7, 5}).size() == 1);

  const auto bit2_clear = consistent_reports(Alphabet(3), Summary{2, 0});
  REQUIRE(bit2_clear.size() == 4);
  for (Report r : bit2_clear) CHECK((r.mask & 2) == 0);
}

TEST_CASE("summaries and consistent reports agree") {
  CounterRng rng(11, 0);
  for (int i = 0; i < 40; ++i) {
    const Alphabet alphabet(1 + rng.next_u64() % 5);
    const Report x{static_cast<std::uint32_t>(rng.next_u64() % alphabet.report_count())};
    const unsigned j = 1 + rng.next_u64() % alphabet.events();
    for (const Summary& y : consistent_summaries(alphabet, x, j)) {
      const auto reports = consistent_reports(alphabet, y);
      CHECK(reports.size() == alphabet.report_count() >> j);
      CHECK(std::binary_search(reports.begin(), reports.end(), x));
    }
  }
}

TEST_CASE("value patterns of a fixed event subset partition the reports") {
  CounterRng rng(12, 0);
  for (int i = 0; i < 20; ++i) {
    const Alphabet alphabet(2 + rng.next_u64() % 3);
    const unsigned j = 1 + rng.next_u64() % alphabet.events();
    // pick the events subset from any summary of a random report
    const Report x{static_cast<std::uint32_t>(rng.next_u64() % alphabet.report_count())};
    const auto summaries = consistent_summaries(alphabet, x, j);
    const std::uint32_t events = summaries[rng.next_u64() % summaries.size()].events;

    std::set<std::uint32_t> seen;
    for (std::uint32_t values = 0; values <= events; ++values) {
      if ((values & ~events) != 0) continue;
      for (Report r : consistent_reports(alphabet, Summary{events, values}))
        CHECK(seen.insert(r.mask).second);
    }
    CHECK(seen.size() == alphabet.report_count());
  }
}

TEST_CASE("empirical counts") {
  const Alphabet a1(1);
  const auto counts = empirical(ReportSequence(a1, {Report{0}, Report{1}, Report{1}, Report{1}}));
  CHECK(counts.n == 4);
  CHECK(counts.counts[0] == 1);
  CHECK(counts.counts[1] == 3);

  const Alphabet a2(2);
  const auto constant =
      empirical(ReportSequence(a2, std::vector<Report>(5, Report{2})));
  CHECK(constant.counts[2] == 5);

  const auto single = empirical(ReportSequence(a2, {Report{3}}));
  CHECK(single.counts[3] == 1);
  CHECK(single.n == 1);

  CHECK_THROWS_AS(ReportSequence(a2, {}), std::invalid_argument);
  CHECK_THROWS_AS(ReportSequence(a2, {Report{4}}), std::invalid_argument);
}

TEST_CASE("type_class_size is the multinomial coefficient") {
  EmpiricalCounts counts{{1, 3}, 4};
  CHECK(type_class_size(counts) == 4);

  EmpiricalCounts constant{{0, 7}, 7};
  CHECK(type_class_size(constant) == 1);

  EmpiricalCounts split{{2, 2}, 4};
  CHECK(type_class_size(split) == 6);

  // enumeration oracle for the 2+2 split
  int matching = 0;
  for (unsigned seq = 0; seq < 16; ++seq) {
    int ones = 0;
    for (int b = 0; b < 4; ++b) ones += (seq >> b) & 1;
    if (ones == 2) ++matching;
  }
  CHECK(type_class_size(split) == matching);
}

TEST_CASE("num_types counts empirical distributions") {
  CHECK(num_types(2, 2) == 3);
  CHECK(num_types(1, 4) == 4);
  CHECK(num_types(3, 4) == 20);
  CHECK_THROWS_AS(num_types(0, 4), std::domain_error);

  // oracle: distinct count vectors over all 4^3 sequences
  std::set<std::vector<int>> vectors;
  for (unsigned s = 0; s < 64; ++s) {
    std::vector<int> counts(4, 0);
    ++counts[s & 3];
    ++counts[(s >> 2) & 3];
    ++counts[(s >> 4) & 3];
    vectors.insert(counts);
  }
  CHECK(num_types(3, 4) == vectors.size());

  // for_each_type visits each exactly once
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint32_t size = 2; size <= 8; size += 3) {
      std::uint64_t visited = 0;
      for_each_type(n, size, [&](const std::vector<std::uint64_t>& counts) {
        std::uint64_t total = 0;
        for (auto c : counts) total += c;
        CHECK(total == n);
        ++visited;
      });
      CHECK(num_types(n, size) == visited);
    }
  }
}

TEST_CASE("type identities on small instances") {
  // sum over types of rho(a)/|P_n| = 1/|X|
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint32_t size = 2; size <= 8; size += 2) {
      const BigInt p_n = num_types(n, size);
      std::vector<Rational> mass(size, Rational(0));
      for_each_type(n, size, [&](const std::vector<std::uint64_t>& counts) {
        for (std::uint32_t a = 0; a < size; ++a)
          mass[a] += Rational(BigInt(counts[a]), BigInt(n) * p_n);
      });
      for (std::uint32_t a = 0; a < size; ++a) CHECK(mass[a] == Rational(1, size));
    }
  }

  // sum over sequences of 1/(|T| |P_n|) = 1, and the first-symbol slice
  for (std::uint32_t size : {2u, 4u}) {
    for (std::uint64_t n = 1; n <= 4; ++n) {
      const BigInt p_n = num_types(n, size);
      Rational normalization = 0;
      std::vector<std::uint64_t> symbols(n, 0);
      std::map<std::vector<std::uint64_t>, std::vector<std::uint64_t>> first_by_type;
      while (true) {
        std::vector<std::uint64_t> counts(size, 0);
        for (auto s : symbols) ++counts[s];
        EmpiricalCounts ec{counts, n};
        normalization += Rational(BigInt(1), type_class_size(ec) * p_n);
        auto& firsts = first_by_type[counts];
        firsts.resize(size, 0);
        ++firsts[symbols[0]];
        std::size_t pos = 0;
        while (pos < n && ++symbols[pos] == size) symbols[pos++] = 0;
        if (pos == n) break;
      }
      CHECK(normalization == 1);
      for (const auto& [counts, firsts] : first_by_type) {
        EmpiricalCounts ec{counts, n};
        const BigInt t_size = type_class_size(ec);
        for (std::uint32_t a = 0; a < size; ++a)
          CHECK(Rational(BigInt(firsts[a]), t_size) == Rational(counts[a], n));
      }
    }
  }
}

TEST_CASE("semantic weights validation") {
  const Alphabet a2(2);
  SemanticWeights u;
  CHECK_THROWS_AS(u.add(Report{0}, {Report{1}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(u.add(Report{0}, {Report{0}}, -1), std::invalid_argument);
  u.add(Report{0}, {Report{0}, Report{1}}, Rational(1, 2));
  CHECK_THROWS_AS(u.add(Report{0}, {Report{1}, Report{0}}, 1), std::invalid_argument);
  CHECK(u.entries_for(Report{0}).size() == 1);
  CHECK(u.entries_for(Report{1}).empty());

  const auto id = SemanticWeights::identification(a2);
  CHECK(id.entries().size() == 4);
  CHECK(id.total_weight() == 4);

  const auto per_event = SemanticWeights::per_event(a2, {1.0, 0.0});
  CHECK(per_event.entries().size() == 4);  // zero-weight events are dropped
  for (const auto& e : per_event.entries()) CHECK(e.group.size() == 2);
}
