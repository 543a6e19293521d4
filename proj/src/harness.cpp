#include "semsum/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "semsum/rng.hpp"

namespace semsum {

namespace {

constexpr std::uint64_t kMcStreams = 64;

// Stationary per-stream accumulators merged by summation, so the estimate is
// identical for any worker layout.
struct StreamStats {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t count = 0;
};

Report draw_report(const std::vector<double>& cumulative, CounterRng& rng) {
  const double ticket = rng.next_unit();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), ticket);
  const auto idx = std::min<std::size_t>(it - cumulative.begin(), cumulative.size() - 1);
  return Report{static_cast<std::uint32_t>(idx)};
}

// Weighted interpretation loss of summary y for the current report under p.
double score_summary(const std::vector<double>& p, const SemanticWeights& u, Report current,
                     const Summary& y) {
  const auto entries = u.entries_for(current);
  if (entries.empty()) return 0.0;
  double denom = 0.0;
  for (std::uint32_t m = 0; m < p.size(); ++m)
    if (y.consistent_with(Report{m})) denom += p[m];
  double loss = 0.0;
  for (const WeightEntry& e : entries) {
    double inside = 0.0;
    for (Report r : e.group)
      if (y.consistent_with(r)) inside += p[r.mask];
    loss += to_double(e.weight) * (1.0 - inside / denom);
  }
  return loss;
}

}  // namespace

bool RunReport::all_pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const MetricRow& r) { return r.pass; });
}

McResult mc_uniform_avg_loss(unsigned v, unsigned j, std::uint64_t n, const SemanticWeights& u,
                             std::uint64_t samples, std::uint64_t seed,
                             const SequencePolicy* policy) {
  if (samples < 1000) throw std::domain_error("mc_uniform_avg_loss requires samples >= 1000");
  const Alphabet alphabet(v);
  if (j < 1 || j > v) throw std::domain_error("summary length j must satisfy 1 <= j <= v");
  if (n < 1) throw std::domain_error("sequence length n must be >= 1");
  const std::uint32_t size = alphabet.report_count();

  std::vector<StreamStats> stats(kMcStreams);
  auto run_stream = [&](std::uint64_t stream) {
    const std::uint64_t quota =
        samples / kMcStreams + (stream < samples % kMcStreams ? 1 : 0);
    CounterRng rng(seed, stream + 1);
    StreamStats local;
    std::vector<double> cumulative(size);
    std::vector<Report> reports(n);
    for (std::uint64_t s = 0; s < quota; ++s) {
      const std::vector<double> p = simplex_uniform_sample(size, rng);
      double acc = 0.0;
      for (std::uint32_t m = 0; m < size; ++m) cumulative[m] = acc += p[m];
      for (Report& r : reports) r = draw_report(cumulative, rng);
      ReportSequence sequence(alphabet, reports);
      const Summary y =
          policy ? (*policy)(sequence) : universal_summarize(sequence, j, u);
      const double loss = score_summary(p, u, sequence.current(), y);
      local.sum += loss;
      local.sum_sq += loss * loss;
      ++local.count;
    }
    stats[stream] = local;
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), kMcStreams));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::uint64_t stream = w; stream < kMcStreams; stream += workers)
        run_stream(stream);
    });
  for (std::thread& t : pool) t.join();

  double sum = 0.0, sum_sq = 0.0;
  std::uint64_t count = 0;
  for (const StreamStats& s : stats) {
    sum += s.sum;
    sum_sq += s.sum_sq;
    count += s.count;
  }
  const double mean = sum / static_cast<double>(count);
  const double variance =
      std::max(0.0, sum_sq / static_cast<double>(count) - mean * mean);
  const double std_error = std::sqrt(variance / static_cast<double>(count - 1));
  return {mean, std_error, count, seed};
}

std::vector<ConvergenceRow> convergence_experiment(unsigned v, unsigned j,
                                                   const RealDistribution& p,
                                                   const SemanticWeights& u,
                                                   std::span<const std::uint64_t> n_grid,
                                                   unsigned trials, std::uint64_t seed) {
  if (trials < 1) throw std::domain_error("convergence_experiment requires trials >= 1");
  if (!std::is_sorted(n_grid.begin(), n_grid.end()))
    throw std::domain_error("n_grid must be ascending");
  const Alphabet& alphabet = p.alphabet();
  const std::uint32_t size = alphabet.report_count();

  std::vector<double> cumulative(size);
  double acc = 0.0;
  for (std::uint32_t m = 0; m < size; ++m) cumulative[m] = acc += p[Report{m}];

  const double known_min = min_semantic_loss(p, j, u);
  std::vector<ConvergenceRow> table;
  table.reserve(n_grid.size());
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::uint64_t n = n_grid[gi];
    double total = 0.0;
    for (unsigned t = 0; t < trials; ++t) {
      CounterRng rng(seed, (static_cast<std::uint64_t>(gi) << 32) | t);
      std::vector<Report> reports(n);
      for (Report& r : reports) r = draw_report(cumulative, rng);
      ReportSequence sequence(alphabet, std::move(reports));
      const Summary y = universal_summarize(sequence, j, u);
      total += score_summary(p.probs(), u, sequence.current(), y);
    }
    const double mean = total / trials;
    table.push_back({n, mean, known_min, mean - known_min});
  }
  return table;
}

std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_rows_csv(std::ostream& out, const RunReport& report) {
  out << "name,value,bound,pass,seed\r\n";
  for (const MetricRow& row : report.rows) {
    std::ostringstream value, bound;
    value.precision(17);
    bound.precision(17);
    value << row.value;
    bound << row.bound;
    out << csv_field(row.name) << ',' << value.str() << ',' << bound.str() << ','
        << (row.pass ? "true" : "false") << ',' << row.seed << "\r\n";
  }
}

void write_report_json(std::ostream& out, const RunReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const MetricRow& row : report.rows)
    rows.push_back({{"name", row.name},
                    {"value", row.value},
                    {"bound", row.bound},
                    {"pass", row.pass},
                    {"seed", row.seed}});
  nlohmann::json doc{{"label", report.label},
                     {"seed", report.seed},
                     {"wall_time_s", report.wall_time_s},
                     {"all_pass", report.all_pass()},
                     {"rows", rows}};
  if (report.scenario)
    doc["scenario"] = nlohmann::json::parse(scenario_to_json_text(*report.scenario));
  else
    doc["scenario"] = nullptr;
  out << doc.dump(2) << '\n';
}

std::uint64_t enum_cap_from_env() {
  if (const char* raw = std::getenv("SEMSUM_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || cap == 0)
      throw config_error("SEMSUM_ENUM_CAP must be a positive integer");
    return cap;
  }
  return kDefaultEnumCap;
}

namespace {

struct WeatherFixture {
  Alphabet alphabet{7};
  std::vector<std::string> names{"High winds", "High UV index", "Heavy rain", "Snow",
                                 "Low visibility", "Smog", "Typhoon"};
  // Illustrative numbers, chosen by hand: each non-typhoon event is
  // conditionally independent given the typhoon bit.
  double p_typhoon = 0.15;
  // P(event occurs | typhoon), P(event occurs | no typhoon); typhoon row unused.
  std::vector<std::pair<double, double>> conditionals{
      {0.95, 0.20},  // high winds
      {0.30, 0.50},  // high uv
      {0.90, 0.25},  // heavy rain
      {0.02, 0.10},  // snow
      {0.85, 0.20},  // low visibility
      {0.10, 0.35},  // smog
      {0.00, 0.00},
  };
  std::vector<double> event_weights{0.5, 2.0, 0.5, 0.8, 0.4, 1.2, 4.0};

  RealDistribution distribution() const {
    const std::uint32_t size = alphabet.report_count();
    std::vector<double> probs(size, 0.0);
    const std::uint32_t typhoon_bit = 1u << 6;
    for (std::uint32_t mask = 0; mask < size; ++mask) {
      const bool typhoon = mask & typhoon_bit;
      double p = typhoon ? p_typhoon : 1.0 - p_typhoon;
      for (unsigned e = 0; e < 6; ++e) {
        const double occurs = typhoon ? conditionals[e].first : conditionals[e].second;
        p *= (mask >> e) & 1 ? occurs : 1.0 - occurs;
      }
      probs[mask] = p;
    }
    return RealDistribution(alphabet, std::move(probs));
  }
};

void print_summary_lines(std::ostringstream& out, const WeatherFixture& fixture,
                         const Summary& y) {
  for (unsigned e = 0; e < fixture.alphabet.events(); ++e) {
    if (!((y.events >> e) & 1)) continue;
    out << "  " << fixture.names[e] << ": "
        << (((y.values >> e) & 1) ? "occurred" : "did not occur") << '\n';
  }
}

}  // namespace

std::string weather_demo() {
  const WeatherFixture fixture;
  const RealDistribution p = fixture.distribution();
  const SemanticWeights u = SemanticWeights::per_event(fixture.alphabet, fixture.event_weights);

  // winds, uv, rain, low visibility, typhoon on; snow, smog off.
  const Report report{0b1010111};

  std::ostringstream out;
  out << "Current report (v = 7 possible events):\n";
  for (unsigned e = 0; e < fixture.alphabet.events(); ++e)
    out << "  [" << (((report.mask >> e) & 1) ? 'x' : ' ') << "] " << fixture.names[e] << '\n';

  for (unsigned j : {2u, 3u}) {
    const Summary y = known_p_summarize(p, report, j, u);
    out << "\nKnown-distribution summary, j = " << j << ":\n";
    print_summary_lines(out, fixture, y);
  }

  // Universal pick after a short synthetic history drawn from the fixture.
  const std::uint32_t size = fixture.alphabet.report_count();
  std::vector<double> cumulative(size);
  double acc = 0.0;
  for (std::uint32_t m = 0; m < size; ++m) cumulative[m] = acc += p[Report{m}];
  CounterRng rng(20240101, 0);
  std::vector<Report> reports{report};
  for (int i = 0; i < 11; ++i) reports.push_back(draw_report(cumulative, rng));
  ReportSequence sequence(fixture.alphabet, std::move(reports));
  const Summary y = universal_summarize(sequence, 2, u);
  out << "\nUniversal summary after an 11-report history, j = 2:\n";
  print_summary_lines(out, fixture, y);
  return out.str();
}

}  // namespace semsum
