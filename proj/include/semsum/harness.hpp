#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semsum/distribution.hpp"
#include "semsum/model.hpp"
#include "semsum/summarizers.hpp"

namespace semsum {

struct DistributionSpec {
  enum class Kind { kUniform, kExplicit, kProduct };
  Kind kind = Kind::kUniform;
  std::vector<double> probs;      // explicit: one entry per report mask
  std::vector<double> marginals;  // product: per-event occurrence probability
};

struct ExplicitWeight {
  std::uint32_t x = 0;
  std::vector<std::uint32_t> group;
  double weight = 0.0;
};

struct WeightsSpec {
  enum class Kind { kIdentification, kPerEvent, kExplicit };
  Kind kind = Kind::kIdentification;
  std::vector<double> event_weights;
  std::vector<ExplicitWeight> entries;
};

// One experiment configuration; serialized as a versioned JSON document.
struct Scenario {
  int schema = 1;
  unsigned v = 2;
  unsigned j = 1;
  std::uint64_t n = 1;
  DistributionSpec distribution;
  WeightsSpec weights;
  std::string experiment = "verify";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  double tol = 1e-9;
};

Scenario scenario_from_json_text(const std::string& text);
Scenario scenario_from_file(const std::string& path);
std::string scenario_to_json_text(const Scenario& scenario);

RealDistribution build_distribution(const Alphabet& alphabet, const DistributionSpec& spec);
SemanticWeights build_weights(const Alphabet& alphabet, const WeightsSpec& spec);

// One verification metric: the checked value, the bound it is held to, and
// the seed that reproduces it (0 for deterministic rows).
struct MetricRow {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool pass = true;
  std::uint64_t seed = 0;
};

struct RunReport {
  std::string label;
  std::optional<Scenario> scenario;
  std::vector<MetricRow> rows;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;

  bool all_pass() const;
};

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo estimate of the uniform average semantic loss: p drawn uniform
// on the simplex, x^n i.i.d. p, the chosen summary scored by its weighted
// interpretation loss under the drawn p. Samples are split into fixed,
// independently seeded streams, so the estimate does not depend on the worker
// layout. Scores the universal policy unless another one is supplied.
McResult mc_uniform_avg_loss(unsigned v, unsigned j, std::uint64_t n, const SemanticWeights& u,
                             std::uint64_t samples, std::uint64_t seed,
                             const SequencePolicy* policy = nullptr);

struct ConvergenceRow {
  std::uint64_t n = 0;
  double mean_universal_loss = 0.0;
  double known_p_min = 0.0;
  double gap = 0.0;
};

// Mean loss of the universal summarizer under a fixed, known p, for each
// history length in n_grid, against the known-p minimum.
std::vector<ConvergenceRow> convergence_experiment(unsigned v, unsigned j,
                                                   const RealDistribution& p,
                                                   const SemanticWeights& u,
                                                   std::span<const std::uint64_t> n_grid,
                                                   unsigned trials, std::uint64_t seed);

enum class VerifyLevel { kQuick, kFull };

// Runs the whole verification suite and aggregates pass/fail rows.
RunReport verify_all(VerifyLevel level);

// Deterministic walkthrough on the 7-event weather alphabet.
std::string weather_demo();

std::string csv_field(const std::string& raw);
void write_rows_csv(std::ostream& out, const RunReport& report);
void write_report_json(std::ostream& out, const RunReport& report);

// SEMSUM_ENUM_CAP override, or the default cap.
std::uint64_t enum_cap_from_env();

}  // namespace semsum
