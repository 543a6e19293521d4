#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "semsum/harness.hpp"
#include "semsum/summarizers.hpp"

namespace {

using namespace semsum;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitResourceCap = 3;

struct Options {
  std::string config;
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool seed_given = false;
};

Scenario load_scenario(const Options& opts) {
  Scenario scenario = opts.config.empty() ? Scenario{} : scenario_from_file(opts.config);
  if (opts.seed_given) scenario.seed = opts.seed;
  return scenario;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw config_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
  std::unique_ptr<std::ofstream> file_;
};

std::string format_double(double value) {
  std::ostringstream out;
  out.precision(17);
  out << value;
  return out.str();
}

std::string format_rational(const Rational& value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

// metric/value pairs in the selected format.
void emit_pairs(std::ostream& out, const std::string& format,
                const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (format == "json") {
    nlohmann::json doc;
    for (const auto& [key, value] : pairs) doc[key] = value;
    out << doc.dump(2) << '\n';
    return;
  }
  out << "metric,value\r\n";
  for (const auto& [key, value] : pairs)
    out << csv_field(key) << ',' << csv_field(value) << "\r\n";
}

std::string describe_summary(const Summary& y, unsigned v) {
  std::ostringstream out;
  bool first = true;
  for (unsigned e = 0; e < v; ++e) {
    if (!((y.events >> e) & 1)) continue;
    if (!first) out << ' ';
    first = false;
    out << (e + 1) << '=' << (((y.values >> e) & 1) ? 1 : 0);
  }
  return out.str();
}

std::vector<Report> parse_history(const std::string& csv, const Alphabet& alphabet) {
  std::vector<Report> reports;
  std::stringstream stream(csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      const unsigned long mask = std::stoul(token);
      validate_report(alphabet, Report{static_cast<std::uint32_t>(mask)});
      reports.push_back(Report{static_cast<std::uint32_t>(mask)});
    } catch (const std::logic_error&) {
      throw config_error("bad report mask in history: " + token);
    }
  }
  if (reports.empty()) throw config_error("history must list at least one report mask");
  return reports;
}

int run_loss(const Options& opts, const Scenario& scenario) {
  const Alphabet alphabet(scenario.v);
  const auto p = build_distribution(alphabet, scenario.distribution);
  const auto u = build_weights(alphabet, scenario.weights);
  const double loss = min_semantic_loss(p, scenario.j, u);
  Output output(opts.out);
  emit_pairs(output.stream(), opts.format,
             {{"min_semantic_loss", format_double(loss)},
              {"v", std::to_string(scenario.v)},
              {"j", std::to_string(scenario.j)}});
  return kExitOk;
}

int run_summarize(const Options& opts, const Scenario& scenario, std::uint32_t report_mask) {
  const Alphabet alphabet(scenario.v);
  validate_report(alphabet, Report{report_mask});
  const auto p = build_distribution(alphabet, scenario.distribution);
  const auto u = build_weights(alphabet, scenario.weights);
  const Summary y = known_p_summarize(p, Report{report_mask}, scenario.j, u);

  double score = 0.0;
  const double denom = p.mass_consistent(y);
  for (const WeightEntry& e : u.entries_for(Report{report_mask})) {
    double inside = 0.0;
    for (Report r : e.group)
      if (y.consistent_with(r)) inside += p[r];
    score += to_double(e.weight) * (1.0 - inside / denom);
  }

  Output output(opts.out);
  emit_pairs(output.stream(), opts.format,
             {{"report_mask", std::to_string(report_mask)},
              {"summary_events_mask", std::to_string(y.events)},
              {"summary_values_mask", std::to_string(y.values)},
              {"summary", describe_summary(y, scenario.v)},
              {"loss_term", format_double(score)}});
  return kExitOk;
}

int run_universal(const Options& opts, const Scenario& scenario, const std::string& history) {
  const Alphabet alphabet(scenario.v);
  const auto u = build_weights(alphabet, scenario.weights);
  ReportSequence sequence(alphabet, parse_history(history, alphabet));
  const Summary y = universal_summarize(sequence, scenario.j, u);
  const Rational criterion = mu(sequence, scenario.j, u);

  Output output(opts.out);
  emit_pairs(output.stream(), opts.format,
             {{"current_report", std::to_string(sequence.current().mask)},
              {"n", std::to_string(sequence.size())},
              {"summary_events_mask", std::to_string(y.events)},
              {"summary_values_mask", std::to_string(y.values)},
              {"summary", describe_summary(y, scenario.v)},
              {"mu", format_rational(criterion)},
              {"mu_value", format_double(to_double(criterion))}});
  return kExitOk;
}

int run_avg_loss(const Options& opts, const Scenario& scenario) {
  const Alphabet alphabet(scenario.v);
  const auto u = build_weights(alphabet, scenario.weights);
  const auto report = min_uniform_avg_loss(scenario.n, alphabet, scenario.j, u, scenario.tol,
                                           enum_cap_from_env());
  Output output(opts.out);
  emit_pairs(output.stream(), opts.format,
             {{"exact_value", format_rational(report.exact_value)},
              {"exact_value_double", format_double(to_double(report.exact_value))},
              {"mu_sum", format_rational(report.mu_sum)},
              {"mu_sum_double", format_double(to_double(report.mu_sum))},
              {"lambda_gap", format_double(to_double(report.mu_sum - report.exact_value))},
              {"lambda_bound", format_double(report.lambda_bound)},
              {"u_star", format_double(report.u_star)}});
  return kExitOk;
}

int run_mc(const Options& opts, const Scenario& scenario) {
  const Alphabet alphabet(scenario.v);
  const auto u = build_weights(alphabet, scenario.weights);
  const McResult result = mc_uniform_avg_loss(scenario.v, scenario.j, scenario.n, u,
                                              scenario.samples, scenario.seed);
  Output output(opts.out);
  emit_pairs(output.stream(), opts.format,
             {{"estimate", format_double(result.estimate)},
              {"std_error", format_double(result.std_error)},
              {"samples", std::to_string(result.samples)},
              {"seed", std::to_string(result.seed)}});
  return kExitOk;
}

int run_converge(const Options& opts, const Scenario& scenario, const std::string& grid_csv,
                 unsigned trials) {
  const Alphabet alphabet(scenario.v);
  const auto p = build_distribution(alphabet, scenario.distribution);
  const auto u = build_weights(alphabet, scenario.weights);

  std::vector<std::uint64_t> grid;
  std::stringstream stream(grid_csv);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      grid.push_back(std::stoull(token));
    } catch (const std::logic_error&) {
      throw config_error("bad n-grid entry: " + token);
    }
  }
  if (grid.empty()) throw config_error("n-grid must list at least one length");

  const auto table =
      convergence_experiment(scenario.v, scenario.j, p, u, grid, trials, scenario.seed);
  Output output(opts.out);
  if (opts.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table)
      rows.push_back({{"n", row.n},
                      {"mean_universal_loss", row.mean_universal_loss},
                      {"known_p_min", row.known_p_min},
                      {"gap", row.gap}});
    output.stream() << nlohmann::json{{"seed", scenario.seed}, {"rows", rows}}.dump(2) << '\n';
  } else {
    output.stream() << "n,mean_universal_loss,known_p_min,gap\r\n";
    for (const auto& row : table)
      output.stream() << row.n << ',' << format_double(row.mean_universal_loss) << ','
                      << format_double(row.known_p_min) << ',' << format_double(row.gap)
                      << "\r\n";
  }
  return kExitOk;
}

int run_verify(const Options& opts, const std::string& level) {
  const RunReport report =
      verify_all(level == "quick" ? VerifyLevel::kQuick : VerifyLevel::kFull);
  Output output(opts.out);
  if (opts.format == "json")
    write_report_json(output.stream(), report);
  else
    write_rows_csv(output.stream(), report);
  for (const auto& row : report.rows)
    std::cerr << (row.pass ? "[PASS] " : "[FAIL] ") << row.name << '\n';
  std::cerr << (report.all_pass() ? "verification passed" : "verification FAILED") << " in "
            << report.wall_time_s << " s\n";
  return report.all_pass() ? kExitOk : kExitVerifyFailure;
}

int run_demo(const Options& opts) {
  Output output(opts.out);
  output.stream() << weather_demo();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extractive report summarization toolkit: semantic loss, optimal and "
               "universal summarizers, and a verification harness"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  app.add_option("--config", opts.config, "Scenario JSON file");
  auto* seed_opt = app.add_option("--seed", opts.seed, "Override the scenario seed");
  app.add_option("--out", opts.out, "Write output to this file instead of stdout");
  app.add_option("--format", opts.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* loss_cmd = app.add_subcommand("loss", "Minimum semantic loss for a known distribution");

  auto* summarize_cmd = app.add_subcommand(
      "summarize", "Optimal summary of one report under a known distribution");
  std::uint32_t report_mask = 0;
  summarize_cmd->add_option("--report", report_mask, "Report as an event bitmask")->required();

  auto* universal_cmd =
      app.add_subcommand("universal", "Universal summary from a report history");
  std::string history;
  universal_cmd
      ->add_option("--history", history,
                   "Comma-separated report masks; the first is the current report")
      ->required();

  auto* avg_cmd = app.add_subcommand(
      "avg-loss", "Exact uniform average loss of the universal summarizer, with its bracket");

  auto* mc_cmd =
      app.add_subcommand("mc", "Monte Carlo estimate of the uniform average semantic loss");

  auto* converge_cmd =
      app.add_subcommand("converge", "Universal-vs-known-p loss gap across history lengths");
  std::string n_grid = "1,10,100,1000";
  unsigned trials = 200;
  converge_cmd->add_option("--n-grid", n_grid, "Comma-separated ascending history lengths");
  converge_cmd->add_option("--trials", trials, "Trials per history length");

  auto* verify_cmd = app.add_subcommand("verify", "Run the verification suite");
  std::string level = "quick";
  verify_cmd->add_option("--level", level, "quick or full")
      ->check(CLI::IsMember({"quick", "full"}));

  auto* demo_cmd = app.add_subcommand("demo", "Weather-report walkthrough");

  // Scenario overrides available on the computing subcommands.
  Scenario overrides;
  bool v_set = false, j_set = false, n_set = false, samples_set = false, tol_set = false;
  for (auto* cmd : {loss_cmd, summarize_cmd, universal_cmd, avg_cmd, mc_cmd, converge_cmd}) {
    cmd->add_option("--v", overrides.v, "Number of possible events")
        ->each([&v_set](const std::string&) { v_set = true; });
    cmd->add_option("--j", overrides.j, "Summary length")
        ->each([&j_set](const std::string&) { j_set = true; });
    cmd->add_option("--n", overrides.n, "Sequence length (current report + history)")
        ->each([&n_set](const std::string&) { n_set = true; });
    cmd->add_option("--samples", overrides.samples, "Monte Carlo sample count")
        ->each([&samples_set](const std::string&) { samples_set = true; });
    cmd->add_option("--tol", overrides.tol, "Series truncation tolerance")
        ->each([&tol_set](const std::string&) { tol_set = true; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitBadConfig;
  }

  try {
    opts.seed_given = seed_opt->count() > 0;
    Scenario scenario = load_scenario(opts);
    if (v_set) scenario.v = overrides.v;
    if (j_set) scenario.j = overrides.j;
    if (n_set) scenario.n = overrides.n;
    if (samples_set) scenario.samples = overrides.samples;
    if (tol_set) scenario.tol = overrides.tol;

    if (loss_cmd->parsed()) return run_loss(opts, scenario);
    if (summarize_cmd->parsed()) return run_summarize(opts, scenario, report_mask);
    if (universal_cmd->parsed()) return run_universal(opts, scenario, history);
    if (avg_cmd->parsed()) return run_avg_loss(opts, scenario);
    if (mc_cmd->parsed()) return run_mc(opts, scenario);
    if (converge_cmd->parsed()) return run_converge(opts, scenario, n_grid, trials);
    if (verify_cmd->parsed()) return run_verify(opts, level);
    if (demo_cmd->parsed()) return run_demo(opts);
    return kExitBadConfig;
  } catch (const resource_error& err) {
    std::cerr << "resource cap: " << err.what() << '\n';
    return kExitResourceCap;
  } catch (const config_error& err) {
    std::cerr << "bad config: " << err.what() << '\n';
    return kExitBadConfig;
  } catch (const std::logic_error& err) {
    std::cerr << "bad config: " << err.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitBadConfig;
  }
}
