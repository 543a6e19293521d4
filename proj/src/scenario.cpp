#include <fstream>
#include <sstream>

#include <json.hpp>

#include "semsum/harness.hpp"

namespace semsum {

namespace {

using nlohmann::json;

[[noreturn]] void bad_config(const std::string& message) { throw config_error(message); }

DistributionSpec parse_distribution(const json& node) {
  DistributionSpec spec;
  if (!node.is_object() || !node.contains("kind")) bad_config("distribution needs a kind");
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "uniform") {
    spec.kind = DistributionSpec::Kind::kUniform;
  } else if (kind == "explicit") {
    spec.kind = DistributionSpec::Kind::kExplicit;
    if (!node.contains("probs")) bad_config("explicit distribution needs probs");
    spec.probs = node.at("probs").get<std::vector<double>>();
  } else if (kind == "product") {
    spec.kind = DistributionSpec::Kind::kProduct;
    if (!node.contains("marginals")) bad_config("product distribution needs marginals");
    spec.marginals = node.at("marginals").get<std::vector<double>>();
  } else {
    bad_config("unknown distribution kind: " + kind);
  }
  return spec;
}

WeightsSpec parse_weights(const json& node) {
  WeightsSpec spec;
  if (!node.is_object() || !node.contains("kind")) bad_config("weights needs a kind");
  const std::string kind = node.at("kind").get<std::string>();
  if (kind == "identification") {
    spec.kind = WeightsSpec::Kind::kIdentification;
  } else if (kind == "per-event") {
    spec.kind = WeightsSpec::Kind::kPerEvent;
    if (!node.contains("weights")) bad_config("per-event weights needs a weights array");
    spec.event_weights = node.at("weights").get<std::vector<double>>();
  } else if (kind == "explicit") {
    spec.kind = WeightsSpec::Kind::kExplicit;
    if (!node.contains("entries")) bad_config("explicit weights needs entries");
    for (const json& e : node.at("entries")) {
      ExplicitWeight w;
      w.x = e.at("x").get<std::uint32_t>();
      w.group = e.at("W").get<std::vector<std::uint32_t>>();
      w.weight = e.at("weight").get<double>();
      spec.entries.push_back(std::move(w));
    }
  } else {
    bad_config("unknown weights kind: " + kind);
  }
  return spec;
}

json distribution_to_json(const DistributionSpec& spec) {
  switch (spec.kind) {
    case DistributionSpec::Kind::kUniform:
      return {{"kind", "uniform"}};
    case DistributionSpec::Kind::kExplicit:
      return {{"kind", "explicit"}, {"probs", spec.probs}};
    case DistributionSpec::Kind::kProduct:
      return {{"kind", "product"}, {"marginals", spec.marginals}};
  }
  return {};
}

json weights_to_json(const WeightsSpec& spec) {
  switch (spec.kind) {
    case WeightsSpec::Kind::kIdentification:
      return {{"kind", "identification"}};
    case WeightsSpec::Kind::kPerEvent:
      return {{"kind", "per-event"}, {"weights", spec.event_weights}};
    case WeightsSpec::Kind::kExplicit: {
      json entries = json::array();
      for (const ExplicitWeight& e : spec.entries)
        entries.push_back({{"x", e.x}, {"W", e.group}, {"weight", e.weight}});
      return {{"kind", "explicit"}, {"entries", entries}};
    }
  }
  return {};
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    bad_config(std::string("scenario is not valid JSON: ") + err.what());
  }
  try {
    Scenario s;
    s.schema = doc.value("schema", 1);
    if (s.schema != 1) bad_config("unsupported scenario schema version");
    s.v = doc.at("v").get<unsigned>();
    s.j = doc.at("j").get<unsigned>();
    s.n = doc.value("n", std::uint64_t{1});
    if (doc.contains("distribution")) s.distribution = parse_distribution(doc.at("distribution"));
    if (doc.contains("weights")) s.weights = parse_weights(doc.at("weights"));
    s.experiment = doc.value("experiment", std::string("verify"));
    s.samples = doc.value("samples", std::uint64_t{100000});
    s.seed = doc.value("seed", std::uint64_t{1});
    s.tol = doc.value("tol", 1e-9);
    return s;
  } catch (const json::exception& err) {
    bad_config(std::string("malformed scenario: ") + err.what());
  }
}

Scenario scenario_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_config("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return scenario_from_json_text(buffer.str());
}

std::string scenario_to_json_text(const Scenario& scenario) {
  json doc{{"schema", scenario.schema},
           {"v", scenario.v},
           {"j", scenario.j},
           {"n", scenario.n},
           {"distribution", distribution_to_json(scenario.distribution)},
           {"weights", weights_to_json(scenario.weights)},
           {"experiment", scenario.experiment},
           {"samples", scenario.samples},
           {"seed", scenario.seed},
           {"tol", scenario.tol}};
  return doc.dump(2);
}

RealDistribution build_distribution(const Alphabet& alphabet, const DistributionSpec& spec) {
  const std::uint32_t size = alphabet.report_count();
  switch (spec.kind) {
    case DistributionSpec::Kind::kUniform:
      return RealDistribution::uniform(alphabet);
    case DistributionSpec::Kind::kExplicit: {
      if (spec.probs.size() != size)
        throw config_error("explicit distribution needs exactly 2^v probabilities");
      double sum = 0.0;
      for (double p : spec.probs) {
        if (p < 0.0) throw config_error("probabilities must be nonnegative");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw config_error("explicit distribution must sum to 1 within 1e-9");
      std::vector<double> probs = spec.probs;
      for (double& p : probs) p /= sum;
      return RealDistribution(alphabet, std::move(probs));
    }
    case DistributionSpec::Kind::kProduct: {
      if (spec.marginals.size() != alphabet.events())
        throw config_error("product distribution needs one marginal per event");
      for (double m : spec.marginals)
        if (m < 0.0 || m > 1.0) throw config_error("marginals must lie in [0, 1]");
      std::vector<double> probs(size, 1.0);
      for (std::uint32_t mask = 0; mask < size; ++mask)
        for (unsigned e = 0; e < alphabet.events(); ++e)
          probs[mask] *= (mask >> e) & 1 ? spec.marginals[e] : 1.0 - spec.marginals[e];
      return RealDistribution(alphabet, std::move(probs));
    }
  }
  throw config_error("unhandled distribution kind");
}

SemanticWeights build_weights(const Alphabet& alphabet, const WeightsSpec& spec) {
  switch (spec.kind) {
    case WeightsSpec::Kind::kIdentification:
      return SemanticWeights::identification(alphabet);
    case WeightsSpec::Kind::kPerEvent:
      if (spec.event_weights.size() != alphabet.events())
        throw config_error("per-event weights need one weight per event");
      return SemanticWeights::per_event(alphabet, spec.event_weights);
    case WeightsSpec::Kind::kExplicit: {
      SemanticWeights u;
      for (const ExplicitWeight& e : spec.entries) {
        validate_report(alphabet, Report{e.x});
        std::vector<Report> group;
        group.reserve(e.group.size());
        for (std::uint32_t m : e.group) {
          validate_report(alphabet, Report{m});
          group.push_back(Report{m});
        }
        try {
          u.add(Report{e.x}, std::move(group), Rational(e.weight));
        } catch (const std::invalid_argument& err) {
          throw config_error(std::string("bad weight entry: ") + err.what());
        }
      }
      return u;
    }
  }
  throw config_error("unhandled weights kind");
}

}  // namespace semsum
