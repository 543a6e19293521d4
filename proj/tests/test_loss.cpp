#include <doctest.h>

#include <cmath>

#include "semsum/loss.hpp"
#include "semsum/rng.hpp"
#include "semsum/summarizers.hpp"

using namespace semsum;

namespace {

const Alphabet kA2(2);

RationalDistribution tenths() {
  return RationalDistribution(
      kA2, {Rational(1, 10), Rational(2, 10), Rational(3, 10), Rational(4, 10)});
}

}  // namespace

TEST_CASE("interpretation conditions p on the summary") {
  const auto uniform = RationalDistribution::uniform(kA2);
  const auto iu = interpretation(uniform, Summary{1, 1});
  CHECK(iu.probs == std::vector<Rational>{0, Rational(1, 2), 0, Rational(1, 2)});

  const auto it = interpretation(tenths(), Summary{1, 1});
  CHECK(it[Report{1}] == Rational(1, 3));
  CHECK(it[Report{3}] == Rational(2, 3));
  CHECK(it[Report{0}] == 0);

  const RationalDistribution degenerate(kA2, {1, 0, 0, 0});
  CHECK_THROWS_AS(interpretation(degenerate, Summary{1, 1}),
                  undefined_interpretation_error);
}

TEST_CASE("interpretation always normalizes") {
  CounterRng rng(21, 0);
  for (int i = 0; i < 30; ++i) {
    const Alphabet alphabet(1 + rng.next_u64() % 3);
    std::vector<std::uint64_t> ticks(alphabet.report_count());
    std::uint64_t sum = 0;
    for (auto& t : ticks) sum += t = 1 + rng.next_u64() % 9;
    std::vector<Rational> probs;
    for (auto t : ticks) probs.emplace_back(t, sum);
    const RationalDistribution p(alphabet, std::move(probs));

    const Report x{static_cast<std::uint32_t>(rng.next_u64() % alphabet.report_count())};
    const unsigned j = 1 + rng.next_u64() % alphabet.events();
    for (const Summary& y : consistent_summaries(alphabet, x, j)) {
      Rational total = 0;
      for (const Rational& q : interpretation(p, y).probs) total += q;
      CHECK(total == 1);
    }
  }
}

TEST_CASE("set_loss is the residual interpretation mass") {
  const auto interp = interpretation(tenths(), Summary{1, 1});  // (0, 1/3, 0, 2/3)

  const std::vector<Report> superset{Report{1}, Report{3}};
  CHECK(set_loss<Rational>(superset, interp) == 0);

  const std::vector<Report> disjoint{Report{0}, Report{2}};
  CHECK(set_loss<Rational>(disjoint, interp) == 1);

  const std::vector<Report> singleton{Report{3}};
  CHECK(set_loss<Rational>(singleton, interp) == Rational(1, 3));

  // brute-force oracle: scan distributions supported on W on a fine grid
  const auto scan = [&](const std::vector<Report>& group) {
    double best = 2.0;
    const int g = 400;
    std::vector<double> ticks(group.size(), 0.0);
    const auto dist_of = [&](const std::vector<double>& q) {
      double acc = 0.0;
      for (std::size_t r = 0; r < group.size(); ++r)
        acc += std::abs(q[r] - to_double(interp[group[r]]));
      double outside = 1.0;
      for (Report r : group) outside -= to_double(interp[r]);
      return (acc + outside) / 2.0;
    };
    if (group.size() == 1) return dist_of({1.0});
    for (int k = 0; k <= g; ++k) best = std::min(best, dist_of({k / double(g), 1.0 - k / double(g)}));
    return best;
  };
  CHECK(scan(singleton) == doctest::Approx(1.0 / 3.0));
  CHECK(scan(superset) == doctest::Approx(0.0).epsilon(1e-9));

  // enlarging W never increases the loss
  CHECK(set_loss<Rational>(superset, interp) <= set_loss<Rational>(singleton, interp));
}

TEST_CASE("semantic loss of a deterministic policy") {
  const auto p = tenths();
  const auto u = SemanticWeights::identification(kA2);

  // summaries chosen to maximize i_y(x) per report
  DeterministicPolicy argmax_policy{Summary{2, 0}, Summary{2, 0}, Summary{1, 0}, Summary{1, 1}};
  CHECK(semantic_loss(p, argmax_policy, u) == Rational(41, 120));

  // full summaries are lossless for any weights
  DeterministicPolicy full;
  for (std::uint32_t m = 0; m < 4; ++m) full.push_back(Summary{3, m});
  CHECK(semantic_loss(p, full, u) == 0);
  CHECK(semantic_loss(p, full, SemanticWeights{}) == 0);
  CHECK(semantic_loss(p, argmax_policy, SemanticWeights{}) == 0);

  DeterministicPolicy inconsistent{Summary{1, 1}, Summary{1, 1}, Summary{1, 1}, Summary{1, 1}};
  CHECK_THROWS_AS(semantic_loss(p, inconsistent, u), std::domain_error);
}

TEST_CASE("definitional loss oracle agrees with the closed form") {
  const auto p = tenths();
  const auto u = SemanticWeights::identification(kA2);
  DeterministicPolicy policy{Summary{2, 0}, Summary{2, 0}, Summary{1, 0}, Summary{1, 1}};

  CHECK(semantic_loss_definitional(p, policy, u, 200) == semantic_loss(p, policy, u));
  CHECK(semantic_loss_definitional(p, policy, SemanticWeights{}, 50) == 0);
  CHECK_THROWS_AS(semantic_loss_definitional(p, policy, u, 5), std::domain_error);

  CounterRng rng(31, 0);
  for (int i = 0; i < 10; ++i) {
    const Alphabet alphabet(1 + rng.next_u64() % 3);
    std::vector<std::uint64_t> ticks(alphabet.report_count());
    std::uint64_t sum = 0;
    for (auto& t : ticks) sum += t = 1 + rng.next_u64() % 9;
    std::vector<Rational> probs;
    for (auto t : ticks) probs.emplace_back(t, sum);
    const RationalDistribution dist(alphabet, std::move(probs));

    SemanticWeights weights;
    for (int e = 0; e < 4; ++e) {
      const Report x{static_cast<std::uint32_t>(rng.next_u64() % alphabet.report_count())};
      std::vector<Report> group{x,
                                Report{static_cast<std::uint32_t>(rng.next_u64() %
                                                                  alphabet.report_count())}};
      try {
        weights.add(x, group, Rational(1 + rng.next_u64() % 5, 1 + rng.next_u64() % 5));
      } catch (const std::invalid_argument&) {
      }
    }

    DeterministicPolicy rando;
    const unsigned j = 1 + rng.next_u64() % alphabet.events();
    for (std::uint32_t m = 0; m < alphabet.report_count(); ++m) {
      const auto candidates = consistent_summaries(alphabet, Report{m}, j);
      rando.push_back(candidates[rng.next_u64() % candidates.size()]);
    }

    const Rational closed = semantic_loss(dist, rando, weights);
    const Rational oracle = semantic_loss_definitional(dist, rando, weights, 120);
    CHECK(closed == oracle);
    CHECK(std::abs(to_double(closed - oracle)) <= 2.0 * alphabet.report_count() / 120.0);
  }
}

TEST_CASE("semantic loss is linear in the weights") {
  const auto p = tenths();
  DeterministicPolicy policy{Summary{1, 0}, Summary{1, 1}, Summary{2, 2}, Summary{2, 2}};

  SemanticWeights u1, u2, both;
  u1.add(Report{1}, {Report{1}, Report{3}}, Rational(2, 3));
  u2.add(Report{2}, {Report{2}}, Rational(5, 4));
  u2.add(Report{3}, {Report{0}, Report{3}}, Rational(1, 7));
  for (const auto& e : u1.entries()) both.add(e.x, e.group, e.weight);
  for (const auto& e : u2.entries()) both.add(e.x, e.group, e.weight);

  CHECK(semantic_loss(p, policy, both) ==
        semantic_loss(p, policy, u1) + semantic_loss(p, policy, u2));
}

TEST_CASE("pointwise f-divergence closed form") {
  RealDistribution pd(kA2, {0.1, 0.2, 0.3, 0.4});
  const auto interp = interpretation(pd, Summary{1, 1});  // i(3) = 2/3
  const Report x{3};

  const auto tv = f_divergence_point(generators::total_variation(), x, interp);
  CHECK_FALSE(tv.infinite);
  CHECK(tv.value == doctest::Approx(1.0 - 2.0 / 3.0));

  const std::vector<Report> singleton{x};
  CHECK(tv.value == doctest::Approx(set_loss<double>(singleton, interp)));

  const auto kl_val = f_divergence_point(generators::kl(), x, interp);
  CHECK(kl_val.value == doctest::Approx(-std::log(2.0 / 3.0)));

  const auto chi = f_divergence_point(generators::chi_square(), x, interp);
  CHECK(chi.value == doctest::Approx((1.0 - 2.0 / 3.0) / (2.0 / 3.0)));

  // reverse KL blows up whenever the interpretation spreads past x
  const auto rkl = f_divergence_point(generators::reverse_kl(), x, interp);
  CHECK(rkl.infinite);

  // point-mass interpretation: every normalized generator scores zero
  RealDistribution point(kA2, {0.0, 0.0, 0.0, 1.0});
  const auto exact = interpretation(point, Summary{1, 1});
  for (const auto& gen : {generators::total_variation(), generators::kl(),
                          generators::reverse_kl(), generators::chi_square()}) {
    const auto d = f_divergence_point(gen, x, exact);
    CHECK_FALSE(d.infinite);
    CHECK(d.value == doctest::Approx(0.0));
  }

  // i(x) = 0: total variation tops out at 1, kl diverges
  const auto at_zero = f_divergence_point(generators::total_variation(), Report{1}, exact);
  CHECK(at_zero.value == doctest::Approx(1.0));
  CHECK(f_divergence_point(generators::kl(), Report{1}, exact).infinite);
}

TEST_CASE("f-divergence point is monotone in the interpretation mass") {
  CounterRng rng(41, 0);
  const auto gens = {generators::total_variation(), generators::kl(),
                     generators::reverse_kl(), generators::chi_square()};
  for (const auto& gen : gens) CHECK(convex_on_grid(gen.f));
  CHECK_FALSE(convex_on_grid([](double t) { return std::sin(3.0 * t); }));

  for (int i = 0; i < 60; ++i) {
    const Alphabet alphabet(2);
    std::vector<double> probs(4);
    double sum = 0.0;
    for (double& q : probs) sum += q = 0.05 + rng.next_unit();
    for (double& q : probs) q /= sum;
    const RealDistribution dist(alphabet, std::move(probs));
    const Report x{static_cast<std::uint32_t>(rng.next_u64() % 4)};

    const auto narrow = interpretation(dist, consistent_summaries(alphabet, x, 2)[0]);
    const auto wide = interpretation(dist, consistent_summaries(alphabet, x, 1)[0]);
    REQUIRE(narrow[x] >= wide[x]);

    for (const auto& gen : gens) {
      const auto d_narrow = f_divergence_point(gen, x, narrow);
      const auto d_wide = f_divergence_point(gen, x, wide);
      const bool ok =
          d_wide.infinite || (!d_narrow.infinite && d_narrow.value <= d_wide.value + 1e-12);
      CHECK(ok);
    }
  }
}
