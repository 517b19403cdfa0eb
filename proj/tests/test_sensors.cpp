#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "memeflow/graph.hpp"
#include "memeflow/kshell.hpp"
#include "memeflow/sensors.hpp"

using namespace memeflow;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// direct pmf-sum oracle, fine for small n
double oracle_upper_tail(int n, int x, double p) {
  double tail = 0.0;
  for (int i = std::max(x, 0); i <= n; ++i)
    tail += factorial(n) / (factorial(i) * factorial(n - i)) *
            std::pow(p, i) * std::pow(1.0 - p, n - i);
  return tail;
}

MemeTrajectory traj_of(std::string id,
                       std::vector<std::pair<double, std::string>> events) {
  MemeTrajectory t;
  t.meme_id = std::move(id);
  t.events = std::move(events);
  return t;
}

// One blog ("hub") posts at t=0 on every meme; `others` blogs post late.
std::vector<MemeTrajectory> hub_corpus(int n_memes, int others) {
  std::vector<MemeTrajectory> corpus;
  for (int m = 0; m < n_memes; ++m) {
    MemeTrajectory t;
    t.meme_id = "meme" + std::to_string(100 + m);
    t.events.emplace_back(0.0, "hub");
    for (int b = 0; b < others; ++b)
      t.events.emplace_back(50.0 + b, "late" + std::to_string(b));
    t.events.emplace_back(100.0, "closer");
    corpus.push_back(std::move(t));
  }
  return corpus;
}

}  // namespace

TEST_CASE("binomial tails") {
  SUBCASE("matches a direct pmf-sum oracle") {
    for (int n : {1, 5, 10, 25})
      for (double p : {0.05, 0.3, 0.5, 0.9})
        for (int x = 0; x <= n + 1; ++x)
          REQUIRE(binomial_upper_tail(n, x, p) ==
                  doctest::Approx(oracle_upper_tail(n, x, p)).epsilon(1e-10));
  }
  SUBCASE("edge values") {
    CHECK(binomial_upper_tail(10, 0, 0.3) == 1.0);
    CHECK(binomial_upper_tail(10, 11, 0.3) == 0.0);
    CHECK(binomial_upper_tail(10, 3, 0.0) == 0.0);
    CHECK(binomial_upper_tail(10, 3, 1.0) == 1.0);
  }
  SUBCASE("all-successes tail is p^n") {
    CHECK(binomial_upper_tail(20, 20, 0.05) ==
          doctest::Approx(std::pow(0.05, 20)).epsilon(1e-9));
  }
  SUBCASE("upper tail decreases in x") {
    for (int x = 0; x < 15; ++x)
      CHECK(binomial_upper_tail(15, x, 0.4) >=
            binomial_upper_tail(15, x + 1, 0.4));
  }
  SUBCASE("lower tail complements the upper tail") {
    for (int x = 0; x <= 12; ++x)
      CHECK(binomial_lower_tail(12, x, 0.35) +
                binomial_upper_tail(12, x + 1, 0.35) ==
            doctest::Approx(1.0));
    CHECK(binomial_lower_tail(30, 0, 0.5) ==
          doctest::Approx(std::pow(0.5, 30)).epsilon(1e-9));
  }
  SUBCASE("poisson-binomial reduces to binomial for equal probabilities") {
    std::vector<double> q(12, 0.3);
    for (int x = 0; x <= 13; ++x)
      CHECK(poisson_binomial_upper_tail(q, x) ==
            doctest::Approx(binomial_upper_tail(12, x, 0.3)).epsilon(1e-10));
  }
  SUBCASE("poisson-binomial matches hand enumeration for three trials") {
    std::vector<double> q = {0.1, 0.5, 0.8};
    // P(X >= 2) = q1q2(1-q3) + q1q3(1-q2) + q2q3(1-q1) + q1q2q3
    double expected = 0.1 * 0.5 * 0.2 + 0.1 * 0.8 * 0.5 + 0.5 * 0.8 * 0.9 +
                      0.1 * 0.5 * 0.8;
    CHECK(poisson_binomial_upper_tail(q, 2) == doctest::Approx(expected));
    CHECK(poisson_binomial_upper_tail(q, 0) == 1.0);
    CHECK(poisson_binomial_upper_tail(q, 4) == 0.0);
  }
}

TEST_CASE("early posters") {
  SUBCASE("cutoff at early_frac of the lifespan, inclusive") {
    auto corpus = std::vector<MemeTrajectory>{traj_of(
        "m", {{0.0, "a"}, {5.0, "b"}, {6.0, "c"}, {100.0, "z"}})};
    auto early = early_posters(corpus, 0.05);  // cutoff = 5.0
    REQUIRE(early.count("m") == 1);
    CHECK(early["m"] == std::set<std::string>{"a", "b"});
  }
  SUBCASE("early_frac of one includes every poster") {
    auto corpus = std::vector<MemeTrajectory>{
        traj_of("m", {{0.0, "a"}, {50.0, "b"}, {100.0, "c"}})};
    auto early = early_posters(corpus, 1.0);
    CHECK(early["m"].size() == 3);
  }
  SUBCASE("single-event memes are skipped") {
    auto corpus = std::vector<MemeTrajectory>{traj_of("solo", {{0.0, "a"}})};
    CHECK(early_posters(corpus, 0.05).empty());
  }
  SUBCASE("bad fraction rejected") {
    CHECK_THROWS_AS(early_posters({}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(early_posters({}, 1.5), std::invalid_argument);
  }
}

TEST_CASE("sensor test") {
  auto corpus = hub_corpus(20, 10);

  SUBCASE("consistent early poster is flagged, late posters are not") {
    auto report = sensor_test(corpus, {0.03, 0.05});
    CHECK(report.n_successful_memes == 20);
    CHECK(!report.degenerate_warning);
    REQUIRE(!report.rows.empty());
    int flagged = 0;
    for (const auto& row : report.rows) {
      if (row.source_id == "hub") {
        CHECK(row.n_memes_posted == 20);
        CHECK(row.n_early == 20);
        // oracle: every meme has 12 distinct posters, 1 early
        double expect = binomial_upper_tail(20, 20, 1.0 / 12.0);
        CHECK(row.p_value == doctest::Approx(expect).epsilon(1e-12));
        CHECK(row.is_sensor);
        ++flagged;
      } else {
        CHECK(row.n_early == 0);
        CHECK(row.p_value == 1.0);
        CHECK(!row.is_sensor);
      }
    }
    CHECK(flagged == 1);
  }
  SUBCASE("report is invariant to corpus ordering") {
    auto shuffled = corpus;
    std::reverse(shuffled.begin(), shuffled.end());
    auto a = sensor_test(corpus);
    auto b = sensor_test(shuffled);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      REQUIRE(a.rows[i].source_id == b.rows[i].source_id);
      REQUIRE(a.rows[i].p_value == b.rows[i].p_value);
      REQUIRE(a.rows[i].is_sensor == b.rows[i].is_sensor);
    }
  }
  SUBCASE("rows sorted by source id") {
    auto report = sensor_test(corpus);
    for (std::size_t i = 1; i < report.rows.size(); ++i)
      CHECK(report.rows[i - 1].source_id < report.rows[i].source_id);
  }
  SUBCASE("exact tail option agrees with the poisson-binomial function") {
    auto report = sensor_test(corpus, {0.03, 0.05, /*exact_below=*/50});
    std::vector<double> q(20, 1.0 / 12.0);
    for (const auto& row : report.rows) {
      if (row.source_id != "hub") continue;
      CHECK(row.p_value ==
            doctest::Approx(poisson_binomial_upper_tail(q, 20)).epsilon(1e-12));
      CHECK(row.is_sensor);
    }
  }
  SUBCASE("bonferroni only removes sensors") {
    auto plain = sensor_test(corpus, {0.03, 0.05});
    auto strict = sensor_test(corpus, {0.03, 0.05, 0, /*bonferroni=*/true});
    REQUIRE(plain.rows.size() == strict.rows.size());
    for (std::size_t i = 0; i < plain.rows.size(); ++i) {
      if (strict.rows[i].is_sensor) CHECK(plain.rows[i].is_sensor);
    }
  }
  SUBCASE("degenerate when everyone is early") {
    std::vector<MemeTrajectory> all_early = {
        traj_of("m1", {{0.0, "a"}, {0.01, "b"}, {100.0, "a"}}),
        traj_of("m2", {{0.0, "a"}, {0.01, "b"}, {100.0, "b"}}),
    };
    CHECK(sensor_test(all_early, {0.03, 0.05}).degenerate_warning);
  }
  SUBCASE("input validation") {
    CHECK_THROWS_AS(sensor_test({corpus[0]}), std::invalid_argument);
    CHECK_THROWS_AS(sensor_test(corpus, {0.03, 0.0}), std::invalid_argument);
  }
  SUBCASE("null corpus flags roughly at the nominal rate") {
    // every blog equally likely to land early: flagged fraction should sit
    // near alpha, definitely not far above it
    std::mt19937_64 rng(6);
    int flagged = 0, total = 0;
    for (int rep = 0; rep < 60; ++rep) {
      std::vector<MemeTrajectory> null_corpus;
      for (int m = 0; m < 60; ++m) {
        std::vector<int> order(40);
        for (int b = 0; b < 40; ++b) order[b] = b;
        std::shuffle(order.begin(), order.end(), rng);
        MemeTrajectory t;
        t.meme_id = "m" + std::to_string(m);
        for (int i = 0; i < 40; ++i)
          t.events.emplace_back(i * (100.0 / 39.0),
                                "blog" + std::to_string(order[i]));
        null_corpus.push_back(std::move(t));
      }
      auto report = sensor_test(null_corpus, {0.3, 0.05});
      for (const auto& row : report.rows) {
        ++total;
        if (row.is_sensor) ++flagged;
      }
    }
    double rate = static_cast<double>(flagged) / total;
    CHECK(rate < 0.10);
  }
}

TEST_CASE("avoidance test") {
  auto successful = hub_corpus(10, 30);  // 32 posts each, above the threshold
  auto report = sensor_test(successful, {0.03, 0.05});

  // corpus with sub-threshold memes the hub never touches
  std::vector<MemeTrajectory> corpus_all = successful;
  for (int m = 0; m < 30; ++m)
    corpus_all.push_back(
        traj_of("tiny" + std::to_string(m), {{0.0, "late0"}, {1.0, "late1"}}));

  SUBCASE("never mentioning sub-threshold memes gives the zero-count tail") {
    avoidance_test(report, corpus_all, 25);
    double p_sub = 30.0 / corpus_all.size();
    for (const auto& row : report.rows) {
      if (row.source_id == "hub") {
        REQUIRE(row.avoidance_p.has_value());
        // 10 mentions, none sub-threshold: P(X <= 0) = (1 - p_sub)^10
        CHECK(*row.avoidance_p ==
              doctest::Approx(std::pow(1.0 - p_sub, 10)).epsilon(1e-9));
      }
      if (row.source_id == "late0") {
        REQUIRE(row.avoidance_p.has_value());
        CHECK(*row.avoidance_p > 0.5);  // mentions tiny memes proportionally
      }
    }
  }
  SUBCASE("blogs absent from the corpus stay unset") {
    report.rows.push_back(SensorRow{.source_id = "ghost"});
    avoidance_test(report, corpus_all, 25);
    CHECK(!report.rows.back().avoidance_p.has_value());
  }
  SUBCASE("threshold validation") {
    CHECK_THROWS_AS(avoidance_test(report, corpus_all, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("sensor characterization") {
  // K5 core (a..e) plus a two-vertex tail: k_max shell is exactly the clique
  Graph g = Graph::from_edges({{"a", "b"}, {"a", "c"}, {"a", "d"}, {"a", "e"},
                               {"b", "c"}, {"b", "d"}, {"b", "e"}, {"c", "d"},
                               {"c", "e"}, {"d", "e"}, {"e", "f"}, {"f", "g"}});
  auto shells = k_shell_decompose(g);
  REQUIRE(shells.k_max == 4);

  SensorReport report;
  report.n_successful_memes = 20;
  auto add = [&](std::string id, bool sensor, int n_early) {
    SensorRow row;
    row.source_id = std::move(id);
    row.is_sensor = sensor;
    row.n_early = n_early;
    report.rows.push_back(row);
  };
  add("a", true, 10);   // strong sensor in the clique
  add("f", true, 2);    // weak sensor outside the top shell
  add("g", false, 10);  // early but never flagged

  // top ceil(0.3 * 7) = 3 vertices by shell, id ties: a, b, c
  auto summary = characterize(report, g, shells, 0.3, 0.25);
  CHECK(summary.n_sensors == 2);
  CHECK(summary.n_strong == 1);
  CHECK(summary.frac_strong_in_kmax == doctest::Approx(1.0));
  CHECK(summary.frac_sensors_in_top_core == doctest::Approx(0.5));
  CHECK(summary.frac_strong_in_top_degree == doctest::Approx(1.0));

  CHECK(report.rows[0].in_core_top_fraction);
  CHECK(report.rows[0].in_kmax_shell);
  CHECK(!report.rows[1].in_core_top_fraction);
  CHECK(!report.rows[1].in_kmax_shell);
  CHECK(!report.rows[2].in_core_top_fraction);  // not a sensor
}
