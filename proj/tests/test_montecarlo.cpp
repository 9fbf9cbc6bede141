#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fqm/errors.hpp"
#include "fqm/montecarlo.hpp"
#include "fqm/rng.hpp"
#include "json.hpp"

using namespace fqm;
using namespace fqm::mc;

TEST_CASE("histogram statistics") {
  Histogram h;
  for (long v : {3, 1, 2, 2}) h.add(v);
  h.add(std::nullopt);
  CHECK(h.present() == 4);
  CHECK(h.total() == 5);
  CHECK(h.mean() == doctest::Approx(2.0));
  CHECK(h.variance() == doctest::Approx(2.0 / 3));
  CHECK(h.freq(2) == doctest::Approx(0.4));
  CHECK(h.cdf(2) == doctest::Approx(0.6));
  CHECK(h.cdf(100) == doctest::Approx(0.8));
  CHECK(h.median() == doctest::Approx(2.0));
  Histogram g;
  g.add(std::nullopt);
  g.add(std::nullopt);
  g.add(std::nullopt);
  g.add(5);
  CHECK_FALSE(g.median().has_value());
  h.merge(g);
  CHECK(h.total() == 9);
  CHECK(h.missing == 4);
  const auto pmf = h.pmf();
  CHECK(pmf.at(2) == doctest::Approx(2.0 / 9));
}

TEST_CASE("trial loops agree and report the first budget failure") {
  const TrialFn fn = [](std::uint64_t t) -> TrialOutcome {
    Rng r(4, t);
    return {long(r.below(10)), t % 3 ? std::optional<long>(long(t)) : std::nullopt};
  };
  const auto a = run_trials({"x", "y"}, 500, fn, 2);
  const auto b = run_trials_serial({"x", "y"}, 500, fn);
  CHECK(a.trials == 500);
  CHECK(a.stats.at("x").counts == b.stats.at("x").counts);
  CHECK(a.stats.at("y").counts == b.stats.at("y").counts);
  CHECK(a.stats.at("y").missing == b.stats.at("y").missing);
  const TrialFn failing = [](std::uint64_t t) -> TrialOutcome {
    if (t == 17 || t == 40) throw BudgetExceeded("too big");
    return {0L};
  };
  try {
    run_trials({"x"}, 100, failing, 2);
    FAIL("no exception");
  } catch (const BudgetExceeded& e) {
    CHECK(std::string(e.what()).find("trial 17") != std::string::npos);
  }
}

TEST_CASE("pmf distance and chi-square") {
  const auto v = compare_pmf({{0, 0.5}, {1, 0.5}}, {{0, 0.4}, {1, 0.5}, {2, 0.1}}, 0.05);
  CHECK(v.distance == doctest::Approx(0.1));
  CHECK_FALSE(v.pass);
  CHECK(chi_square_two_sample({10, 20}, {10, 20}) == doctest::Approx(1.0));
  // 2x2 table with expected 15 in every cell: statistic 20/3, one degree of freedom
  CHECK(chi_square_two_sample({10, 20}, {20, 10}) == doctest::Approx(0.0098249).epsilon(1e-4));
  // an empty category carries no degrees of freedom
  CHECK(chi_square_two_sample({10, 20, 0}, {20, 10, 0}) == doctest::Approx(0.0098249).epsilon(1e-4));
}

TEST_CASE("preset resolution") {
  CHECK(preset_list().size() == 11);
  ExperimentConfig c;
  c.preset = "E4";
  const auto r = resolve(c);
  CHECK(r.n == 3);
  CHECK(r.trials == 100000);
  CHECK(r.params.at("m") == 4);
  c.params["nope"] = 1;
  CHECK_THROWS_AS(resolve(c), ConfigError);
  ExperimentConfig d;
  d.preset = "E99";
  CHECK_THROWS_AS(resolve(d), ConfigError);
}

TEST_CASE("experiments are reproducible across worker counts") {
  ExperimentConfig c;
  c.preset = "E1";
  c.n = 6;
  c.trials = 300;
  c.seed = 99;
  c.params["m"] = 6;
  c.workers = 1;
  const auto a = run_experiment(c);
  c.workers = 3;
  const auto b = run_experiment(c);
  c.serial = true;
  const auto s = run_experiment(c);
  CHECK(to_json(a) == to_json(b));
  CHECK(to_json(a) == to_json(s));
  c.seed = 100;
  CHECK(to_json(run_experiment(c)) != to_json(a));
}

TEST_CASE("few trials mark statistical checks as insufficient") {
  ExperimentConfig c;
  c.preset = "E1";
  c.n = 4;
  c.trials = 20;
  const auto r = run_experiment(c);
  CHECK(r.report.insufficient);
  for (const auto& ch : r.report.checks)
    if (ch.kind != "exact") CHECK(ch.verdict == "insufficient");
  CHECK_FALSE(r.report.all_pass());
}

TEST_CASE("report formats") {
  ExperimentConfig c;
  c.preset = "E1";
  c.n = 5;
  c.trials = 200;
  c.seed = 7;
  const auto r = run_experiment(c);
  const auto j = nlohmann::json::parse(to_json(r));
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("seed") == 7);
  CHECK(j.at("config").at("preset") == "E1");
  CHECK(j.at("aggregate").at("trials") == 200);
  CHECK(j.at("comparison").at("checks").is_array());
  CHECK_FALSE(j.contains("runtime"));
  c.timing = true;
  CHECK(nlohmann::json::parse(to_json(run_experiment(c))).contains("runtime"));

  std::istringstream csv(to_csv(r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "record,name,key,value");
  int rows = 0;
  bool seed_row = false;
  while (std::getline(csv, line)) {
    ++rows;
    int commas = 0;
    for (char ch : line) commas += ch == ',';
    CHECK(commas == 3);
    seed_row = seed_row || line == "config,seed,,7";
  }
  CHECK(rows > 5);
  CHECK(seed_row);

  const std::string path = "fqm_test_report.json";
  emit(r, "json", path);
  std::ifstream in(path);
  CHECK(nlohmann::json::parse(in).at("seed") == 7);
  std::remove(path.c_str());
  CHECK_THROWS_AS(emit(r, "json", "/nonexistent/dir/report.json"), IoError);
  CHECK_THROWS_AS(emit(r, "yaml", path), ConfigError);
}
