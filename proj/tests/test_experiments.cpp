#include <doctest.h>

#include <cmath>
#include <sstream>

#include "onebit/experiments.hpp"
#include "onebit/report.hpp"

using namespace onebit;

namespace {

SweepConfig small_config() {
  SweepConfig cfg;
  cfg.n = 32;
  cfg.k = 3;
  cfg.m_grid = {16, 48};
  cfg.trials = 5;
  cfg.tau = 1e-3;
  cfg.tol = 1e-10;
  cfg.max_iters = 80;
  cfg.master_seed = 4242;
  VariantSpec psw;
  psw.algorithm = Algorithm::Psw;
  psw.rho = 0.5;
  cfg.arms = {VariantSpec{}, psw};
  return cfg;
}

}  // namespace

TEST_CASE("run_trial is deterministic and pairs arms through the substream") {
  const SweepConfig cfg = small_config();

  const TrialMetrics a = run_trial(cfg, cfg.arms[0], 48, 2);
  const TrialMetrics b = run_trial(cfg, cfg.arms[0], 48, 2);
  CHECK(a.mse == b.mse);
  CHECK(a.consistency == b.consistency);
  CHECK(a.support_recall == b.support_recall);
  CHECK(a.iterations == b.iterations);

  // psw with rho = 0 sees the same instance and reduces to biht exactly
  VariantSpec psw0;
  psw0.algorithm = Algorithm::Psw;
  psw0.rho = 0.0;
  const TrialMetrics c = run_trial(cfg, psw0, 48, 2);
  CHECK(c.mse == a.mse);
  CHECK(c.iterations == a.iterations);
}

TEST_CASE("oracle support beats plain biht on most shared instances") {
  SweepConfig cfg = small_config();
  cfg.n = 64;
  cfg.k = 4;
  cfg.max_iters = 300;
  VariantSpec oracle;
  oracle.algorithm = Algorithm::Oracle;
  oracle.c = 0.0;
  int oracle_no_worse = 0;
  const int trials = 25;
  for (int t = 0; t < trials; ++t) {
    const double base = run_trial(cfg, cfg.arms[0], 200, t).mse;
    const double orac = run_trial(cfg, oracle, 200, t).mse;
    if (orac <= base) {
      ++oracle_no_worse;
    }
  }
  CHECK(oracle_no_worse >= 20);
}

TEST_CASE("run_sweep aggregates one row per arm and grid point") {
  SweepConfig cfg = small_config();
  cfg.trials = 1;
  cfg.m_grid = {16};
  cfg.arms = {VariantSpec{}};
  const SweepResult result = run_sweep(cfg);
  REQUIRE(result.rows.size() == 1);
  const SweepRow& row = result.rows[0];
  CHECK(row.m == 16);
  CHECK(row.variant == "biht");
  CHECK(row.param_name == "none");
  CHECK(row.sem_mse == 0.0);
  CHECK(row.mean_mse >= 0.0);
  CHECK(row.mean_mse <= 4.0);
  CHECK(result.master_seed == cfg.master_seed);
  CHECK(result.version == kVersion);
}

TEST_CASE("sweeps are byte-identical across reruns and worker counts") {
  const SweepConfig cfg = small_config();
  const std::string once = csv_string(run_sweep(cfg, 1));
  const std::string again = csv_string(run_sweep(cfg, 1));
  const std::string threaded = csv_string(run_sweep(cfg, 4));
  CHECK(once == again);
  CHECK(once == threaded);
}

TEST_CASE("sem column matches a direct recomputation from the raw records") {
  const SweepConfig cfg = small_config();
  std::vector<TrialRecord> raw;
  const SweepResult result = run_sweep(cfg, 1, &raw);
  REQUIRE(raw.size() == cfg.arms.size() * cfg.m_grid.size() * cfg.trials);
  for (const SweepRow& row : result.rows) {
    std::vector<double> values;
    for (const TrialRecord& record : raw) {
      if (record.m == row.m && record.variant == row.variant &&
          record.param_value == row.param_value) {
        values.push_back(record.metrics.mse);
      }
    }
    REQUIRE(static_cast<int>(values.size()) == cfg.trials);
    double mean = 0.0;
    for (double v : values) {
      mean += v;
    }
    mean /= values.size();
    double ss = 0.0;
    for (double v : values) {
      ss += (v - mean) * (v - mean);
    }
    const double sem =
        std::sqrt(ss / (values.size() - 1)) / std::sqrt(values.size());
    CHECK(row.mean_mse == doctest::Approx(mean).epsilon(1e-14));
    CHECK(row.sem_mse == doctest::Approx(sem).epsilon(1e-12));
  }
}

TEST_CASE("trial failures carry provenance") {
  SweepConfig cfg = small_config();
  cfg.n = 4;
  cfg.k = 4;
  VariantSpec impossible;  // k false positives cannot fit in an empty complement
  impossible.algorithm = Algorithm::Psw;
  impossible.rho = 0.0;
  impossible.with_false_positives = true;
  cfg.arms = {impossible};
  cfg.m_grid = {8};
  try {
    run_sweep(cfg);
    FAIL("expected a trial failure");
  } catch (const std::runtime_error& e) {
    const std::string what = e.what();
    CHECK(what.find("trial failed") != std::string::npos);
    CHECK(what.find("psw") != std::string::npos);
    CHECK(what.find("m=8") != std::string::npos);
  }
}

TEST_CASE("csv output format") {
  SweepResult empty;
  const std::string header =
      "m,variant,param_name,param_value,mean_mse,sem_mse,mean_consistency,"
      "mean_support_recall,mean_iters,degenerate_count\n";
  CHECK(csv_string(empty) == header);

  SweepRow row;
  row.m = 100;
  row.variant = "psw";
  row.param_name = "rho";
  row.param_value = 0.9;
  row.mean_mse = 0.123456789012345;
  SweepResult one;
  one.rows = {row};
  const std::string text = csv_string(one);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("100,psw,rho,0.9,0.123456789012345,0,0,0,0,0\n") !=
        std::string::npos);
}

TEST_CASE("svg output structure") {
  SweepResult empty;
  CHECK_THROWS_AS(svg_string(empty), std::invalid_argument);

  SweepRow row;
  row.m = 100;
  row.variant = "biht";
  row.param_name = "none";
  row.param_value = 0.0;
  row.mean_mse = 0.5;
  SweepResult one;
  one.rows = {row};
  const std::string single = svg_string(one);

  auto count = [](const std::string& text, const std::string& needle) {
    std::size_t hits = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      ++hits;
      pos += needle.size();
    }
    return hits;
  };
  CHECK(count(single, "<circle") == 1);  // exactly one data point marker
  CHECK(single.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") !=
        std::string::npos);
  CHECK(svg_string(one) == single);

  SweepRow other = row;
  other.variant = "psw";
  other.param_name = "rho";
  other.param_value = 0.9;
  other.mean_mse = 0.2;
  SweepResult two;
  two.rows = {row, other};
  const std::string pair = svg_string(two);
  CHECK(count(pair, "<polyline") == 2);
  CHECK(count(pair, "class=\"legend\"") == 2);
  CHECK(pair.find("psw rho=0.9") != std::string::npos);
}

TEST_CASE("sweep config json round trip") {
  const SweepConfig cfg = small_config();
  const std::string text = sweep_config_to_json_text(cfg);
  const SweepConfig back = sweep_config_from_json_text(text);
  CHECK(back.n == cfg.n);
  CHECK(back.k == cfg.k);
  CHECK(back.m_grid == cfg.m_grid);
  CHECK(back.trials == cfg.trials);
  CHECK(back.master_seed == cfg.master_seed);
  REQUIRE(back.arms.size() == 2);
  CHECK(back.arms[1].algorithm == Algorithm::Psw);
  CHECK(back.arms[1].rho == 0.5);

  CHECK_THROWS(sweep_config_from_json_text("{\"n\": 8, \"bogus\": 1}"));
  CHECK_THROWS_AS(load_sweep_config("/nonexistent/path.json"),
                  std::runtime_error);
}

TEST_CASE("config validation rejects malformed sweeps") {
  SweepConfig cfg = small_config();
  cfg.m_grid = {48, 16};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.arms.clear();
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = small_config();
  cfg.arms[1].rho = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("bundled figure configs are valid and distinct") {
  for (const std::string& name : figure_names()) {
    const SweepConfig cfg = figure_config(name, 10, 7);
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.arms.size() >= 2);
    CHECK(cfg.arms[0].id() == "biht");  // every figure carries the baseline
    CHECK(cfg.m_grid.front() == 50);
    CHECK(cfg.m_grid.back() == 500);
  }
  CHECK(figure_config("fig5b", 10, 7).k == 20);
  const SweepConfig fig4 = figure_config("fig4", 10, 7);
  REQUIRE(fig4.arms.size() == 3);
  CHECK(fig4.arms[2].effective_rho() == 0.1);
  CHECK(fig4.arms[2].rho == 0.9);
  CHECK_THROWS_AS(figure_config("fig9", 10, 7), std::invalid_argument);
}

TEST_CASE("recover config loads a one-trial sweep") {
  const std::string text = R"({
    "n": 32, "k": 3, "m": 24, "tau": 0.001, "tol": 1e-10,
    "max_iters": 60, "seed": 5, "variant": {"algorithm": "oracle", "c": 0.25}
  })";
  const RecoverConfig rc = recover_config_from_json_text(text);
  CHECK(rc.m == 24);
  CHECK(rc.sweep.trials == 1);
  REQUIRE(rc.sweep.arms.size() == 1);
  CHECK(rc.sweep.arms[0].algorithm == Algorithm::Oracle);
  const TrialMetrics metrics = run_trial(rc.sweep, rc.sweep.arms[0], rc.m, 0);
  CHECK(metrics.mse >= 0.0);
  CHECK(metrics.mse <= 4.0);
}

TEST_CASE("variant labels and parameters") {
  VariantSpec urw;
  urw.algorithm = Algorithm::Urw;
  urw.reweight_passes = 2;
  CHECK(urw.id() == "urw");
  CHECK(urw.param_name() == "n_rw");
  CHECK(urw.param_value() == 2.0);
  urw.oracle_weights = true;
  CHECK(urw.id() == "urw-oracle");

  VariantSpec wrong;
  wrong.algorithm = Algorithm::Psw;
  wrong.rho = 0.9;
  wrong.weight_rho = 0.1;
  CHECK(wrong.param_value() == 0.1);
  CHECK(wrong.label().find("estimate rho=0.9") != std::string::npos);
}
