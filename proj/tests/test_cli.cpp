#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "betax/config.hpp"
#include "betax/runner.hpp"
#include "test_support.hpp"

using namespace betax;
using config::ExperimentConfig;

TEST_CASE("config round-trips through key = value text losslessly") {
  ExperimentConfig cfg;
  cfg.subcommand = "simulate-ppp";
  cfg.regime.regime = scaling::Regime::C;
  cfg.regime.n = 54321;
  cfg.regime.gamma = 0.1 + 0.2;  // not exactly representable in decimal
  cfg.n_ladder = {100, 1000, 54321};
  cfg.replicas = 321;
  cfg.master_seed = 987654321;
  cfg.x_grid = {0.0, 0.25, 1.0 / 3.0};
  cfg.bin_edges = {0.0, 0.7, 1.9};
  cfg.window_min = -1.75;
  cfg.format = "json";
  cfg.samples = 777;

  const std::string text = cfg.to_kv_text();
  const ExperimentConfig back = ExperimentConfig::from_kv_text(text);
  CHECK(back.to_kv_text() == text);
  CHECK(back.regime.gamma == cfg.regime.gamma);
  CHECK(back.x_grid == cfg.x_grid);
  CHECK(back.n_ladder == cfg.n_ladder);
  CHECK(back.master_seed == cfg.master_seed);

  // out and threads parse from a file but stay out of the artifacts
  const auto env = ExperimentConfig::from_kv_text(text + "out = x/y\nthreads = 8\n");
  CHECK(env.out_dir == "x/y");
  CHECK(env.threads == 8);
  CHECK(env.to_kv_text() == text);

  // comments and blank lines are tolerated
  const auto commented =
      ExperimentConfig::from_kv_text("# header\n\n" + text + "\n");
  CHECK(commented.to_kv_text() == text);

  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("nonsense line"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("mystery = 3"),
                  std::invalid_argument);
  CHECK_THROWS_AS(ExperimentConfig::from_kv_text("replicas = many"),
                  std::invalid_argument);
}

TEST_CASE("drift predicate: convergence with and without a limit crossing") {
  // plain monotone approach
  CHECK(run::drift_toward_one({1.014, 1.012, 1.010, 1.007}));
  CHECK(run::drift_toward_one({0.77, 0.84, 0.88, 0.91}));
  // crossing the limit once widens |ratio-1| transiently; still convergent
  CHECK(run::drift_toward_one({0.97932, 0.99227, 0.99874, 1.00190}));
  // divergence on one side of the limit
  CHECK_FALSE(run::drift_toward_one({2.37, 2.74, 3.07, 3.38}));
  // crossing followed by divergence
  CHECK_FALSE(run::drift_toward_one({0.891, 1.026, 1.144, 1.251}));
  // stalling counts as no drift
  CHECK_FALSE(run::drift_toward_one({0.9, 0.95, 0.95, 0.95}));
  // net motion away from 1 after a crossing
  CHECK_FALSE(run::drift_toward_one({0.99, 1.05, 1.03, 1.02}));
}

TEST_CASE("config validation rejects broken setups") {
  ExperimentConfig cfg;
  cfg.validate();  // defaults are valid

  ExperimentConfig bad = cfg;
  bad.subcommand = "do-stuff";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.n_ladder = {1000, 100};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.bin_edges = {-3.0, 1.0};  // below the window
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.format = "xml";
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = cfg;
  bad.regime.gamma = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("verify-sum run is deterministic and gated") {
  ExperimentConfig cfg;
  cfg.subcommand = "verify-sum";
  cfg.regime.regime = scaling::Regime::A;
  cfg.regime.beta_exponent = 1.5;
  cfg.regime.n = 10'000;
  cfg.n_ladder = {10'000, 100'000};
  cfg.x_grid = {0.0, 1.0};

  const auto r1 = run::run_verify_sum(cfg);
  const auto r2 = run::run_verify_sum(cfg);
  CHECK(r1.gates_passed);
  CHECK(r1.files.at("convergence.csv") == r2.files.at("convergence.csv"));
  CHECK(r1.files.at("report.json") == r2.files.at("report.json"));

  cfg.format = "json";
  const auto r3 = run::run_verify_sum(cfg);
  CHECK(r3.files.count("convergence.json") == 1);
}

TEST_CASE("bounds-check run passes and reports the boundary flag") {
  ExperimentConfig cfg;
  cfg.subcommand = "bounds-check";
  cfg.samples = 500;
  const auto r = run::run_bounds_check(cfg);
  CHECK(r.gates_passed);
  CHECK(r.files.at("report.json").find("\"violations\": 0") != std::string::npos);
  CHECK(r.files.at("report.json").find("upper_bound_above_one") !=
        std::string::npos);
}

TEST_CASE("simulate-ppp smoke run emits all artifacts and reruns identically") {
  ExperimentConfig cfg;
  cfg.subcommand = "simulate-ppp";
  cfg.regime.regime = scaling::Regime::C;
  cfg.regime.gamma = 0.5;
  cfg.regime.n = 10'000;
  cfg.n_ladder = {10'000};
  cfg.replicas = 200;
  cfg.bin_edges = {0.0, 1.0, 2.0};

  const auto r1 = run::run_simulate_ppp(cfg);
  CHECK(r1.files.count("counts.csv") == 1);
  CHECK(r1.files.count("maxima.csv") == 1);
  CHECK(r1.files.count("summary.json") == 1);

  const auto r2 = run::run_simulate_ppp(cfg);
  CHECK(r1.files.at("counts.csv") == r2.files.at("counts.csv"));
  CHECK(r1.files.at("maxima.csv") == r2.files.at("maxima.csv"));
  CHECK(r1.files.at("summary.json") == r2.files.at("summary.json"));

  // thread count must not change any byte
  ExperimentConfig threaded = cfg;
  threaded.threads = 4;
  const auto r3 = run::run_simulate_ppp(threaded);
  CHECK(r1.files.at("counts.csv") == r3.files.at("counts.csv"));
  CHECK(r1.files.at("maxima.csv") == r3.files.at("maxima.csv"));
}

TEST_CASE("eigen-scaling smoke run") {
  ExperimentConfig cfg;
  cfg.subcommand = "eigen-scaling";
  cfg.regime.regime = scaling::Regime::C;
  cfg.regime.gamma = 0.5;
  cfg.regime.n = 64;
  cfg.n_ladder = {64, 128};
  cfg.replicas = 60;

  const auto r = run::run_eigen_scaling(cfg);
  CHECK(r.gates_passed);
  CHECK(r.files.count("eigen.csv") == 1);
  const auto r2 = run::run_eigen_scaling(cfg);
  CHECK(r.files.at("eigen.csv") == r2.files.at("eigen.csv"));
  CHECK(r.files.at("summary.json") == r2.files.at("summary.json"));
}
