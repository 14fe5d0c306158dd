// beta-extremes: extreme-value experiments for the off-diagonal chi entries
// of the tridiagonal Gaussian beta-ensemble at high temperature.
//
// Subcommands: verify-sum, simulate-ppp, eigen-scaling, bounds-check.
// Exit codes: 0 success, 2 invalid configuration, 3 acceptance gate failed,
// 4 numerical fault.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <string>

#include "betax/config.hpp"
#include "betax/io.hpp"
#include "betax/runner.hpp"
#include "betax/scaling.hpp"

namespace {

struct CliValues {
  std::string config_file;
  std::string regime;
  double gamma = -1.0;
  double beta_exponent = -1.0;
  double loglog_exponent = -1.0;
  std::vector<std::int64_t> n_values;
  std::int64_t replicas = -1;
  std::int64_t seed = -1;
  std::vector<double> x_grid;
  std::vector<double> bins;
  double window_min = std::numeric_limits<double>::quiet_NaN();
  std::string out_dir;
  std::string format;
  int threads = -1;
  std::int64_t samples = -1;
};

void add_common_options(CLI::App* sub, CliValues* v) {
  sub->add_option("--config", v->config_file,
                  "flat key = value config file; flags override its values");
  sub->add_option("--regime", v->regime, "temperature regime: A, B or C");
  sub->add_option("--gamma", v->gamma, "regime C parameter in (0,1)");
  sub->add_option("--beta-exponent", v->beta_exponent,
                  "regime A exponent p in (1,2), beta = n^-p");
  sub->add_option("--loglog-exponent", v->loglog_exponent,
                  "regime B exponent eta in (0,1), beta = 1/(n (loglog n)^eta)");
  sub->add_option("--n", v->n_values,
                  "sample size; repeat for a ladder (strictly increasing)");
  sub->add_option("--replicas", v->replicas, "Monte Carlo replicas");
  sub->add_option("--seed", v->seed, "master seed");
  sub->add_option("--x-grid", v->x_grid, "evaluation grid for x");
  sub->add_option("--bins", v->bins, "bin edges for interval counts");
  sub->add_option("--window-min", v->window_min, "observation window lower end");
  sub->add_option("--out", v->out_dir, "output directory");
  sub->add_option("--format", v->format, "table format: csv or json");
  sub->add_option("--threads", v->threads,
                  "worker threads (0 = BETA_EXTREMES_THREADS or hardware)")
      ->envname("BETA_EXTREMES_THREADS");
  sub->add_option("--samples", v->samples, "bounds-check sample count");
}

betax::config::ExperimentConfig resolve(const CLI::App& sub, const CliValues& v,
                                        const std::string& name) {
  betax::config::ExperimentConfig cfg;
  if (!v.config_file.empty()) {
    std::ifstream f(v.config_file);
    if (!f) throw std::invalid_argument("cannot read config file " + v.config_file);
    std::string text((std::istreambuf_iterator<char>(f)),
                     std::istreambuf_iterator<char>());
    cfg = betax::config::ExperimentConfig::from_kv_text(text);
  } else if (name == "eigen-scaling") {
    cfg.n_ladder = {100, 1000, 10000};
    cfg.replicas = 1000;
  } else if (name == "simulate-ppp") {
    cfg.x_grid = {0.0, 1.0, 2.0};
  }
  cfg.subcommand = name;

  if (sub.count("--regime")) cfg.regime.regime = betax::scaling::regime_from_name(v.regime);
  if (sub.count("--gamma")) cfg.regime.gamma = v.gamma;
  if (sub.count("--beta-exponent")) cfg.regime.beta_exponent = v.beta_exponent;
  if (sub.count("--loglog-exponent")) cfg.regime.loglog_exponent = v.loglog_exponent;
  if (sub.count("--n")) {
    cfg.n_ladder = v.n_values;
    cfg.regime.n = v.n_values.back();
  }
  if (sub.count("--replicas")) cfg.replicas = v.replicas;
  if (sub.count("--seed")) cfg.master_seed = static_cast<std::uint64_t>(v.seed);
  if (sub.count("--x-grid")) cfg.x_grid = v.x_grid;
  if (sub.count("--bins")) cfg.bin_edges = v.bins;
  if (sub.count("--window-min")) cfg.window_min = v.window_min;
  if (sub.count("--out")) cfg.out_dir = v.out_dir;
  if (sub.count("--format")) cfg.format = v.format;
  if (sub.count("--threads")) cfg.threads = v.threads;
  if (sub.count("--samples")) cfg.samples = v.samples;
  return cfg;
}

int execute(const betax::config::ExperimentConfig& cfg) {
  cfg.validate();
  std::filesystem::create_directories(cfg.out_dir);
  const betax::run::RunResult result = betax::run::dispatch(cfg);
  // resolved config goes next to the artifacts for reproducibility
  betax::io::write_file(cfg.out_dir + "/config.resolved", cfg.to_kv_text());
  for (const auto& [name, contents] : result.files)
    betax::io::write_file(cfg.out_dir + "/" + name, contents);
  for (const auto& msg : result.messages)
    std::fprintf(stderr, "gate: %s\n", msg.c_str());
  if (!result.gates_passed) {
    std::fprintf(stderr, "%s: acceptance gates failed\n", cfg.subcommand.c_str());
    return 3;
  }
  std::fprintf(stderr, "%s: ok, artifacts in %s\n", cfg.subcommand.c_str(),
               cfg.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extreme-value statistics of the tridiagonal beta-ensemble"};
  app.require_subcommand(1);

  CliValues values[4];
  const char* names[4] = {"verify-sum", "simulate-ppp", "eigen-scaling",
                          "bounds-check"};
  const char* descriptions[4] = {
      "deterministic survival-sum convergence tables",
      "Poisson interval counts and the max law, Monte Carlo",
      "largest-eigenvalue growth experiment",
      "incomplete-gamma bracket check against the quadrature oracle"};
  CLI::App* subs[4];
  for (int i = 0; i < 4; ++i) {
    subs[i] = app.add_subcommand(names[i], descriptions[i]);
    add_common_options(subs[i], &values[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    for (int i = 0; i < 4; ++i)
      if (subs[i]->parsed()) return execute(resolve(*subs[i], values[i], names[i]));
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical fault: %s\n", e.what());
    return 4;
  }
}
