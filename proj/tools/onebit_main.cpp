#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "onebit/experiments.hpp"
#include "onebit/report.hpp"
#include "onebit/verify.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 1729;

int do_recover(const std::string& config_path) {
  const onebit::RecoverConfig rc = onebit::load_recover_config(config_path);
  const onebit::VariantSpec& arm = rc.sweep.arms.front();
  const onebit::TrialMetrics metrics =
      onebit::run_trial(rc.sweep, arm, rc.m, 0);
  std::cout << "variant          = " << arm.label() << "\n"
            << "n, k, m          = " << rc.sweep.n << ", " << rc.sweep.k
            << ", " << rc.m << "\n"
            << "seed             = " << rc.sweep.master_seed << "\n"
            << "mse              = " << metrics.mse << "\n"
            << "consistency      = " << metrics.consistency << "\n"
            << "support_recall   = " << metrics.support_recall << "\n"
            << "iterations       = " << metrics.iterations << "\n"
            << "degenerate       = " << (metrics.degenerate ? "yes" : "no")
            << "\n";
  return 0;
}

int do_sweep(onebit::SweepConfig cfg, const std::string& out_path,
             const std::string& plot_path, const std::string& raw_path,
             int workers) {
  std::vector<onebit::TrialRecord> raw;
  const onebit::SweepResult result =
      onebit::run_sweep(cfg, workers, raw_path.empty() ? nullptr : &raw);
  onebit::emit_csv(result, out_path);
  std::cout << "wrote " << result.rows.size() << " rows to " << out_path
            << " (seed " << result.master_seed << ", v" << result.version
            << ")\n";
  if (!plot_path.empty()) {
    onebit::emit_plot(result, plot_path);
    std::cout << "wrote plot to " << plot_path << "\n";
  }
  if (!raw_path.empty()) {
    onebit::emit_raw_csv(raw, raw_path);
    std::cout << "wrote " << raw.size() << " trial records to " << raw_path
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-bit compressive sensing recovery with partial support"};
  app.require_subcommand(1);

  auto* recover = app.add_subcommand(
      "recover", "run a single recovery instance and print its metrics");
  std::string recover_config;
  recover->add_option("--config", recover_config, "JSON instance config")
      ->required();

  auto* sweep = app.add_subcommand(
      "sweep", "run a Monte-Carlo sweep from a JSON config, write CSV");
  std::string sweep_config, sweep_out, sweep_plot, sweep_raw;
  std::uint64_t sweep_seed = 0;
  int sweep_trials = 0;
  int sweep_workers = 0;
  bool sweep_seed_set = false, sweep_trials_set = false;
  sweep->add_option("--config", sweep_config, "JSON sweep config")->required();
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_option("--plot", sweep_plot, "optional SVG plot path");
  sweep->add_option("--raw", sweep_raw, "optional per-trial CSV dump");
  sweep->add_option("--seed", sweep_seed, "override the config master seed")
      ->each([&](const std::string&) { sweep_seed_set = true; });
  sweep->add_option("--trials", sweep_trials, "override the config trials")
      ->each([&](const std::string&) { sweep_trials_set = true; });
  sweep->add_option("--workers", sweep_workers,
                    "worker threads (0 = hardware)");

  auto* figures = app.add_subcommand(
      "figures", "run a bundled figure configuration, write CSV and SVG");
  std::string fig_name, fig_out, fig_plot;
  std::uint64_t fig_seed = kDefaultSeed;
  int fig_trials = 100;
  int fig_workers = 0;
  figures->add_option("--name", fig_name, "one of fig1..fig5b")
      ->required()
      ->check(CLI::IsMember(onebit::figure_names()));
  figures->add_option("--trials", fig_trials, "trials per grid point");
  figures->add_option("--seed", fig_seed, "master seed");
  figures->add_option("--out", fig_out, "CSV path (default <name>.csv)");
  figures->add_option("--plot", fig_plot, "SVG path (default <name>.svg)");
  figures->add_option("--workers", fig_workers,
                      "worker threads (0 = hardware)");

  auto* verify = app.add_subcommand(
      "verify", "run the acceptance criteria and report pass/fail");
  bool verify_quick = false;
  int verify_trials = 0;
  int verify_workers = 1;
  std::uint64_t verify_seed = kDefaultSeed;
  verify->add_flag("--quick", verify_quick,
                   "reduced-trial smoke run (20 trials per cell)");
  verify->add_option("--trials", verify_trials,
                     "trials per cell (default 100, or 20 with --quick)");
  verify->add_option("--workers", verify_workers,
                     "worker threads (0 = hardware)");
  verify->add_option("--seed", verify_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (recover->parsed()) {
      return do_recover(recover_config);
    }
    if (sweep->parsed()) {
      onebit::SweepConfig cfg = onebit::load_sweep_config(sweep_config);
      if (sweep_seed_set) {
        cfg.master_seed = sweep_seed;
      }
      if (sweep_trials_set) {
        cfg.trials = sweep_trials;
      }
      return do_sweep(cfg, sweep_out, sweep_plot, sweep_raw, sweep_workers);
    }
    if (figures->parsed()) {
      const onebit::SweepConfig cfg =
          onebit::figure_config(fig_name, fig_trials, fig_seed);
      const std::string out = fig_out.empty() ? fig_name + ".csv" : fig_out;
      const std::string plot = fig_plot.empty() ? fig_name + ".svg" : fig_plot;
      return do_sweep(cfg, out, plot, "", fig_workers);
    }
    if (verify->parsed()) {
      onebit::AcceptanceOptions opts;
      opts.trials = verify_trials > 0 ? verify_trials
                                      : (verify_quick ? 20 : 100);
      opts.workers = verify_workers;
      opts.master_seed = verify_seed;
      opts.progress = &std::cout;
      const auto results = onebit::run_acceptance(opts);
      onebit::print_acceptance_report(results, std::cout);
      return onebit::all_passed(results) ? 0 : 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
