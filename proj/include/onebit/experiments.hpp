#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "onebit/metrics.hpp"
#include "onebit/recovery.hpp"

namespace onebit {

inline constexpr const char* kVersion = "0.1.0";

enum class Algorithm { Biht, Oracle, FourSet, Psw, Urw };

/// One curve of a sweep: an algorithm plus its parameters.
///
/// `rho` is the accuracy at which the support estimate is generated;
/// `weight_rho` optionally decouples the value used inside the algorithm
/// (the "wrong rho" experiment). Oracle arms always receive the exact true
/// support. `oracle_weights` switches Urw to its benchmark mode where the
/// weight vector is built from the true support.
struct VariantSpec {
  Algorithm algorithm = Algorithm::Biht;
  double c = 0.0;
  double rho = 1.0;
  std::optional<double> weight_rho;
  double lambda = 0.5;
  int reweight_passes = 1;
  bool with_false_positives = false;
  bool oracle_weights = false;

  std::string id() const;          // "biht", "oracle", "fourset", "psw", "urw", "urw-oracle"
  std::string param_name() const;  // "none", "c", "rho", "n_rw"
  double param_value() const;
  std::string label() const;       // legend text
  double effective_rho() const { return weight_rho.value_or(rho); }
  void validate() const;
};

/// Full description of a Monte-Carlo sweep: problem sizes, measurement
/// grid, recovery settings, arms, and the master seed all substreams are
/// derived from.
struct SweepConfig {
  int n = 256;
  int k = 8;
  std::vector<int> m_grid;
  int trials = 100;
  double tau = 1e-3;
  double tol = 1e-10;
  int max_iters = 1000;
  std::uint64_t master_seed = 1729;
  std::vector<VariantSpec> arms;

  void validate() const;
  RecoveryConfig recovery() const;
};

struct SweepRow {
  int m = 0;
  std::string variant;
  std::string param_name;
  double param_value = 0.0;
  double mean_mse = 0.0;
  double sem_mse = 0.0;
  double mean_consistency = 0.0;
  double mean_support_recall = 0.0;
  double mean_iters = 0.0;
  int degenerate_count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (m, param_value, variant)
  std::uint64_t master_seed = 0;
  std::string config_json;  // echo of the configuration that produced it
  std::string version;
};

/// Raw per-trial record, kept for auditing and SEM cross-checks.
struct TrialRecord {
  int m = 0;
  std::string variant;
  double param_value = 0.0;
  int trial = 0;
  TrialMetrics metrics;
};

/// Runs one seeded trial: generates signal, matrix, measurements, and (when
/// the arm needs one) a support estimate from the substream keyed by
/// (master_seed, m, trial_index), then runs the arm's algorithm. Identical
/// inputs give bit-identical metrics. Arms at the same (m, trial) share the
/// generated instance, so parameter comparisons are paired.
TrialMetrics run_trial(const SweepConfig& cfg, const VariantSpec& arm, int m,
                       int trial_index);

/// Runs trials x |m_grid| x |arms| trials, optionally across `workers`
/// threads. Aggregation order is fixed by (arm, m, trial) indices, so the
/// result is identical for any worker count. `raw` (optional) receives one
/// record per trial in that same order.
SweepResult run_sweep(const SweepConfig& cfg, int workers = 1,
                      std::vector<TrialRecord>* raw = nullptr);

/// JSON round-trip of SweepConfig (mirrors the struct field-for-field).
SweepConfig load_sweep_config(const std::string& path);
SweepConfig sweep_config_from_json_text(const std::string& text);
std::string sweep_config_to_json_text(const SweepConfig& cfg);

/// Bundled figure-style configurations: fig1, fig2a, fig2b, fig3a, fig3b,
/// fig4, fig5a, fig5b.
std::vector<std::string> figure_names();
SweepConfig figure_config(const std::string& name, int trials,
                          std::uint64_t seed);

/// Single-instance run, loaded from
/// {"n","k","m","tau","tol","max_iters","seed","variant":{...}}.
/// Stored as a one-point, one-trial sweep.
struct RecoverConfig {
  SweepConfig sweep;
  int m = 0;
};
RecoverConfig load_recover_config(const std::string& path);
RecoverConfig recover_config_from_json_text(const std::string& text);

}  // namespace onebit
