#include "onebit/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "onebit/report.hpp"

namespace onebit {

namespace {

std::string fmt(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4g", v);
  return buffer;
}

std::vector<int> protocol_grid() {
  std::vector<int> grid;
  for (int m = 50; m <= 500; m += 50) {
    grid.push_back(m);
  }
  return grid;
}

SweepConfig protocol_config(int k, const AcceptanceOptions& opts) {
  SweepConfig cfg;
  cfg.n = 256;
  cfg.k = k;
  cfg.m_grid = protocol_grid();
  cfg.trials = opts.trials;
  cfg.tau = 1e-3;
  cfg.tol = 1e-10;
  cfg.max_iters = 1000;
  cfg.master_seed = opts.master_seed;
  return cfg;
}

VariantSpec biht_arm() { return VariantSpec{}; }

VariantSpec oracle_arm(double c) {
  VariantSpec arm;
  arm.algorithm = Algorithm::Oracle;
  arm.c = c;
  return arm;
}

VariantSpec psw_arm(double rho, bool fp = false) {
  VariantSpec arm;
  arm.algorithm = Algorithm::Psw;
  arm.rho = rho;
  arm.with_false_positives = fp;
  return arm;
}

VariantSpec fourset_arm(double rho, bool fp) {
  VariantSpec arm;
  arm.algorithm = Algorithm::FourSet;
  arm.rho = rho;
  arm.with_false_positives = fp;
  return arm;
}

VariantSpec urw_arm(int passes, bool oracle_weights = false) {
  VariantSpec arm;
  arm.algorithm = Algorithm::Urw;
  arm.lambda = 0.5;
  arm.reweight_passes = passes;
  arm.oracle_weights = oracle_weights;
  return arm;
}

double mean_mse_of(const SweepResult& result, const std::string& variant,
                   double param_value, int m) {
  for (const SweepRow& row : result.rows) {
    if (row.m == m && row.variant == variant &&
        row.param_value == param_value) {
      return row.mean_mse;
    }
  }
  throw std::logic_error("acceptance: missing sweep row " + variant);
}

bool bitwise_equal(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.size() == b.size() &&
         (a.size() == 0 ||
          std::memcmp(a.data(), b.data(),
                      sizeof(double) * static_cast<std::size_t>(a.size())) ==
              0);
}

SweepResult timed_sweep(const SweepConfig& cfg, const AcceptanceOptions& opts,
                        const std::string& what) {
  const auto start = std::chrono::steady_clock::now();
  SweepResult result = run_sweep(cfg, opts.workers);
  if (opts.progress) {
    const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    *opts.progress << "[acceptance] " << what << " done in " << seconds
                   << " s\n"
                   << std::flush;
  }
  return result;
}

// Lexicographically-first k-subset of indices maximizing the retained energy
// sum z_i^2, found by full enumeration. Independent check for prune.
std::vector<int> exhaustive_best_subset(const Eigen::VectorXd& z, int k) {
  const int n = static_cast<int>(z.size());
  if (k == 0) {
    return {};
  }
  std::vector<int> subset(k);
  std::iota(subset.begin(), subset.end(), 0);
  std::vector<int> best;
  double best_energy = -1.0;
  while (true) {
    double energy = 0.0;
    for (int idx : subset) {
      energy += z[idx] * z[idx];
    }
    if (energy > best_energy) {
      best_energy = energy;
      best = subset;
    }
    // advance to the next combination in lexicographic order
    int i = k - 1;
    while (i >= 0 && subset[i] == n - k + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++subset[i];
    for (int j = i + 1; j < k; ++j) {
      subset[j] = subset[j - 1] + 1;
    }
  }
  return best;
}

struct RandomInstance {
  SparseSignal truth;
  Eigen::MatrixXd matrix;
  Eigen::VectorXd signs;
  RecoveryConfig cfg;
};

RandomInstance random_instance(RngStream& rng, int n, int max_k,
                               int max_iters) {
  RandomInstance inst;
  const int k = 1 + static_cast<int>(rng.uniform_index(max_k));
  const int m = 16 + static_cast<int>(rng.uniform_index(160));
  inst.truth = generate_signal(n, k, rng);
  inst.matrix = generate_matrix(m, n, rng);
  inst.signs = measure(inst.matrix, inst.truth.values);
  inst.cfg.tau = 1e-3;
  inst.cfg.k = k;
  inst.cfg.tol = 1e-10;
  inst.cfg.max_iters = max_iters;
  return inst;
}

CriterionResult reduction_identities(const AcceptanceOptions& opts) {
  CriterionResult crit{"7", "reduction identities (bitwise)", true, ""};
  RngStream rng = RngStream::derived(opts.master_seed, {7001});
  const int instances = 100;
  int checked = 0;
  for (int i = 0; i < instances && crit.passed; ++i) {
    RandomInstance inst = random_instance(rng, 64, 8, 150);
    const RecoveryResult base = biht(inst.matrix, inst.signs, inst.cfg);

    // psw with rho = 0 ignores the estimate entirely
    SupportEstimate half =
        make_support_estimate(inst.truth.support, 0.5, false, 64, rng);
    const RecoveryResult psw0 =
        biht_psw(inst.matrix, inst.signs, half, 0.0, inst.cfg);
    if (!bitwise_equal(psw0.estimate, base.estimate) ||
        psw0.iterations != base.iterations ||
        psw0.converged != base.converged) {
      crit.passed = false;
      crit.detail = "psw(rho=0) != biht at instance " + std::to_string(i);
    }

    const RecoveryResult urw0 =
        biht_urw(inst.matrix, inst.signs, 0.0, 1 + i % 3, inst.cfg);
    if (!bitwise_equal(urw0.estimate, base.estimate) ||
        urw0.converged != base.converged ||
        urw0.consistent != base.consistent) {
      crit.passed = false;
      crit.detail = "urw(lambda=0) != biht at instance " + std::to_string(i);
    }

    SupportEstimate exact{inst.truth.support, 1.0, false};
    const RecoveryResult psw1 =
        biht_psw(inst.matrix, inst.signs, exact, 1.0, inst.cfg);
    const RecoveryResult hard =
        biht_oracle(inst.matrix, inst.signs, exact, 0.0, inst.cfg);
    if (!bitwise_equal(psw1.estimate, hard.estimate) ||
        psw1.iterations != hard.iterations) {
      crit.passed = false;
      crit.detail =
          "psw(rho=1, exact support) != oracle(c=0) at instance " +
          std::to_string(i);
    }
    ++checked;
  }
  if (crit.passed) {
    crit.detail = std::to_string(checked) + " instances, all three identities";
  }
  return crit;
}

CriterionResult prune_oracle_equivalence(const AcceptanceOptions& opts) {
  CriterionResult crit{"8", "prune matches exhaustive subset oracle", true,
                       ""};
  RngStream rng = RngStream::derived(opts.master_seed, {8001});
  const int instances = 10000;
  for (int i = 0; i < instances && crit.passed; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_index(10));
    const int k = static_cast<int>(rng.uniform_index(n + 1));
    Eigen::VectorXd z(n);
    const bool discrete = (i % 2 == 0);  // discrete values force magnitude ties
    for (int j = 0; j < n; ++j) {
      z[j] = discrete
                 ? static_cast<double>(static_cast<int>(rng.uniform_index(7)) -
                                       3)
                 : rng.gaussian();
    }
    const std::vector<int> expected = exhaustive_best_subset(z, k);
    const std::vector<int> selected = top_k_indices(z, k);
    if (selected != expected) {
      crit.passed = false;
      crit.detail = "selection mismatch at instance " + std::to_string(i);
      break;
    }
    Eigen::VectorXd expected_vector = Eigen::VectorXd::Zero(n);
    for (int idx : expected) {
      expected_vector[idx] = z[idx];
    }
    if (!bitwise_equal(prune(z, k), expected_vector)) {
      crit.passed = false;
      crit.detail = "retained values mismatch at instance " + std::to_string(i);
      break;
    }
  }
  if (crit.passed) {
    crit.detail = std::to_string(instances) + " instances, n <= 10";
  }
  return crit;
}

CriterionResult structural_invariants(const AcceptanceOptions& opts) {
  CriterionResult crit{"9", "structural invariants", true, ""};
  RngStream rng = RngStream::derived(opts.master_seed, {9001});
  const int runs = 500;
  int consistent_seen = 0;

  auto check_common = [&](const RecoveryResult& result,
                          const RandomInstance& inst,
                          const std::string& what) {
    if (!crit.passed) {
      return;
    }
    if (result.degenerate()) {
      if (!result.estimate.isZero(0.0) || result.converged) {
        crit.passed = false;
        crit.detail = what + ": bad degenerate result";
      }
      return;
    }
    if (std::abs(result.estimate.norm() - 1.0) > 1e-12) {
      crit.passed = false;
      crit.detail = what + ": estimate not unit-norm";
      return;
    }
    if (result.consistent) {
      ++consistent_seen;
      const Eigen::VectorXd step =
          biht_step(result.estimate, inst.matrix, inst.signs, inst.cfg.tau);
      if (!bitwise_equal(step, result.estimate)) {
        crit.passed = false;
        crit.detail = what + ": fixed-point property violated";
      }
    }
  };

  for (int i = 0; i < runs && crit.passed; ++i) {
    RandomInstance inst = random_instance(rng, 64, 10, 200);
    const double rho = 0.25 * static_cast<double>(rng.uniform_index(5));
    const bool fp = rng.uniform_index(2) == 1;
    SupportEstimate estimate =
        make_support_estimate(inst.truth.support, rho, fp, 64, rng);

    const RecoveryResult plain = biht(inst.matrix, inst.signs, inst.cfg);
    check_common(plain, inst, "biht");
    if (nonzero_support(plain.estimate).size() >
        static_cast<std::size_t>(inst.cfg.k)) {
      crit.passed = false;
      crit.detail = "biht: estimate not k-sparse";
    }

    SupportEstimate exact{inst.truth.support, 1.0, false};
    const double c = 0.35 * static_cast<double>(rng.uniform_index(3));
    check_common(biht_oracle(inst.matrix, inst.signs, exact, c, inst.cfg),
                 inst, "oracle");

    const RecoveryResult fourset =
        biht_fourset(inst.matrix, inst.signs, estimate, rho, inst.cfg);
    check_common(fourset, inst, "fourset");
    if (nonzero_support(fourset.estimate).size() >
        estimate.indices.size() + static_cast<std::size_t>(inst.cfg.k)) {
      crit.passed = false;
      crit.detail = "fourset: more than |estimate| + k nonzeros";
    }

    const RecoveryResult psw =
        biht_psw(inst.matrix, inst.signs, estimate, rho, inst.cfg);
    check_common(psw, inst, "psw");
    if (nonzero_support(psw.estimate).size() >
        static_cast<std::size_t>(inst.cfg.k)) {
      crit.passed = false;
      crit.detail = "psw: estimate not k-sparse";
    }

    check_common(biht_urw(inst.matrix, inst.signs, 0.5, 1, inst.cfg), inst,
                 "urw");
  }
  if (crit.passed) {
    crit.detail = std::to_string(runs) + " runs per algorithm, " +
                  std::to_string(consistent_seen) +
                  " consistent fixed points checked";
  }
  return crit;
}

CriterionResult sweep_determinism(const AcceptanceOptions& opts) {
  CriterionResult crit{"10", "sweep determinism and parallel invariance",
                       true, ""};
  SweepConfig cfg;
  cfg.n = 64;
  cfg.k = 4;
  cfg.m_grid = {32, 64};
  cfg.trials = 6;
  cfg.tau = 1e-3;
  cfg.tol = 1e-10;
  cfg.max_iters = 120;
  cfg.master_seed = opts.master_seed ^ 0xA5A5;
  cfg.arms = {biht_arm(), psw_arm(0.5), fourset_arm(0.5, true)};

  const std::string serial = csv_string(run_sweep(cfg, 1));
  const std::string serial_again = csv_string(run_sweep(cfg, 1));
  const std::string threaded3 = csv_string(run_sweep(cfg, 3));
  const std::string threaded7 = csv_string(run_sweep(cfg, 7));
  if (serial != serial_again) {
    crit.passed = false;
    crit.detail = "CSV differs between identical serial runs";
  } else if (serial != threaded3 || serial != threaded7) {
    crit.passed = false;
    crit.detail = "CSV differs across worker counts";
  } else {
    crit.detail = "byte-identical CSV for workers in {1,1,3,7}";
  }
  return crit;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> results;
  const std::vector<int> grid = protocol_grid();

  // One sweep covers criteria 1-6 for k=8; arms at the same (m, trial) share
  // instances, so comparisons are paired.
  SweepConfig mega8 = protocol_config(8, opts);
  mega8.arms = {biht_arm(),     oracle_arm(0.0), oracle_arm(0.5),
                psw_arm(0.3),   psw_arm(0.6),    psw_arm(0.9),
                psw_arm(0.9),   urw_arm(1),      urw_arm(2),
                urw_arm(3),     urw_arm(1, true)};
  mega8.arms[6].weight_rho = 0.1;  // the wrong-rho arm
  std::vector<TrialRecord> raw8;
  SweepResult sweep8;
  {
    const auto start = std::chrono::steady_clock::now();
    sweep8 = run_sweep(mega8, opts.workers, &raw8);
    if (opts.progress) {
      const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::steady_clock::now() - start)
                               .count();
      *opts.progress << "[acceptance] k=8 protocol sweep (11 arms x 10 m) "
                        "done in "
                     << seconds << " s\n"
                     << std::flush;
    }
  }

  SweepConfig fourset_cfg = protocol_config(8, opts);
  fourset_cfg.m_grid = {200};
  fourset_cfg.arms = {fourset_arm(0.9, true), fourset_arm(0.1, true)};
  const SweepResult sweep_fourset =
      timed_sweep(fourset_cfg, opts, "4-set sweep at m=200");

  SweepConfig mega20 = protocol_config(20, opts);
  mega20.arms = {biht_arm(), urw_arm(1), urw_arm(2), urw_arm(3),
                 urw_arm(1, true)};
  const SweepResult sweep20 =
      timed_sweep(mega20, opts, "k=20 urw sweep (5 arms x 10 m)");

  auto base8 = [&](int m) { return mean_mse_of(sweep8, "biht", 0.0, m); };

  {
    CriterionResult crit{"1", "oracle dominance (exact support, c=0)", true,
                         ""};
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int m : grid) {
      worst_gap =
          std::max(worst_gap, mean_mse_of(sweep8, "oracle", 0.0, m) - base8(m));
    }
    // paired per-trial comparison at m = 500
    std::vector<double> biht_by_trial(opts.trials, 0.0);
    std::vector<double> oracle_by_trial(opts.trials, 0.0);
    for (const TrialRecord& record : raw8) {
      if (record.m != 500) {
        continue;
      }
      if (record.variant == "biht") {
        biht_by_trial[record.trial] = record.metrics.mse;
      } else if (record.variant == "oracle" && record.param_value == 0.0) {
        oracle_by_trial[record.trial] = record.metrics.mse;
      }
    }
    int paired_wins = 0;
    for (int t = 0; t < opts.trials; ++t) {
      if (oracle_by_trial[t] < biht_by_trial[t]) {
        ++paired_wins;
      }
    }
    crit.passed = worst_gap <= 0.0;
    crit.detail = "max (oracle - biht) mean-MSE gap = " + fmt(worst_gap) +
                  "; paired wins at m=500: " + std::to_string(paired_wins) +
                  "/" + std::to_string(opts.trials);
    results.push_back(crit);
  }

  {
    CriterionResult crit{"2", "soft thresholding equals hard at convergence",
                         true, ""};
    double worst = 0.0;
    for (int m : grid) {
      worst = std::max(worst, std::abs(mean_mse_of(sweep8, "oracle", 0.5, m) -
                                       mean_mse_of(sweep8, "oracle", 0.0, m)));
    }
    crit.passed = worst <= 0.05;
    crit.detail = "max |c=0.5 - c=0| mean-MSE difference = " + fmt(worst) +
                  " (tolerance 0.05)";
    results.push_back(crit);
  }

  {
    CriterionResult crit{"3", "4-set with false positives at m=200", true,
                         ""};
    const double base = base8(200);
    const double good = mean_mse_of(sweep_fourset, "fourset", 0.9, 200);
    const double bad = mean_mse_of(sweep_fourset, "fourset", 0.1, 200);
    crit.passed = good < base && bad > base;
    crit.detail = "mean MSE: rho=0.9 " + fmt(good) + " < biht " + fmt(base) +
                  " < rho=0.1 " + fmt(bad);
    results.push_back(crit);
  }

  {
    CriterionResult crit{"4", "psw never hurts (no false positives)", true,
                         ""};
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (double rho : {0.3, 0.6, 0.9}) {
      for (int m : grid) {
        worst_gap = std::max(
            worst_gap, mean_mse_of(sweep8, "psw", rho, m) - base8(m));
      }
    }
    crit.passed = worst_gap <= 0.05;
    crit.detail = "max (psw - biht) mean-MSE gap = " + fmt(worst_gap) +
                  " (tolerance +0.05)";
    results.push_back(crit);
  }

  {
    CriterionResult crit{"5", "wrong-rho penalty (true rho 0.9, weight 0.1)",
                         true, ""};
    double min_penalty = std::numeric_limits<double>::infinity();
    for (int m : grid) {
      if (m < 150) {
        continue;
      }
      min_penalty =
          std::min(min_penalty, mean_mse_of(sweep8, "psw", 0.1, m) -
                                    mean_mse_of(sweep8, "psw", 0.9, m));
    }
    crit.passed = min_penalty > 0.0;
    crit.detail =
        "min (weight 0.1 - weight 0.9) mean-MSE gap over m >= 150 = " +
        fmt(min_penalty);
    results.push_back(crit);
  }

  {
    CriterionResult crit{"6", "urw tracks biht; oracle weights beat it", true,
                         ""};
    double worst_rel = 0.0;
    double worst_oracle_ratio = 0.0;
    for (const SweepResult* sweep :
         {static_cast<const SweepResult*>(&sweep8), &sweep20}) {
      for (int m : grid) {
        const double base = mean_mse_of(*sweep, "biht", 0.0, m);
        for (int passes : {1, 2, 3}) {
          const double urw_mse = mean_mse_of(
              *sweep, "urw", static_cast<double>(passes), m);
          worst_rel = std::max(worst_rel, std::abs(urw_mse - base) / base);
        }
        if (m >= 300) {
          const double oracle_mse =
              mean_mse_of(*sweep, "urw-oracle", 1.0, m);
          worst_oracle_ratio =
              std::max(worst_oracle_ratio, oracle_mse / base);
        }
      }
    }
    crit.passed = worst_rel <= 0.2 && worst_oracle_ratio < 0.8;
    crit.detail = "max |urw - biht| / biht = " + fmt(worst_rel) +
                  " (<= 0.2); max oracle-weight ratio at m >= 300 = " +
                  fmt(worst_oracle_ratio) + " (< 0.8); k in {8, 20}";
    results.push_back(crit);
  }

  results.push_back(reduction_identities(opts));
  results.push_back(prune_oracle_equivalence(opts));
  results.push_back(structural_invariants(opts));
  results.push_back(sweep_determinism(opts));

  {
    CriterionResult crit{"I1", "baseline MSE decays with m (invariant)", true,
                         ""};
    const double at100 = base8(100);
    const double at500 = base8(500);
    crit.passed = at500 < at100;
    crit.detail =
        "biht mean MSE " + fmt(at500) + " at m=500 vs " + fmt(at100) +
        " at m=100";
    results.push_back(crit);
  }

  return results;
}

void print_acceptance_report(const std::vector<CriterionResult>& results,
                             std::ostream& out) {
  for (const CriterionResult& crit : results) {
    out << (crit.passed ? "[PASS] " : "[FAIL] ") << crit.id << ". "
        << crit.name << " - " << crit.detail << "\n";
  }
  out << (all_passed(results) ? "all criteria passed"
                              : "one or more criteria FAILED")
      << "\n";
}

bool all_passed(const std::vector<CriterionResult>& results) {
  for (const CriterionResult& crit : results) {
    if (!crit.passed) {
      return false;
    }
  }
  return true;
}

}  // namespace onebit
