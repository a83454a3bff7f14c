#include "onebit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

namespace onebit {

namespace {

using nlohmann::json;

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Biht:
      return "biht";
    case Algorithm::Oracle:
      return "oracle";
    case Algorithm::FourSet:
      return "fourset";
    case Algorithm::Psw:
      return "psw";
    case Algorithm::Urw:
      return "urw";
  }
  throw std::logic_error("unknown algorithm");
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "biht") return Algorithm::Biht;
  if (name == "oracle") return Algorithm::Oracle;
  if (name == "fourset") return Algorithm::FourSet;
  if (name == "psw") return Algorithm::Psw;
  if (name == "urw") return Algorithm::Urw;
  throw std::invalid_argument("unknown algorithm name: " + name);
}

void check_known_keys(const json& object,
                      const std::vector<std::string>& known,
                      const std::string& where) {
  for (const auto& item : object.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw std::invalid_argument("unknown key \"" + item.key() + "\" in " +
                                  where);
    }
  }
}

json arm_to_json(const VariantSpec& arm) {
  json j;
  j["algorithm"] = algorithm_name(arm.algorithm);
  switch (arm.algorithm) {
    case Algorithm::Biht:
      break;
    case Algorithm::Oracle:
      j["c"] = arm.c;
      break;
    case Algorithm::FourSet:
    case Algorithm::Psw:
      j["rho"] = arm.rho;
      if (arm.weight_rho) {
        j["weight_rho"] = *arm.weight_rho;
      }
      j["with_false_positives"] = arm.with_false_positives;
      break;
    case Algorithm::Urw:
      j["lambda"] = arm.lambda;
      j["reweight_passes"] = arm.reweight_passes;
      j["oracle_weights"] = arm.oracle_weights;
      break;
  }
  return j;
}

VariantSpec arm_from_json(const json& j) {
  check_known_keys(j,
                   {"algorithm", "c", "rho", "weight_rho", "lambda",
                    "reweight_passes", "with_false_positives",
                    "oracle_weights"},
                   "arm");
  VariantSpec arm;
  arm.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  arm.c = j.value("c", 0.0);
  arm.rho = j.value("rho", 1.0);
  if (j.contains("weight_rho")) {
    arm.weight_rho = j.at("weight_rho").get<double>();
  }
  arm.lambda = j.value("lambda", 0.5);
  arm.reweight_passes = j.value("reweight_passes", 1);
  arm.with_false_positives = j.value("with_false_positives", false);
  arm.oracle_weights = j.value("oracle_weights", false);
  arm.validate();
  return arm;
}

struct ArmMSlot {
  const VariantSpec* arm = nullptr;
  int arm_index = 0;
  int m = 0;
  std::vector<TrialMetrics> trials;
};

double sample_mean(const std::vector<double>& values) {
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  return sum / static_cast<double>(values.size());
}

// Standard error of the mean: sample standard deviation / sqrt(count).
double standard_error(const std::vector<double>& values, double mean) {
  const std::size_t count = values.size();
  if (count < 2) {
    return 0.0;
  }
  double ss = 0.0;
  for (double v : values) {
    ss += (v - mean) * (v - mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(count - 1));
  return sd / std::sqrt(static_cast<double>(count));
}

}  // namespace

std::string VariantSpec::id() const {
  if (algorithm == Algorithm::Urw && oracle_weights) {
    return "urw-oracle";
  }
  return algorithm_name(algorithm);
}

std::string VariantSpec::param_name() const {
  switch (algorithm) {
    case Algorithm::Biht:
      return "none";
    case Algorithm::Oracle:
      return "c";
    case Algorithm::FourSet:
    case Algorithm::Psw:
      return "rho";
    case Algorithm::Urw:
      return "n_rw";
  }
  throw std::logic_error("unknown algorithm");
}

double VariantSpec::param_value() const {
  switch (algorithm) {
    case Algorithm::Biht:
      return 0.0;
    case Algorithm::Oracle:
      return c;
    case Algorithm::FourSet:
    case Algorithm::Psw:
      return effective_rho();
    case Algorithm::Urw:
      return static_cast<double>(reweight_passes);
  }
  throw std::logic_error("unknown algorithm");
}

std::string VariantSpec::label() const {
  if (algorithm == Algorithm::Biht) {
    return "biht";
  }
  std::ostringstream out;
  out << id() << " " << param_name() << "=" << param_value();
  if ((algorithm == Algorithm::Psw || algorithm == Algorithm::FourSet) &&
      weight_rho && *weight_rho != rho) {
    out << " (estimate rho=" << rho << ")";
  }
  return out.str();
}

void VariantSpec::validate() const {
  if (c < 0.0 || c >= 1.0) {
    throw std::invalid_argument("arm: c must be in [0,1)");
  }
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("arm: rho must be in [0,1]");
  }
  if (weight_rho && (*weight_rho < 0.0 || *weight_rho > 1.0)) {
    throw std::invalid_argument("arm: weight_rho must be in [0,1]");
  }
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("arm: lambda must be in [0,1]");
  }
  if (reweight_passes < 1) {
    throw std::invalid_argument("arm: reweight_passes must be >= 1");
  }
}

void SweepConfig::validate() const {
  if (n < 1 || k < 1 || k > n) {
    throw std::invalid_argument("sweep: need 1 <= k <= n");
  }
  if (m_grid.empty()) {
    throw std::invalid_argument("sweep: m_grid must be nonempty");
  }
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] < 1) {
      throw std::invalid_argument("sweep: measurement counts must be >= 1");
    }
    if (i > 0 && m_grid[i] <= m_grid[i - 1]) {
      throw std::invalid_argument("sweep: m_grid must be strictly increasing");
    }
  }
  if (trials < 1) {
    throw std::invalid_argument("sweep: trials must be >= 1");
  }
  if (arms.empty()) {
    throw std::invalid_argument("sweep: at least one arm required");
  }
  recovery().validate();
  for (const VariantSpec& arm : arms) {
    arm.validate();
  }
}

RecoveryConfig SweepConfig::recovery() const {
  RecoveryConfig cfg;
  cfg.tau = tau;
  cfg.k = k;
  cfg.tol = tol;
  cfg.max_iters = max_iters;
  return cfg;
}

TrialMetrics run_trial(const SweepConfig& cfg, const VariantSpec& arm, int m,
                       int trial_index) {
  try {
    // The substream is keyed by (master_seed, m, trial) only, so every arm
    // sees the same instance at a given grid point and trial; parameter
    // comparisons are paired through common random numbers.
    RngStream stream = RngStream::derived(
        cfg.master_seed, {static_cast<std::uint64_t>(m),
                          static_cast<std::uint64_t>(trial_index)});
    const SparseSignal truth = generate_signal(cfg.n, cfg.k, stream);
    const Eigen::MatrixXd matrix = generate_matrix(m, cfg.n, stream);
    const Eigen::VectorXd signs = measure(matrix, truth.values);
    const RecoveryConfig recovery_cfg = cfg.recovery();

    RecoveryResult result;
    switch (arm.algorithm) {
      case Algorithm::Biht:
        result = biht(matrix, signs, recovery_cfg);
        break;
      case Algorithm::Oracle: {
        SupportEstimate exact{truth.support, 1.0, false};
        result = biht_oracle(matrix, signs, exact, arm.c, recovery_cfg);
        break;
      }
      case Algorithm::FourSet: {
        SupportEstimate estimate = make_support_estimate(
            truth.support, arm.rho, arm.with_false_positives, cfg.n, stream);
        result = biht_fourset(matrix, signs, estimate, arm.effective_rho(),
                              recovery_cfg);
        break;
      }
      case Algorithm::Psw: {
        SupportEstimate estimate = make_support_estimate(
            truth.support, arm.rho, arm.with_false_positives, cfg.n, stream);
        result = biht_psw(matrix, signs, estimate, arm.effective_rho(),
                          recovery_cfg);
        break;
      }
      case Algorithm::Urw:
        result = arm.oracle_weights
                     ? biht_urw_oracle(matrix, signs, truth.support,
                                       arm.lambda, arm.reweight_passes,
                                       recovery_cfg)
                     : biht_urw(matrix, signs, arm.lambda,
                                arm.reweight_passes, recovery_cfg);
        break;
    }
    return compute_trial_metrics(truth, matrix, signs, result);
  } catch (const std::exception& e) {
    std::ostringstream msg;
    msg << "trial failed [variant=" << arm.id() << ", m=" << m
        << ", trial=" << trial_index << ", seed=" << cfg.master_seed
        << "]: " << e.what();
    throw std::runtime_error(msg.str());
  }
}

SweepResult run_sweep(const SweepConfig& cfg, int workers,
                      std::vector<TrialRecord>* raw) {
  cfg.validate();

  std::vector<ArmMSlot> slots;
  for (std::size_t a = 0; a < cfg.arms.size(); ++a) {
    for (int m : cfg.m_grid) {
      ArmMSlot slot;
      slot.arm = &cfg.arms[a];
      slot.arm_index = static_cast<int>(a);
      slot.m = m;
      slot.trials.resize(cfg.trials);
      slots.push_back(std::move(slot));
    }
  }

  const std::size_t total_tasks = slots.size() * cfg.trials;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
  }
  workers = std::max(1, std::min<int>(workers, static_cast<int>(total_tasks)));

  std::atomic<std::size_t> next_task{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto work = [&]() {
    while (true) {
      const std::size_t task = next_task.fetch_add(1);
      if (task >= total_tasks) {
        return;
      }
      const std::size_t slot_index = task / cfg.trials;
      const int trial = static_cast<int>(task % cfg.trials);
      ArmMSlot& slot = slots[slot_index];
      try {
        slot.trials[trial] = run_trial(cfg, *slot.arm, slot.m, trial);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        next_task.store(total_tasks);  // stop dispatching further tasks
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
    for (std::thread& t : pool) {
      t.join();
    }
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }

  SweepResult result;
  result.master_seed = cfg.master_seed;
  result.config_json = sweep_config_to_json_text(cfg);
  result.version = kVersion;

  for (const ArmMSlot& slot : slots) {
    std::vector<double> mses, consistencies, recalls, iters;
    int degenerate = 0;
    for (const TrialMetrics& t : slot.trials) {
      mses.push_back(t.mse);
      consistencies.push_back(t.consistency);
      recalls.push_back(t.support_recall);
      iters.push_back(static_cast<double>(t.iterations));
      if (t.degenerate) {
        ++degenerate;
      }
    }
    SweepRow row;
    row.m = slot.m;
    row.variant = slot.arm->id();
    row.param_name = slot.arm->param_name();
    row.param_value = slot.arm->param_value();
    row.mean_mse = sample_mean(mses);
    row.sem_mse = standard_error(mses, row.mean_mse);
    row.mean_consistency = sample_mean(consistencies);
    row.mean_support_recall = sample_mean(recalls);
    row.mean_iters = sample_mean(iters);
    row.degenerate_count = degenerate;
    result.rows.push_back(std::move(row));

    if (raw) {
      for (int trial = 0; trial < cfg.trials; ++trial) {
        TrialRecord record;
        record.m = slot.m;
        record.variant = slot.arm->id();
        record.param_value = slot.arm->param_value();
        record.trial = trial;
        record.metrics = slot.trials[trial];
        raw->push_back(std::move(record));
      }
    }
  }

  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.m != b.m) return a.m < b.m;
                     if (a.param_value != b.param_value) {
                       return a.param_value < b.param_value;
                     }
                     return a.variant < b.variant;
                   });
  return result;
}

std::string sweep_config_to_json_text(const SweepConfig& cfg) {
  json j;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["m_grid"] = cfg.m_grid;
  j["trials"] = cfg.trials;
  j["tau"] = cfg.tau;
  j["tol"] = cfg.tol;
  j["max_iters"] = cfg.max_iters;
  j["master_seed"] = cfg.master_seed;
  j["arms"] = json::array();
  for (const VariantSpec& arm : cfg.arms) {
    j["arms"].push_back(arm_to_json(arm));
  }
  return j.dump(2);
}

SweepConfig sweep_config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  check_known_keys(j,
                   {"n", "k", "m_grid", "trials", "tau", "tol", "max_iters",
                    "master_seed", "arms"},
                   "sweep config");
  SweepConfig cfg;
  cfg.n = j.at("n").get<int>();
  cfg.k = j.at("k").get<int>();
  cfg.m_grid = j.at("m_grid").get<std::vector<int>>();
  cfg.trials = j.value("trials", 100);
  cfg.tau = j.value("tau", 1e-3);
  cfg.tol = j.value("tol", 1e-10);
  cfg.max_iters = j.value("max_iters", 1000);
  cfg.master_seed = j.value("master_seed", std::uint64_t{1729});
  for (const json& arm : j.at("arms")) {
    cfg.arms.push_back(arm_from_json(arm));
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return sweep_config_from_json_text(buffer.str());
  } catch (const std::exception& e) {
    throw std::runtime_error("bad config " + path + ": " + e.what());
  }
}

RecoverConfig recover_config_from_json_text(const std::string& text) {
  json j = json::parse(text);
  check_known_keys(
      j, {"n", "k", "m", "tau", "tol", "max_iters", "seed", "variant"},
      "recover config");
  RecoverConfig rc;
  rc.sweep.n = j.at("n").get<int>();
  rc.sweep.k = j.at("k").get<int>();
  rc.m = j.at("m").get<int>();
  rc.sweep.m_grid = {rc.m};
  rc.sweep.trials = 1;
  rc.sweep.tau = j.value("tau", 1e-3);
  rc.sweep.tol = j.value("tol", 1e-10);
  rc.sweep.max_iters = j.value("max_iters", 1000);
  rc.sweep.master_seed = j.value("seed", std::uint64_t{1729});
  rc.sweep.arms = {arm_from_json(j.at("variant"))};
  rc.sweep.validate();
  return rc;
}

RecoverConfig load_recover_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return recover_config_from_json_text(buffer.str());
  } catch (const std::exception& e) {
    throw std::runtime_error("bad config " + path + ": " + e.what());
  }
}

std::vector<std::string> figure_names() {
  return {"fig1", "fig2a", "fig2b", "fig3a", "fig3b", "fig4", "fig5a", "fig5b"};
}

SweepConfig figure_config(const std::string& name, int trials,
                          std::uint64_t seed) {
  SweepConfig cfg;
  cfg.n = 256;
  cfg.k = 8;
  for (int m = 50; m <= 500; m += 50) {
    cfg.m_grid.push_back(m);
  }
  cfg.trials = trials;
  cfg.tau = 1e-3;
  cfg.tol = 1e-10;
  cfg.max_iters = 1000;
  cfg.master_seed = seed;

  VariantSpec baseline;  // plain biht
  cfg.arms.push_back(baseline);

  auto oracle = [](double c) {
    VariantSpec arm;
    arm.algorithm = Algorithm::Oracle;
    arm.c = c;
    return arm;
  };
  auto fourset = [](double rho, bool fp) {
    VariantSpec arm;
    arm.algorithm = Algorithm::FourSet;
    arm.rho = rho;
    arm.with_false_positives = fp;
    return arm;
  };
  auto psw = [](double rho, bool fp) {
    VariantSpec arm;
    arm.algorithm = Algorithm::Psw;
    arm.rho = rho;
    arm.with_false_positives = fp;
    return arm;
  };
  auto urw = [](double lambda, int passes, bool oracle_weights) {
    VariantSpec arm;
    arm.algorithm = Algorithm::Urw;
    arm.lambda = lambda;
    arm.reweight_passes = passes;
    arm.oracle_weights = oracle_weights;
    return arm;
  };

  if (name == "fig1") {
    cfg.arms.push_back(oracle(0.0));
    cfg.arms.push_back(oracle(0.5));
  } else if (name == "fig2a" || name == "fig2b") {
    const bool fp = (name == "fig2b");
    for (double rho : {0.1, 0.5, 0.9}) {
      cfg.arms.push_back(fourset(rho, fp));
    }
  } else if (name == "fig3a" || name == "fig3b") {
    const bool fp = (name == "fig3b");
    for (double rho : {0.1, 0.5, 0.9}) {
      cfg.arms.push_back(psw(rho, fp));
    }
  } else if (name == "fig4") {
    cfg.arms.push_back(psw(0.9, false));
    VariantSpec wrong = psw(0.9, false);
    wrong.weight_rho = 0.1;
    cfg.arms.push_back(wrong);
  } else if (name == "fig5a" || name == "fig5b") {
    cfg.k = (name == "fig5b") ? 20 : 8;
    for (int passes : {1, 2, 3}) {
      cfg.arms.push_back(urw(0.5, passes, false));
    }
    cfg.arms.push_back(urw(0.5, 1, true));
  } else {
    throw std::invalid_argument("unknown figure name: " + name);
  }
  return cfg;
}

}  // namespace onebit
