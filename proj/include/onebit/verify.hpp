#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "onebit/experiments.hpp"

namespace onebit {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceOptions {
  int trials = 100;   // trials per (arm, m) cell in the trend sweeps
  int workers = 1;    // worker threads for the sweeps
  std::uint64_t master_seed = 1729;
  std::ostream* progress = nullptr;  // optional phase log
};

/// Runs the full acceptance battery: trend criteria on the n=256 protocol
/// (oracle dominance, soft/hard agreement, 4-set false-positive behavior,
/// psw never hurting, the wrong-rho penalty, urw behavior for k=8 and k=20)
/// plus the exact suites (reduction identities, prune oracle equivalence,
/// structural invariants, sweep determinism) and the baseline-decay
/// invariant.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// One "[PASS]/[FAIL] <id>. <name> - <detail>" line per criterion.
void print_acceptance_report(const std::vector<CriterionResult>& results,
                             std::ostream& out);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace onebit
