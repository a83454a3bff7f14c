// Acceptance suite: runs every criterion at the protocol scale
// (n = 256, tau = 0.001, 100 trials, m in {50, ..., 500}) and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "onebit/verify.hpp"

int main(int argc, char** argv) {
  onebit::AcceptanceOptions opts;
  opts.trials = 100;
  opts.workers = 0;  // all hardware threads
  opts.progress = &std::cerr;

  for (int i = 1; i + 1 < argc; i += 2) {
    if (std::strcmp(argv[i], "--trials") == 0) {
      opts.trials = std::atoi(argv[i + 1]);
    } else if (std::strcmp(argv[i], "--workers") == 0) {
      opts.workers = std::atoi(argv[i + 1]);
    } else if (std::strcmp(argv[i], "--seed") == 0) {
      opts.master_seed = std::strtoull(argv[i + 1], nullptr, 10);
    } else {
      std::cerr << "usage: onebit_acceptance [--trials N] [--workers N] "
                   "[--seed N]\n";
      return 2;
    }
  }

  const auto results = onebit::run_acceptance(opts);
  onebit::print_acceptance_report(results, std::cout);
  return onebit::all_passed(results) ? 0 : 1;
}
