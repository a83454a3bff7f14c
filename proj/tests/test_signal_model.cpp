#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "onebit/signal_model.hpp"

using namespace onebit;

TEST_CASE("derived streams are reproducible and key-sensitive") {
  RngStream a = RngStream::derived(42, {100, 3});
  RngStream b = RngStream::derived(42, {100, 3});
  RngStream c = RngStream::derived(42, {100, 4});
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 64; ++i) {
    const double va = a.gaussian();
    all_equal = all_equal && (va == b.gaussian());
    any_differs = any_differs || (va != c.gaussian());
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("sample_without_replacement draws sorted distinct subsets") {
  RngStream rng(7);
  const std::vector<int> pool{5, 1, 9, 3, 7, 2};
  for (int rep = 0; rep < 50; ++rep) {
    const std::vector<int> sample = rng.sample_without_replacement(pool, 4);
    REQUIRE(sample.size() == 4);
    CHECK(std::is_sorted(sample.begin(), sample.end()));
    CHECK(std::set<int>(sample.begin(), sample.end()).size() == 4);
    for (int v : sample) {
      CHECK(std::find(pool.begin(), pool.end(), v) != pool.end());
    }
  }
  CHECK_THROWS_AS(rng.sample_without_replacement(pool, 7),
                  std::invalid_argument);
}

TEST_CASE("generate_signal basic shapes") {
  RngStream rng(11);

  SUBCASE("full support") {
    const SparseSignal s = generate_signal(4, 4, rng);
    for (int i = 0; i < 4; ++i) {
      CHECK(s.values[i] != 0.0);
    }
    CHECK(std::abs(s.values.norm() - 1.0) <= 1e-12);
  }

  SUBCASE("paper sizes") {
    const SparseSignal s = generate_signal(256, 8, rng);
    CHECK(s.support.size() == 8);
    int nonzeros = 0;
    for (int i = 0; i < 256; ++i) {
      if (s.values[i] != 0.0) {
        ++nonzeros;
      }
    }
    CHECK(nonzeros == 8);
    CHECK(std::abs(s.values.norm() - 1.0) <= 1e-12);
  }

  SUBCASE("one-sparse normalizes to a unit spike") {
    const SparseSignal s = generate_signal(4, 1, rng);
    CHECK(std::abs(std::abs(s.values[s.support[0]]) - 1.0) <= 1e-12);
  }

  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(generate_signal(4, 0, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_signal(4, 5, rng), std::invalid_argument);
  }
}

TEST_CASE("generate_signal invariants over many random shapes") {
  RngStream shape_rng(12345);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 2 + static_cast<int>(shape_rng.uniform_index(40));
    const int k = 1 + static_cast<int>(shape_rng.uniform_index(n));
    RngStream rng = RngStream::derived(999, {static_cast<std::uint64_t>(rep)});
    const SparseSignal s = generate_signal(n, k, rng);
    REQUIRE(static_cast<int>(s.support.size()) == k);
    CHECK(std::abs(s.values.norm() - 1.0) <= 1e-12);
    for (int i = 0; i < n; ++i) {
      const bool on_support = std::binary_search(s.support.begin(),
                                                 s.support.end(), i);
      CHECK((s.values[i] != 0.0) == on_support);
    }
  }
}

TEST_CASE("generate_matrix determinism and moments") {
  SUBCASE("same seed, same matrix") {
    RngStream a(5), b(5);
    const Eigen::MatrixXd ma = generate_matrix(2, 3, a);
    const Eigen::MatrixXd mb = generate_matrix(2, 3, b);
    CHECK(ma == mb);
  }

  SUBCASE("single entry is finite") {
    RngStream rng(5);
    const Eigen::MatrixXd m = generate_matrix(1, 1, rng);
    CHECK(std::isfinite(m(0, 0)));
  }

  SUBCASE("sample mean stays within four standard errors") {
    RngStream rng(5);
    const Eigen::MatrixXd m = generate_matrix(1000, 256, rng);
    const double mean = m.mean();  // oracle: direct mean over the entries
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(256000.0));
  }

  SUBCASE("bad dimensions") {
    RngStream rng(5);
    CHECK_THROWS_AS(generate_matrix(0, 3, rng), std::invalid_argument);
    CHECK_THROWS_AS(generate_matrix(3, 0, rng), std::invalid_argument);
  }
}

TEST_CASE("measure applies the sign map with sign(0) = +1") {
  Eigen::MatrixXd matrix(2, 3);
  matrix << 2, 0, 0,  //
      0, 5, 0;
  Eigen::VectorXd e1(3);
  e1 << 1, 0, 0;
  const Eigen::VectorXd y = measure(matrix, e1);
  CHECK(y[0] == 1.0);   // positive inner product
  CHECK(y[1] == 1.0);   // zero inner product maps to +1
}

TEST_CASE("measure agrees with a direct per-row loop and is scale invariant") {
  RngStream rng(21);
  const SparseSignal x = generate_signal(32, 5, rng);
  const Eigen::MatrixXd matrix = generate_matrix(40, 32, rng);
  const Eigen::VectorXd y = measure(matrix, x.values);
  REQUIRE(y.size() == 40);
  for (int i = 0; i < 40; ++i) {
    double dot = 0.0;
    for (int j = 0; j < 32; ++j) {
      dot += matrix(i, j) * x.values[j];
    }
    CHECK(y[i] == (dot >= 0.0 ? 1.0 : -1.0));
    CHECK((y[i] == 1.0 || y[i] == -1.0));
  }
  for (double alpha : {0.5, 3.0, 1e-6}) {
    CHECK(measure(matrix, alpha * x.values) == y);
  }
  CHECK_THROWS_AS(measure(matrix, Eigen::VectorXd::Zero(31)),
                  std::invalid_argument);
}

TEST_CASE("make_ensemble pairs the matrix with its measurements") {
  RngStream rng(3);
  const SparseSignal x = generate_signal(16, 3, rng);
  const MeasurementEnsemble ensemble = make_ensemble(10, x, rng);
  CHECK(ensemble.count == 10);
  CHECK(ensemble.signs == measure(ensemble.matrix, x.values));
}

TEST_CASE("make_support_estimate counting rules") {
  RngStream rng(17);
  const std::vector<int> truth{3, 10, 20, 31, 40, 55, 60, 63};  // k = 8

  SUBCASE("exact estimate") {
    const SupportEstimate e = make_support_estimate(truth, 1.0, false, 64, rng);
    CHECK(e.indices == truth);
  }

  SUBCASE("half right with false positives") {
    const SupportEstimate e = make_support_estimate(truth, 0.5, true, 64, rng);
    REQUIRE(e.indices.size() == 8);
    int in_truth = 0;
    for (int idx : e.indices) {
      if (std::binary_search(truth.begin(), truth.end(), idx)) {
        ++in_truth;
      }
    }
    CHECK(in_truth == 4);
  }

  SUBCASE("empty at rho zero") {
    const SupportEstimate e = make_support_estimate(truth, 0.0, false, 64, rng);
    CHECK(e.indices.empty());
  }

  SUBCASE("rho zero with false positives is disjoint from the support") {
    const SupportEstimate e = make_support_estimate(truth, 0.0, true, 64, rng);
    REQUIRE(e.indices.size() == truth.size());
    for (int idx : e.indices) {
      CHECK_FALSE(std::binary_search(truth.begin(), truth.end(), idx));
    }
  }

  SUBCASE("half-away-from-zero rounding on both sides") {
    const std::vector<int> five{1, 2, 3, 4, 5};
    const SupportEstimate e = make_support_estimate(five, 0.5, true, 64, rng);
    // round(2.5) = 3 correct plus round(2.5) = 3 incorrect
    CHECK(e.indices.size() == 6);
  }

  SUBCASE("not enough complement indices") {
    const std::vector<int> wide{0, 1, 2, 3};
    CHECK_THROWS_AS(make_support_estimate(wide, 0.0, true, 5, rng),
                    std::invalid_argument);
  }

  SUBCASE("bad rho") {
    CHECK_THROWS_AS(make_support_estimate(truth, 1.5, false, 64, rng),
                    std::invalid_argument);
  }

  SUBCASE("deterministic under a shared stream") {
    RngStream a = RngStream::derived(5, {1});
    RngStream b = RngStream::derived(5, {1});
    CHECK(make_support_estimate(truth, 0.5, true, 64, a).indices ==
          make_support_estimate(truth, 0.5, true, 64, b).indices);
  }
}
