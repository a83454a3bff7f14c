#include <doctest.h>

#include <cmath>

#include "onebit/metrics.hpp"

using namespace onebit;

namespace {

Eigen::VectorXd unit(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<int>(values.size()));
  int i = 0;
  for (double x : values) {
    v[i++] = x;
  }
  return v / v.norm();
}

}  // namespace

TEST_CASE("mse on unit vectors") {
  const Eigen::VectorXd x = unit({1, 2, -1, 0.5});
  CHECK(mse(x, x) == 0.0);
  CHECK(mse(x, -x) == doctest::Approx(4.0));

  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(4), e2 = Eigen::VectorXd::Zero(4);
  e1[0] = 1.0;
  e2[1] = 1.0;
  CHECK(mse(e1, e2) == doctest::Approx(2.0));

  CHECK(mse(x, Eigen::VectorXd::Zero(4)) == doctest::Approx(1.0));

  CHECK_THROWS_AS(mse(2.0 * x, x), std::invalid_argument);
  CHECK_THROWS_AS(mse(x, Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("mse symmetry and range over random unit pairs") {
  RngStream rng(88);
  for (int rep = 0; rep < 300; ++rep) {
    Eigen::VectorXd a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a[i] = rng.gaussian();
      b[i] = rng.gaussian();
    }
    a /= a.norm();
    b /= b.norm();
    const double ab = mse(a, b);
    CHECK(ab == doctest::Approx(mse(b, a)).epsilon(1e-12));
    CHECK(ab >= 0.0);
    CHECK(ab <= 4.0 + 1e-12);
  }
}

TEST_CASE("sign_consistency counts matching measurement signs") {
  RngStream rng(13);
  const SparseSignal x = generate_signal(24, 4, rng);
  const Eigen::MatrixXd matrix = generate_matrix(30, 24, rng);
  const Eigen::VectorXd signs = measure(matrix, x.values);

  CHECK(sign_consistency(matrix, x.values, signs) == 1.0);
  CHECK(sign_consistency(matrix, -x.values, signs) == 0.0);
  CHECK(sign_consistency(matrix, 0.01 * x.values, signs) == 1.0);

  Eigen::VectorXd other(24);
  for (int i = 0; i < 24; ++i) {
    other[i] = rng.gaussian();
  }
  int matches = 0;
  for (int i = 0; i < 30; ++i) {
    const double dot = matrix.row(i).dot(other);
    if ((dot >= 0.0 ? 1.0 : -1.0) == signs[i]) {
      ++matches;
    }
  }
  CHECK(sign_consistency(matrix, other, signs) ==
        doctest::Approx(matches / 30.0));

  CHECK_THROWS_AS(
      sign_consistency(matrix, Eigen::VectorXd::Zero(23), signs),
      std::invalid_argument);
}

TEST_CASE("support_recall ratios") {
  Eigen::VectorXd x_hat = Eigen::VectorXd::Zero(16);
  for (int idx : {1, 3, 5, 7, 9, 11}) {
    x_hat[idx] = 1.0;
  }
  const std::vector<int> truth{1, 3, 5, 7, 9, 11, 13, 15};
  CHECK(support_recall(truth, x_hat) == doctest::Approx(0.75));
  CHECK(support_recall({1, 3}, x_hat) == 1.0);
  CHECK(support_recall({0, 2}, x_hat) == 0.0);
  CHECK_THROWS_AS(support_recall({}, x_hat), std::invalid_argument);
}

TEST_CASE("perfect recovery scores full recall") {
  RngStream rng(14);
  const SparseSignal x = generate_signal(16, 3, rng);
  CHECK(mse(x.values, x.values) == 0.0);
  CHECK(support_recall(x.support, x.values) == 1.0);
}

TEST_CASE("degenerate estimates are scored totally") {
  RngStream rng(16);
  const SparseSignal x = generate_signal(16, 3, rng);
  const Eigen::MatrixXd matrix = generate_matrix(20, 16, rng);
  const Eigen::VectorXd signs = measure(matrix, x.values);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(16);
  CHECK(mse(x.values, zero) == doctest::Approx(1.0));
  // the zero vector measures as all +1
  int positive = 0;
  for (int i = 0; i < signs.size(); ++i) {
    if (signs[i] == 1.0) {
      ++positive;
    }
  }
  CHECK(sign_consistency(matrix, zero, signs) ==
        doctest::Approx(positive / 20.0));
  CHECK(support_recall(x.support, zero) == 0.0);
}

TEST_CASE("compute_trial_metrics bundles the three metrics") {
  RngStream rng(15);
  const SparseSignal x = generate_signal(32, 4, rng);
  const Eigen::MatrixXd matrix = generate_matrix(120, 32, rng);
  const Eigen::VectorXd signs = measure(matrix, x.values);
  RecoveryConfig cfg;
  cfg.k = 4;
  cfg.max_iters = 200;
  const RecoveryResult result = biht(matrix, signs, cfg);
  const TrialMetrics metrics = compute_trial_metrics(x, matrix, signs, result);
  CHECK(metrics.mse == mse(x.values, result.estimate));
  CHECK(metrics.consistency == sign_consistency(matrix, result.estimate, signs));
  CHECK(metrics.support_recall == support_recall(x.support, result.estimate));
  CHECK(metrics.iterations == result.iterations);
  CHECK(metrics.degenerate == result.degenerate());
}
