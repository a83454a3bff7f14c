#include "onebit/signal_model.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace onebit {

namespace {

// round-half-away-from-zero of fraction*k; fraction is in [0, 1] here so
// this is plain std::lround.
int rounded_count(double fraction, int k) {
  return static_cast<int>(std::lround(fraction * k));
}

}  // namespace

Eigen::VectorXd binary_signs(const Eigen::VectorXd& v) {
  return v.unaryExpr([](double t) { return binary_sign(t); });
}

SparseSignal generate_signal(int n, int k, RngStream& rng) {
  if (k <= 0 || k > n) {
    throw std::invalid_argument("generate_signal: need 0 < k <= n");
  }
  std::vector<int> population(n);
  std::iota(population.begin(), population.end(), 0);

  SparseSignal signal;
  signal.sparsity = k;
  signal.support = rng.sample_without_replacement(population, k);
  signal.values = Eigen::VectorXd::Zero(n);
  for (int idx : signal.support) {
    double v = rng.gaussian();
    while (v == 0.0) {
      v = rng.gaussian();
    }
    signal.values[idx] = v;
  }
  signal.values /= signal.values.norm();
  return signal;
}

Eigen::MatrixXd generate_matrix(int m, int n, RngStream& rng) {
  if (m < 1 || n < 1) {
    throw std::invalid_argument("generate_matrix: dimensions must be >= 1");
  }
  Eigen::MatrixXd matrix(m, n);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      matrix(i, j) = rng.gaussian();
    }
  }
  return matrix;
}

Eigen::VectorXd measure(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& x) {
  if (matrix.cols() != x.size()) {
    throw std::invalid_argument("measure: matrix/signal dimension mismatch");
  }
  return binary_signs(matrix * x);
}

MeasurementEnsemble make_ensemble(int m, const SparseSignal& x,
                                  RngStream& rng) {
  MeasurementEnsemble ensemble;
  ensemble.count = m;
  ensemble.matrix = generate_matrix(m, static_cast<int>(x.values.size()), rng);
  ensemble.signs = measure(ensemble.matrix, x.values);
  return ensemble;
}

SupportEstimate make_support_estimate(const std::vector<int>& true_support,
                                      double rho, bool with_false_positives,
                                      int n, RngStream& rng) {
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("make_support_estimate: rho must be in [0,1]");
  }
  const int k = static_cast<int>(true_support.size());
  if (k > n) {
    throw std::invalid_argument("make_support_estimate: |support| > n");
  }
  for (int idx : true_support) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument(
          "make_support_estimate: support index out of range");
    }
  }

  SupportEstimate estimate;
  estimate.rho = rho;
  estimate.has_false_positives = with_false_positives;
  estimate.indices =
      rng.sample_without_replacement(true_support, rounded_count(rho, k));

  if (with_false_positives) {
    const int wanted = rounded_count(1.0 - rho, k);
    std::vector<int> complement;
    complement.reserve(n - k);
    std::vector<bool> in_support(n, false);
    for (int idx : true_support) {
      in_support[idx] = true;
    }
    for (int i = 0; i < n; ++i) {
      if (!in_support[i]) {
        complement.push_back(i);
      }
    }
    if (wanted > static_cast<int>(complement.size())) {
      throw std::invalid_argument(
          "make_support_estimate: not enough complement indices for the "
          "requested false positives");
    }
    std::vector<int> fps = rng.sample_without_replacement(complement, wanted);
    estimate.indices.insert(estimate.indices.end(), fps.begin(), fps.end());
    std::sort(estimate.indices.begin(), estimate.indices.end());
  }
  return estimate;
}

}  // namespace onebit
