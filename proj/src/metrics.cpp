#include "onebit/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace onebit {

double mse(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat) {
  if (std::abs(x.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("mse: ground truth must be unit-norm");
  }
  if (x.size() != x_hat.size()) {
    throw std::invalid_argument("mse: dimension mismatch");
  }
  return (x - x_hat).squaredNorm();
}

double sign_consistency(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& x_hat,
                        const Eigen::VectorXd& signs) {
  if (matrix.cols() != x_hat.size() || matrix.rows() != signs.size()) {
    throw std::invalid_argument("sign_consistency: dimension mismatch");
  }
  if (signs.size() == 0) {
    throw std::invalid_argument("sign_consistency: no measurements");
  }
  const Eigen::VectorXd predicted = binary_signs(matrix * x_hat);
  int matches = 0;
  for (int i = 0; i < signs.size(); ++i) {
    if (predicted[i] == signs[i]) {
      ++matches;
    }
  }
  return static_cast<double>(matches) / static_cast<double>(signs.size());
}

double support_recall(const std::vector<int>& true_support,
                      const Eigen::VectorXd& x_hat) {
  if (true_support.empty()) {
    throw std::invalid_argument("support_recall: empty true support");
  }
  int hits = 0;
  for (int idx : true_support) {
    if (idx >= 0 && idx < x_hat.size() && x_hat[idx] != 0.0) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(true_support.size());
}

TrialMetrics compute_trial_metrics(const SparseSignal& truth,
                                   const Eigen::MatrixXd& matrix,
                                   const Eigen::VectorXd& signs,
                                   const RecoveryResult& result) {
  TrialMetrics metrics;
  metrics.mse = mse(truth.values, result.estimate);
  metrics.consistency = sign_consistency(matrix, result.estimate, signs);
  metrics.support_recall = support_recall(truth.support, result.estimate);
  metrics.iterations = result.iterations;
  metrics.degenerate = result.degenerate();
  return metrics;
}

}  // namespace onebit
