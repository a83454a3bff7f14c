#pragma once

#include <Eigen/Dense>
#include <vector>

#include "onebit/recovery.hpp"
#include "onebit/signal_model.hpp"

namespace onebit {

/// Quality numbers for a single recovery run.
struct TrialMetrics {
  double mse = 0.0;             // ||x - x_hat||^2, both unit-norm (or x_hat zero)
  double consistency = 0.0;     // fraction of measurements with matching sign
  double support_recall = 0.0;  // |supp(x_hat) ∩ T| / |T|
  int iterations = 0;
  bool degenerate = false;
};

/// Squared Euclidean distance between the unit-norm truth and a unit-norm or
/// zero estimate. Zero estimates score exactly ||x||^2 = 1.
double mse(const Eigen::VectorXd& x, const Eigen::VectorXd& x_hat);

/// Fraction of rows whose measurement sign of x_hat matches `signs`,
/// with sign(0) = +1.
double sign_consistency(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& x_hat,
                        const Eigen::VectorXd& signs);

/// |supp(x_hat) ∩ true_support| / |true_support|.
double support_recall(const std::vector<int>& true_support,
                      const Eigen::VectorXd& x_hat);

/// Bundle of all three metrics for a finished recovery.
TrialMetrics compute_trial_metrics(const SparseSignal& truth,
                                   const Eigen::MatrixXd& matrix,
                                   const Eigen::VectorXd& signs,
                                   const RecoveryResult& result);

}  // namespace onebit
