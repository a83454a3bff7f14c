#pragma once

#include <Eigen/Dense>
#include <vector>

#include "onebit/signal_model.hpp"

namespace onebit {

/// Settings shared by every iterative recovery: gradient step size, sparsity
/// target, and the halting rule (iterate change below `tol`, measured before
/// normalization, or `max_iters` reached).
struct RecoveryConfig {
  double tau = 1e-3;
  int k = 8;
  double tol = 1e-10;
  int max_iters = 1000;

  void validate() const;  // throws std::invalid_argument on bad fields
};

/// Per-index multipliers in [0, 1] used to bias the pruning selection.
struct WeightVector {
  Eigen::VectorXd weights;
};

/// Outcome of a recovery run. The estimate is unit-norm, except for the
/// degenerate all-zero iterate, which is returned as the exact zero vector
/// with converged == false.
struct RecoveryResult {
  Eigen::VectorXd estimate;
  int iterations = 0;
  bool converged = false;   // halted by tolerance, not by the iteration cap
  bool consistent = false;  // binary_signs(matrix * estimate) == signs

  bool degenerate() const {
    return estimate.size() == 0 || estimate.isZero(0.0);
  }
};

/// Indices of the k largest-magnitude entries of z, ties broken by lowest
/// index; returned sorted ascending.
std::vector<int> top_k_indices(const Eigen::VectorXd& z, int k);

/// Hard threshold: z with all but the k largest-magnitude entries set to
/// zero. Retained values are bitwise unmodified.
Eigen::VectorXd prune(const Eigen::VectorXd& z, int k);

/// Gradient step x + (tau/2) * matrix^T (signs - binary_signs(matrix * x)).
Eigen::VectorXd biht_step(const Eigen::VectorXd& x,
                          const Eigen::MatrixXd& matrix,
                          const Eigen::VectorXd& signs, double tau);

/// Oracle thresholding rule: keep entries on the estimate, scale entries off
/// it by c. c == 0 zeroes them exactly (hard rule).
Eigen::VectorXd oracle_threshold(const Eigen::VectorXd& gradient,
                                 const std::vector<int>& estimate_indices,
                                 double c);

/// w_i = 1 on the estimate, (1 - rho) off it.
WeightVector build_weights(const std::vector<int>& estimate_indices,
                           double rho, int n);

/// Nonzero indices of v, ascending.
std::vector<int> nonzero_support(const Eigen::VectorXd& v);

/// Binary iterative hard thresholding: gradient step toward sign
/// consistency, then keep the k largest-magnitude entries.
RecoveryResult biht(const Eigen::MatrixXd& matrix,
                    const Eigen::VectorXd& signs, const RecoveryConfig& cfg);

/// BIHT whose pruning keeps every entry on the support estimate and scales
/// entries off it by c in [0, 1). All of the estimate is retained; the
/// selection is not limited to k entries.
RecoveryResult biht_oracle(const Eigen::MatrixXd& matrix,
                           const Eigen::VectorXd& signs,
                           const SupportEstimate& estimate, double c,
                           const RecoveryConfig& cfg);

/// Four-set soft thresholding: with S the estimate and K the k
/// largest-magnitude entries of the gradient step, weights are 1 on S,
/// (1 - rho) on K \ S, and 0 elsewhere. The result can carry up to
/// |S| + k nonzeros.
RecoveryResult biht_fourset(const Eigen::MatrixXd& matrix,
                            const Eigen::VectorXd& signs,
                            const SupportEstimate& estimate, double rho,
                            const RecoveryConfig& cfg);

/// Supervised weighting: select the k indices maximizing |gradient * w| with
/// w = build_weights(estimate, rho), then keep the unweighted gradient values
/// there. rho = 0 reduces to plain biht.
RecoveryResult biht_psw(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& signs,
                        const SupportEstimate& estimate, double rho,
                        const RecoveryConfig& cfg);

/// Unsupervised re-weighting: bootstrap a support estimate from a plain biht
/// run, then `reweight_passes` times run biht_psw with weighting parameter
/// lambda and refresh the estimate from the result's support.
RecoveryResult biht_urw(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& signs, double lambda,
                        int reweight_passes, const RecoveryConfig& cfg);

/// Benchmark mode of biht_urw: the weight vector is built from the true
/// support for every pass (no bootstrap run, no estimate refresh).
RecoveryResult biht_urw_oracle(const Eigen::MatrixXd& matrix,
                               const Eigen::VectorXd& signs,
                               const std::vector<int>& true_support,
                               double lambda, int reweight_passes,
                               const RecoveryConfig& cfg);

}  // namespace onebit
