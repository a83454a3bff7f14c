#include "onebit/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace onebit {

namespace {

void check_dimensions(const Eigen::MatrixXd& matrix,
                      const Eigen::VectorXd& signs) {
  if (matrix.rows() != signs.size()) {
    throw std::invalid_argument("recovery: matrix/signs dimension mismatch");
  }
}

void check_estimate_indices(const std::vector<int>& indices, int n) {
  for (int idx : indices) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument("recovery: estimate index out of range");
    }
  }
}

std::vector<bool> index_mask(const std::vector<int>& indices, int n) {
  std::vector<bool> mask(n, false);
  for (int idx : indices) {
    mask[idx] = true;
  }
  return mask;
}

// Iterate x <- update(gradient_step(x)) from x = 0 until the iterate change
// drops below cfg.tol (checked before normalization) or cfg.max_iters is
// reached. Normalizes at return; an all-zero final iterate is returned as-is
// with converged = false.
template <typename Update>
RecoveryResult run_iterations(const Eigen::MatrixXd& matrix,
                              const Eigen::VectorXd& signs,
                              const RecoveryConfig& cfg, Update&& update) {
  const int n = static_cast<int>(matrix.cols());
  RecoveryResult result;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);

  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    Eigen::VectorXd next = update(biht_step(x, matrix, signs, cfg.tau));
    const double change = (next - x).norm();
    x = std::move(next);
    result.iterations = iter;
    if (change < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  const double norm = x.norm();
  if (norm == 0.0) {
    result.estimate = Eigen::VectorXd::Zero(n);
    result.converged = false;
  } else {
    result.estimate = x / norm;
  }
  result.consistent =
      (binary_signs(matrix * result.estimate).array() == signs.array()).all();
  return result;
}

}  // namespace

void RecoveryConfig::validate() const {
  if (tau <= 0.0) {
    throw std::invalid_argument("RecoveryConfig: tau must be positive");
  }
  if (k < 1) {
    throw std::invalid_argument("RecoveryConfig: k must be >= 1");
  }
  if (tol < 0.0) {
    throw std::invalid_argument("RecoveryConfig: tol must be >= 0");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("RecoveryConfig: max_iters must be >= 1");
  }
}

std::vector<int> top_k_indices(const Eigen::VectorXd& z, int k) {
  const int n = static_cast<int>(z.size());
  if (k < 0 || k > n) {
    throw std::invalid_argument("top_k_indices: k out of range");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&z](int a, int b) {
                      const double ma = std::abs(z[a]);
                      const double mb = std::abs(z[b]);
                      if (ma != mb) {
                        return ma > mb;
                      }
                      return a < b;
                    });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

Eigen::VectorXd prune(const Eigen::VectorXd& z, int k) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
  for (int idx : top_k_indices(z, k)) {
    out[idx] = z[idx];
  }
  return out;
}

Eigen::VectorXd biht_step(const Eigen::VectorXd& x,
                          const Eigen::MatrixXd& matrix,
                          const Eigen::VectorXd& signs, double tau) {
  check_dimensions(matrix, signs);
  if (matrix.cols() != x.size()) {
    throw std::invalid_argument("biht_step: matrix/iterate dimension mismatch");
  }
  // Residual entries are in {-2, 0, 2}.
  const Eigen::VectorXd residual = signs - binary_signs(matrix * x);
  return x + (tau / 2.0) * (matrix.transpose() * residual);
}

Eigen::VectorXd oracle_threshold(const Eigen::VectorXd& gradient,
                                 const std::vector<int>& estimate_indices,
                                 double c) {
  const int n = static_cast<int>(gradient.size());
  const std::vector<bool> on_estimate = index_mask(estimate_indices, n);
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    if (on_estimate[i]) {
      out[i] = gradient[i];
    } else {
      // c == 0 reproduces the hard rule exactly (no -0.0 from 0 * negative).
      out[i] = (c == 0.0) ? 0.0 : c * gradient[i];
    }
  }
  return out;
}

WeightVector build_weights(const std::vector<int>& estimate_indices,
                           double rho, int n) {
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("build_weights: rho must be in [0,1]");
  }
  check_estimate_indices(estimate_indices, n);
  WeightVector w;
  w.weights = Eigen::VectorXd::Constant(n, 1.0 - rho);
  for (int idx : estimate_indices) {
    w.weights[idx] = 1.0;
  }
  return w;
}

std::vector<int> nonzero_support(const Eigen::VectorXd& v) {
  std::vector<int> support;
  for (int i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      support.push_back(i);
    }
  }
  return support;
}

RecoveryResult biht(const Eigen::MatrixXd& matrix,
                    const Eigen::VectorXd& signs, const RecoveryConfig& cfg) {
  cfg.validate();
  check_dimensions(matrix, signs);
  if (cfg.k > matrix.cols()) {
    throw std::invalid_argument("biht: k exceeds signal dimension");
  }
  return run_iterations(matrix, signs, cfg, [&cfg](const Eigen::VectorXd& g) {
    return prune(g, cfg.k);
  });
}

RecoveryResult biht_oracle(const Eigen::MatrixXd& matrix,
                           const Eigen::VectorXd& signs,
                           const SupportEstimate& estimate, double c,
                           const RecoveryConfig& cfg) {
  cfg.validate();
  check_dimensions(matrix, signs);
  if (estimate.indices.empty()) {
    throw std::invalid_argument("biht_oracle: empty support estimate");
  }
  check_estimate_indices(estimate.indices, static_cast<int>(matrix.cols()));
  if (c < 0.0 || c >= 1.0) {
    throw std::invalid_argument("biht_oracle: c must be in [0,1)");
  }
  return run_iterations(matrix, signs, cfg,
                        [&estimate, c](const Eigen::VectorXd& g) {
                          return oracle_threshold(g, estimate.indices, c);
                        });
}

RecoveryResult biht_fourset(const Eigen::MatrixXd& matrix,
                            const Eigen::VectorXd& signs,
                            const SupportEstimate& estimate, double rho,
                            const RecoveryConfig& cfg) {
  cfg.validate();
  check_dimensions(matrix, signs);
  const int n = static_cast<int>(matrix.cols());
  check_estimate_indices(estimate.indices, n);
  if (rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("biht_fourset: rho must be in [0,1]");
  }
  if (cfg.k > n) {
    throw std::invalid_argument("biht_fourset: k exceeds signal dimension");
  }

  const std::vector<bool> on_estimate = index_mask(estimate.indices, n);
  const double off_weight = 1.0 - rho;
  auto update = [&](const Eigen::VectorXd& g) {
    const std::vector<bool> on_top = index_mask(top_k_indices(g, cfg.k), n);
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
      if (on_estimate[i]) {
        out[i] = g[i];  // weight 1 whether or not i is among the k largest
      } else if (on_top[i]) {
        out[i] = (off_weight == 0.0) ? 0.0 : off_weight * g[i];
      } else {
        out[i] = 0.0;
      }
    }
    return out;
  };
  return run_iterations(matrix, signs, cfg, update);
}

RecoveryResult biht_psw(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& signs,
                        const SupportEstimate& estimate, double rho,
                        const RecoveryConfig& cfg) {
  cfg.validate();
  check_dimensions(matrix, signs);
  const int n = static_cast<int>(matrix.cols());
  if (cfg.k > n) {
    throw std::invalid_argument("biht_psw: k exceeds signal dimension");
  }
  const WeightVector w = build_weights(estimate.indices, rho, n);

  auto update = [&](const Eigen::VectorXd& g) {
    // Rank by |g_i * w_i| but keep the unweighted values of the winners.
    const Eigen::VectorXd weighted = g.cwiseProduct(w.weights);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    for (int idx : top_k_indices(weighted, cfg.k)) {
      out[idx] = g[idx];
    }
    return out;
  };
  return run_iterations(matrix, signs, cfg, update);
}

RecoveryResult biht_urw(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& signs, double lambda,
                        int reweight_passes, const RecoveryConfig& cfg) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("biht_urw: lambda must be in [0,1]");
  }
  if (reweight_passes < 1) {
    throw std::invalid_argument("biht_urw: need at least one re-weighting pass");
  }

  RecoveryResult current = biht(matrix, signs, cfg);
  int total_iterations = current.iterations;
  if (current.degenerate()) {
    current.iterations = total_iterations;
    return current;
  }

  for (int pass = 0; pass < reweight_passes; ++pass) {
    SupportEstimate estimate;
    estimate.indices = nonzero_support(current.estimate);
    estimate.rho = lambda;
    current = biht_psw(matrix, signs, estimate, lambda, cfg);
    total_iterations += current.iterations;
    if (current.degenerate()) {
      break;
    }
  }
  // The last pass already returned a unit-norm estimate; re-normalizing
  // would perturb its bits.
  current.iterations = total_iterations;
  return current;
}

RecoveryResult biht_urw_oracle(const Eigen::MatrixXd& matrix,
                               const Eigen::VectorXd& signs,
                               const std::vector<int>& true_support,
                               double lambda, int reweight_passes,
                               const RecoveryConfig& cfg) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw std::invalid_argument("biht_urw_oracle: lambda must be in [0,1]");
  }
  if (reweight_passes < 1) {
    throw std::invalid_argument(
        "biht_urw_oracle: need at least one re-weighting pass");
  }
  if (true_support.empty()) {
    throw std::invalid_argument("biht_urw_oracle: empty support");
  }

  SupportEstimate estimate;
  estimate.indices = true_support;
  std::sort(estimate.indices.begin(), estimate.indices.end());
  estimate.rho = lambda;

  RecoveryResult current;
  int total_iterations = 0;
  for (int pass = 0; pass < reweight_passes; ++pass) {
    current = biht_psw(matrix, signs, estimate, lambda, cfg);
    total_iterations += current.iterations;
    if (current.degenerate()) {
      break;
    }
  }
  current.iterations = total_iterations;
  return current;
}

}  // namespace onebit
