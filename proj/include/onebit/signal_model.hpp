#pragma once

#include <Eigen/Dense>
#include <vector>

#include "onebit/rng.hpp"

namespace onebit {

/// Ground-truth k-sparse signal, stored unit-norm.
struct SparseSignal {
  Eigen::VectorXd values;    // length n, Euclidean norm 1
  std::vector<int> support;  // sorted nonzero indices, size k
  int sparsity = 0;          // k
};

/// A-priori guess of a signal's support: contains round(rho*k) correct
/// indices, plus round((1-rho)*k) incorrect ones when false positives
/// are requested.
struct SupportEstimate {
  std::vector<int> indices;  // sorted, all < n, no duplicates
  double rho = 0.0;          // declared accuracy in [0, 1]
  bool has_false_positives = false;
};

/// Gaussian measurement matrix paired with the one-bit measurements of the
/// signal it was generated for.
struct MeasurementEnsemble {
  Eigen::MatrixXd matrix;  // m x n, rows are measurement vectors
  Eigen::VectorXd signs;   // length m, entries in {-1, +1}
  int count = 0;           // m
};

/// Sign map with sign(0) = +1, so measurements are always in {-1, +1}.
inline double binary_sign(double v) { return v >= 0.0 ? 1.0 : -1.0; }

/// Elementwise binary_sign.
Eigen::VectorXd binary_signs(const Eigen::VectorXd& v);

/// Uniform random k-subset support, standard normal magnitudes (zero draws
/// redrawn), normalized to unit Euclidean norm.
SparseSignal generate_signal(int n, int k, RngStream& rng);

/// m x n matrix of i.i.d. standard normal entries, filled row by row.
Eigen::MatrixXd generate_matrix(int m, int n, RngStream& rng);

/// One-bit measurements y_i = binary_sign(<x, row_i>).
Eigen::VectorXd measure(const Eigen::MatrixXd& matrix,
                        const Eigen::VectorXd& x);

/// Fresh matrix plus its one-bit measurements of `x`.
MeasurementEnsemble make_ensemble(int m, const SparseSignal& x, RngStream& rng);

/// Support estimate with round(rho*k) indices drawn from the true support
/// and, when requested, round((1-rho)*k) false positives drawn from its
/// complement in {0..n-1}.
SupportEstimate make_support_estimate(const std::vector<int>& true_support,
                                      double rho, bool with_false_positives,
                                      int n, RngStream& rng);

}  // namespace onebit
