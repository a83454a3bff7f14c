#pragma once

#include <string>
#include <vector>

#include "onebit/experiments.hpp"

namespace onebit {

/// CSV with the fixed column set
/// m,variant,param_name,param_value,mean_mse,sem_mse,mean_consistency,
/// mean_support_recall,mean_iters,degenerate_count.
/// Decimal values carry 15 significant digits; rows keep the result's
/// (m, param_value, variant) order, so reruns are byte-identical.
std::string csv_string(const SweepResult& result);
void emit_csv(const SweepResult& result, const std::string& path);

/// Per-trial audit dump (one line per trial).
std::string raw_csv_string(const std::vector<TrialRecord>& records);
void emit_raw_csv(const std::vector<TrialRecord>& records,
                  const std::string& path);

/// Self-contained SVG 1.1 line plot: mean MSE vs m, one polyline and legend
/// entry per (variant, param_value) series, circle markers on data points.
/// Throws std::invalid_argument for an empty result.
std::string svg_string(const SweepResult& result);
void emit_plot(const SweepResult& result, const std::string& path);

}  // namespace onebit
