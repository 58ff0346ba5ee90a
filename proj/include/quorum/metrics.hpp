#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "quorum/core.hpp"

namespace quorum {

/// Fraction of decisions whose label matches the ground truth of their item.
/// Unlabeled decisions count as incorrect; a decision whose item has no truth
/// value is an error.
double accuracy(std::span<const Decision> decisions,
                std::span<const std::optional<ClassLabel>> truth);

/// Average number of expert queries per decision.
double mean_cost(std::span<const Decision> decisions);

/// Per-expert query totals across a run, for workload statistics.
std::vector<long> query_counts(std::span<const Decision> decisions, int coalition_size);

/// Gini coefficient of the query-count distribution:
/// sum_ij |q_i - q_j| / (2 K sum q). 0 means a perfectly even workload;
/// the maximum, with all load on one expert, is (K-1)/K.
double gini(std::span<const long> counts);

/// Percentile bootstrap 95% interval: the (2.5th, 97.5th) percentiles with
/// linear interpolation between order statistics.
std::pair<double, double> ci95(std::span<const double> samples);

/// Moving average with the given window; length is input size - window + 1.
std::vector<double> moving_average(std::span<const double> values, int window);

/// Moving average of the per-item query counts, in decision order.
std::vector<double> queries_over_time(std::span<const Decision> decisions, int window);

} // namespace quorum
