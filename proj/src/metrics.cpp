#include "quorum/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quorum {

double accuracy(std::span<const Decision> decisions,
                std::span<const std::optional<ClassLabel>> truth) {
    if (decisions.empty()) {
        throw std::invalid_argument("accuracy needs at least one decision");
    }
    long correct = 0;
    for (const Decision& d : decisions) {
        if (d.item < 0 || static_cast<std::size_t>(d.item) >= truth.size() ||
            !truth[static_cast<std::size_t>(d.item)].has_value()) {
            throw std::invalid_argument("no ground truth for item " + std::to_string(d.item));
        }
        if (d.labeled() && *d.label == *truth[static_cast<std::size_t>(d.item)]) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(decisions.size());
}

double mean_cost(std::span<const Decision> decisions) {
    if (decisions.empty()) {
        throw std::invalid_argument("mean_cost needs at least one decision");
    }
    long total = 0;
    for (const Decision& d : decisions) {
        total += d.cost();
    }
    return static_cast<double>(total) / static_cast<double>(decisions.size());
}

std::vector<long> query_counts(std::span<const Decision> decisions, int coalition_size) {
    std::vector<long> counts(static_cast<std::size_t>(coalition_size), 0);
    for (const Decision& d : decisions) {
        for (ExpertIndex k : d.queried) {
            counts.at(static_cast<std::size_t>(k)) += 1;
        }
    }
    return counts;
}

double gini(std::span<const long> counts) {
    long total = 0;
    for (long c : counts) {
        if (c < 0) {
            throw std::invalid_argument("query counts must be non-negative");
        }
        total += c;
    }
    if (total <= 0) {
        throw std::invalid_argument("gini needs a positive total query count");
    }
    // O(K^2) pairwise form; coalitions are small.
    long double diff_sum = 0.0L;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        for (std::size_t j = 0; j < counts.size(); ++j) {
            diff_sum += std::abs(counts[i] - counts[j]);
        }
    }
    return static_cast<double>(
        diff_sum / (2.0L * static_cast<long double>(counts.size()) *
                    static_cast<long double>(total)));
}

namespace {

double percentile(const std::vector<double>& sorted, double pct) {
    const double rank = pct / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = static_cast<std::size_t>(std::ceil(rank));
    const double frac = rank - std::floor(rank);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

std::pair<double, double> ci95(std::span<const double> samples) {
    if (samples.size() < 2) {
        throw std::invalid_argument("ci95 needs at least two samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return {percentile(sorted, 2.5), percentile(sorted, 97.5)};
}

std::vector<double> moving_average(std::span<const double> values, int window) {
    if (window < 1 || static_cast<std::size_t>(window) > values.size()) {
        throw std::invalid_argument("window must lie in [1, length]");
    }
    std::vector<double> out;
    out.reserve(values.size() - static_cast<std::size_t>(window) + 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        sum += values[i];
        if (i + 1 >= static_cast<std::size_t>(window)) {
            out.push_back(sum / static_cast<double>(window));
            sum -= values[i + 1 - static_cast<std::size_t>(window)];
        }
    }
    return out;
}

std::vector<double> queries_over_time(std::span<const Decision> decisions, int window) {
    std::vector<double> costs;
    costs.reserve(decisions.size());
    for (const Decision& d : decisions) {
        costs.push_back(static_cast<double>(d.cost()));
    }
    return moving_average(costs, window);
}

} // namespace quorum
