#include "quorum/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quorum {

namespace {

void check_inputs(std::span<const ClassLabel> labels, std::span<const double> trusts,
                  int class_count, std::span<const double> log_prior) {
    if (labels.empty()) {
        throw std::invalid_argument("label fusion requires at least one vote");
    }
    if (labels.size() != trusts.size()) {
        throw std::invalid_argument("labels and trusts must have the same length");
    }
    if (class_count < 2) {
        throw std::invalid_argument("class_count must be >= 2");
    }
    if (!log_prior.empty() && log_prior.size() != static_cast<std::size_t>(class_count)) {
        throw std::invalid_argument("log_prior must have class_count entries");
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= class_count) {
            throw std::invalid_argument("vote " + std::to_string(i) +
                                        " has label outside [0, class_count)");
        }
        if (!(trusts[i] > 0.0 && trusts[i] < 1.0)) {
            throw std::invalid_argument("vote " + std::to_string(i) +
                                        " has trust outside (0, 1)");
        }
    }
}

} // namespace

LabelPosterior label_posterior(std::span<const ClassLabel> labels,
                               std::span<const double> trusts, int class_count,
                               std::span<const double> log_prior) {
    check_inputs(labels, trusts, class_count, log_prior);

    LabelPosterior out;
    out.probabilities.resize(static_cast<std::size_t>(class_count));

    // Single vote under a uniform prior reduces to the closed form
    // {r on the voted class, (1-r)/(|Z|-1) elsewhere}; evaluating it directly
    // keeps the confidence equal to the trust to the last bit.
    if (labels.size() == 1 && log_prior.empty()) {
        const double r = trusts[0];
        const double off = (1.0 - r) / static_cast<double>(class_count - 1);
        std::fill(out.probabilities.begin(), out.probabilities.end(), off);
        out.probabilities[static_cast<std::size_t>(labels[0])] = r;
        double total = 0.0;
        for (double p : out.probabilities) total += p;
        out.log_normalizer = std::log(total);
        return out;
    }

    std::vector<double> score(static_cast<std::size_t>(class_count), 0.0);
    if (!log_prior.empty()) {
        std::copy(log_prior.begin(), log_prior.end(), score.begin());
    }
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double log_hit = std::log(trusts[i]);
        const double log_miss =
            std::log((1.0 - trusts[i]) / static_cast<double>(class_count - 1));
        for (int z = 0; z < class_count; ++z) {
            score[static_cast<std::size_t>(z)] += (z == labels[i]) ? log_hit : log_miss;
        }
    }

    const double peak = *std::max_element(score.begin(), score.end());
    double total = 0.0;
    for (int z = 0; z < class_count; ++z) {
        const double p = std::exp(score[static_cast<std::size_t>(z)] - peak);
        out.probabilities[static_cast<std::size_t>(z)] = p;
        total += p;
    }
    for (double& p : out.probabilities) {
        p /= total;
    }
    out.log_normalizer = peak + std::log(total);
    return out;
}

std::pair<ClassLabel, double> infer(std::span<const ClassLabel> labels,
                                    std::span<const double> trusts, int class_count,
                                    std::span<const double> log_prior) {
    const LabelPosterior posterior = label_posterior(labels, trusts, class_count, log_prior);
    const auto& p = posterior.probabilities;
    const double best = *std::max_element(p.begin(), p.end());

    // Exact ties: prefer the tied class voted by the highest-trust expert,
    // then the lowest class id.
    ClassLabel winner = -1;
    double winner_backing = -1.0;
    for (int z = 0; z < class_count; ++z) {
        if (p[static_cast<std::size_t>(z)] != best) {
            continue;
        }
        double backing = 0.0;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == z) {
                backing = std::max(backing, trusts[i]);
            }
        }
        if (winner < 0 || backing > winner_backing) {
            winner = z;
            winner_backing = backing;
        }
    }
    return {winner, best};
}

} // namespace quorum
