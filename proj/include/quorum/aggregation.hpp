#pragma once

#include <span>
#include <utility>
#include <vector>

#include "quorum/core.hpp"

namespace quorum {

/// Normalized posterior over the class set; entries sum to 1.
struct LabelPosterior {
    std::vector<double> probabilities;
    double log_normalizer = 0.0; // log of the unnormalized mass, before any prior
};

/// Fuses expert votes under the one-coin model: a voter of trust r puts
/// weight r on their label and spreads 1-r uniformly over the other
/// class_count-1 classes. Products are accumulated in log space and
/// normalized at the end, so long vote lists cannot underflow.
///
/// `log_prior`, when nonempty, adds per-class log prior weights (size
/// class_count); empty means a uniform prior.
LabelPosterior label_posterior(std::span<const ClassLabel> labels,
                               std::span<const double> trusts, int class_count,
                               std::span<const double> log_prior = {});

/// Consensus label and its confidence: the argmax of label_posterior and the
/// probability mass it holds. Exact posterior ties go to the class voted by
/// the highest-trust expert among the tied ones, then to the lowest class id.
std::pair<ClassLabel, double> infer(std::span<const ClassLabel> labels,
                                    std::span<const double> trusts, int class_count,
                                    std::span<const double> log_prior = {});

} // namespace quorum
