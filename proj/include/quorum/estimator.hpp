#pragma once

#include <span>
#include <vector>

#include "quorum/core.hpp"

namespace quorum {

struct EmConfig {
    double tolerance = 1e-6;      // stop when max per-expert trust change falls below
    int max_iterations = 100;     // sweep cap for cold starts
    bool warm_start = true;       // reuse the previous item's estimates in streams
    int warm_max_iterations = 10; // sweep cap when warm-started
};

struct EStepResult {
    // posteriors[slot][z], aligned with AnnotationHistory item slots
    std::vector<std::vector<double>> posteriors;
    double log_likelihood = 0.0; // sum over items of the log vote-model normalizer
};

struct EmResult {
    std::vector<ExpertProfile> profiles;
    std::vector<double> trusts;         // trust_of(profiles), for convenience
    int iterations = 0;                 // sweeps actually performed
    std::vector<double> log_likelihoods; // observed-data value entering each sweep
};

/// Posterior over classes for every item in the history, given the current
/// trusts, under the same one-coin vote model used for label fusion.
EStepResult e_step(const AnnotationHistory& history, std::span<const double> trusts,
                   int class_count);

/// Expected-count update: t_k = number of items expert k annotated,
/// s_k = sum over those items of the posterior mass on k's submitted label.
std::vector<ExpertProfile> m_step(const AnnotationHistory& history,
                                  const std::vector<std::vector<double>>& posteriors,
                                  std::size_t coalition_size);

/// Observed-data log-likelihood of the history under the given trusts
/// (class prior constant omitted).
double log_likelihood(const AnnotationHistory& history, std::span<const double> trusts,
                      int class_count);

/// Alternates e_step and m_step, recomputing trusts via trust_of after every
/// sweep, until the largest trust change drops below config.tolerance or
/// config.max_iterations sweeps have run.
///
/// With exactly two classes and all initial trusts at 0.5 the vote model is
/// blind to the data and EM would stay at that fixed point forever; the first
/// sweep is then seeded with smoothed per-item vote shares instead.
EmResult run_em(const AnnotationHistory& history, std::span<const double> initial_trusts,
                const EmConfig& config, int class_count);

} // namespace quorum
