#include "quorum/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace quorum {

namespace {

void check_trusts(const AnnotationHistory& history, std::span<const double> trusts) {
    for (std::size_t k = 0; k < trusts.size(); ++k) {
        if (!(trusts[k] > 0.0 && trusts[k] < 1.0)) {
            throw std::invalid_argument("trust for expert " + std::to_string(k) +
                                        " is outside (0, 1)");
        }
    }
    for (const Annotation& a : history.entries()) {
        if (a.expert < 0 || static_cast<std::size_t>(a.expert) >= trusts.size()) {
            throw std::invalid_argument("history references expert " +
                                        std::to_string(a.expert) +
                                        " outside the coalition");
        }
    }
}

// Smoothed per-item vote shares; used only to break the two-class
// uniform-trust degeneracy on the first sweep.
std::vector<std::vector<double>> majority_posteriors(const AnnotationHistory& history,
                                                     int class_count) {
    std::vector<std::vector<double>> posteriors(history.item_count());
    for (std::size_t slot = 0; slot < history.item_count(); ++slot) {
        std::vector<double> counts(static_cast<std::size_t>(class_count), 0.0);
        const auto entries = history.item_annotations(slot);
        for (std::uint32_t idx : entries) {
            counts[static_cast<std::size_t>(history.entry(idx).label)] += 1.0;
        }
        const double denom = static_cast<double>(entries.size() + class_count);
        for (double& c : counts) {
            c = (c + 1.0) / denom;
        }
        posteriors[slot] = std::move(counts);
    }
    return posteriors;
}

} // namespace

EStepResult e_step(const AnnotationHistory& history, std::span<const double> trusts,
                   int class_count) {
    if (class_count < 2) {
        throw std::invalid_argument("class_count must be >= 2");
    }
    check_trusts(history, trusts);

    // One log per expert per sweep instead of one per annotation.
    std::vector<double> log_hit(trusts.size());
    std::vector<double> log_miss(trusts.size());
    for (std::size_t k = 0; k < trusts.size(); ++k) {
        log_hit[k] = std::log(trusts[k]);
        log_miss[k] = std::log((1.0 - trusts[k]) / static_cast<double>(class_count - 1));
    }

    EStepResult result;
    result.posteriors.resize(history.item_count());
    std::vector<double> score(static_cast<std::size_t>(class_count));
    for (std::size_t slot = 0; slot < history.item_count(); ++slot) {
        double base = 0.0;
        const auto entries = history.item_annotations(slot);
        for (std::uint32_t idx : entries) {
            base += log_miss[static_cast<std::size_t>(history.entry(idx).expert)];
        }
        std::fill(score.begin(), score.end(), base);
        for (std::uint32_t idx : entries) {
            const Annotation& a = history.entry(idx);
            const auto k = static_cast<std::size_t>(a.expert);
            score[static_cast<std::size_t>(a.label)] += log_hit[k] - log_miss[k];
        }
        const double peak = *std::max_element(score.begin(), score.end());
        double total = 0.0;
        for (double& s : score) {
            s = std::exp(s - peak);
            total += s;
        }
        auto& posterior = result.posteriors[slot];
        posterior.resize(static_cast<std::size_t>(class_count));
        for (std::size_t z = 0; z < posterior.size(); ++z) {
            posterior[z] = score[z] / total;
        }
        result.log_likelihood += peak + std::log(total);
    }
    return result;
}

std::vector<ExpertProfile> m_step(const AnnotationHistory& history,
                                  const std::vector<std::vector<double>>& posteriors,
                                  std::size_t coalition_size) {
    if (posteriors.size() < history.item_count()) {
        throw std::invalid_argument("posteriors must cover every item in the history");
    }
    std::vector<ExpertProfile> profiles(coalition_size);
    for (std::size_t slot = 0; slot < history.item_count(); ++slot) {
        for (std::uint32_t idx : history.item_annotations(slot)) {
            const Annotation& a = history.entry(idx);
            auto& profile = profiles[static_cast<std::size_t>(a.expert)];
            profile.queries += 1.0;
            profile.successes += posteriors[slot][static_cast<std::size_t>(a.label)];
        }
    }
    for (auto& profile : profiles) {
        // Guard the s <= t invariant against accumulated rounding.
        profile.successes = std::min(profile.successes, profile.queries);
    }
    return profiles;
}

double log_likelihood(const AnnotationHistory& history, std::span<const double> trusts,
                      int class_count) {
    return e_step(history, trusts, class_count).log_likelihood;
}

EmResult run_em(const AnnotationHistory& history, std::span<const double> initial_trusts,
                const EmConfig& config, int class_count) {
    if (history.empty()) {
        throw std::invalid_argument("cannot run EM on an empty history");
    }
    if (config.tolerance <= 0.0) {
        throw std::invalid_argument("EM tolerance must be > 0");
    }
    check_trusts(history, initial_trusts);

    const bool degenerate =
        class_count == 2 &&
        std::all_of(initial_trusts.begin(), initial_trusts.end(),
                    [](double r) { return r == 0.5; });

    EmResult result;
    result.trusts.assign(initial_trusts.begin(), initial_trusts.end());
    for (int iter = 0; iter < config.max_iterations; ++iter) {
        double sweep_ll;
        std::vector<std::vector<double>> posteriors;
        if (iter == 0 && degenerate) {
            posteriors = majority_posteriors(history, class_count);
            sweep_ll = log_likelihood(history, result.trusts, class_count);
        } else {
            EStepResult e = e_step(history, result.trusts, class_count);
            posteriors = std::move(e.posteriors);
            sweep_ll = e.log_likelihood;
        }
        result.log_likelihoods.push_back(sweep_ll);

        result.profiles = m_step(history, posteriors, initial_trusts.size());
        double delta = 0.0;
        for (std::size_t k = 0; k < result.profiles.size(); ++k) {
            const double updated = trust_of(result.profiles[k]);
            delta = std::max(delta, std::abs(updated - result.trusts[k]));
            result.trusts[k] = updated;
        }
        ++result.iterations;
        if (delta < config.tolerance) {
            break;
        }
    }
    return result;
}

} // namespace quorum
