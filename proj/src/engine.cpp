#include "quorum/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "quorum/aggregation.hpp"

namespace quorum {

const char* mode_name(Mode mode) {
    return mode == Mode::Adaptive ? "adaptive" : "baseline";
}

Mode mode_from_name(const std::string& name) {
    if (name == "adaptive") return Mode::Adaptive;
    if (name == "baseline") return Mode::Baseline;
    throw std::invalid_argument("unknown mode '" + name +
                                "' (expected adaptive or baseline)");
}

const char* prior_mode_name(PriorMode mode) {
    return mode == PriorMode::Uniform ? "uniform" : "empirical";
}

PriorMode prior_mode_from_name(const std::string& name) {
    if (name == "uniform") return PriorMode::Uniform;
    if (name == "empirical") return PriorMode::Empirical;
    throw std::invalid_argument("unknown class prior '" + name +
                                "' (expected uniform or empirical)");
}

Decision annotate_item(std::int64_t item, const Ranking& ranking, const ExpertOracle& oracle,
                       const PolicyConfig& policy, int class_count,
                       std::span<const double> log_prior,
                       std::vector<ClassLabel>* votes_out) {
    if (ranking.order.empty()) {
        throw std::invalid_argument("cannot annotate with an empty ranking");
    }

    Decision decision;
    decision.item = item;

    std::vector<ClassLabel> labels;
    std::vector<double> trusts;
    std::size_t pos = 0;

    // Walks down the frozen ranking until one more label is collected.
    // Abstaining experts cost nothing and are recorded separately.
    auto collect_next = [&]() -> bool {
        while (pos < ranking.order.size()) {
            const ExpertIndex k = ranking.order[pos++];
            if (auto label = oracle.answer(item, k)) {
                labels.push_back(*label);
                trusts.push_back(ranking.trusts[static_cast<std::size_t>(k)]);
                decision.queried.push_back(k);
                return true;
            }
            decision.abstained.push_back(k);
        }
        return false;
    };

    if (policy.mode == Mode::Baseline) {
        if (policy.fixed_queries < 1) {
            throw std::invalid_argument("baseline query count must be >= 1");
        }
        for (int q = 0; q < policy.fixed_queries && collect_next(); ++q) {
        }
        if (labels.empty()) {
            return decision; // every expert abstained
        }
        auto [label, confidence] = infer(labels, trusts, class_count, log_prior);
        decision.label = label;
        decision.confidence = confidence;
        if (votes_out) *votes_out = std::move(labels);
        return decision;
    }

    // Adaptive: two opinions minimum whenever two experts respond.
    collect_next();
    collect_next();
    if (labels.empty()) {
        return decision;
    }
    auto [label, confidence] = infer(labels, trusts, class_count, log_prior);
    while (confidence < policy.tau && collect_next()) {
        std::tie(label, confidence) = infer(labels, trusts, class_count, log_prior);
    }
    decision.label = label;
    decision.confidence = confidence;
    if (votes_out) *votes_out = std::move(labels);
    return decision;
}

StreamResult process_stream(const ExpertOracle& oracle, std::span<const std::int64_t> stream,
                            const PolicyConfig& policy, const EmConfig& em_config,
                            std::uint64_t seed) {
    const int coalition = oracle.coalition_size();
    const int class_count = oracle.class_count();
    if (coalition < 1) {
        throw std::invalid_argument("coalition must contain at least one expert");
    }
    if (stream.empty()) {
        throw std::invalid_argument("stream must contain at least one item");
    }
    for (std::int64_t item : stream) {
        if (item < 0 || item >= oracle.item_count()) {
            throw std::invalid_argument("stream item " + std::to_string(item) +
                                        " is outside the dataset");
        }
    }

    Rng rng(seed);
    std::vector<ExpertProfile> profiles(static_cast<std::size_t>(coalition));
    AnnotationHistory history;
    std::vector<double> label_counts(static_cast<std::size_t>(class_count), 0.0);
    std::vector<double> log_prior;

    StreamResult result;
    result.decisions.reserve(stream.size());
    long total_cost = 0;

    for (std::size_t n = 0; n < stream.size(); ++n) {
        const Ranking ranking =
            rank(policy.ranking, profiles, static_cast<long>(n) + 1, rng);

        if (policy.class_prior == PriorMode::Empirical) {
            log_prior.resize(label_counts.size());
            double decided = 0.0;
            for (double c : label_counts) decided += c;
            for (std::size_t z = 0; z < label_counts.size(); ++z) {
                log_prior[z] = std::log((label_counts[z] + 1.0) /
                                        (decided + static_cast<double>(class_count)));
            }
        }

        std::vector<ClassLabel> votes;
        Decision decision = annotate_item(stream[n], ranking, oracle, policy, class_count,
                                          policy.class_prior == PriorMode::Empirical
                                              ? std::span<const double>(log_prior)
                                              : std::span<const double>(),
                                          &votes);

        for (std::size_t q = 0; q < decision.queried.size(); ++q) {
            history.record({stream[n], decision.queried[q], votes[q]});
        }
        if (decision.labeled()) {
            label_counts[static_cast<std::size_t>(*decision.label)] += 1.0;
        }
        total_cost += decision.cost();
        result.decisions.push_back(std::move(decision));

        if (!history.empty()) {
            EmConfig per_item = em_config;
            std::vector<double> init;
            init.reserve(profiles.size());
            if (em_config.warm_start && n > 0) {
                per_item.max_iterations = em_config.warm_max_iterations;
                for (const auto& p : profiles) init.push_back(trust_of(p));
            } else {
                init.assign(profiles.size(), 0.5);
            }
            EmResult em = run_em(history, init, per_item, class_count);
            profiles = std::move(em.profiles);
        }
    }

    result.final_profiles = std::move(profiles);
    result.mean_cost = static_cast<double>(total_cost) / static_cast<double>(stream.size());
    return result;
}

} // namespace quorum
