#include "quorum/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace quorum {

const char* strategy_name(Strategy strategy) {
    switch (strategy) {
        case Strategy::Auer: return "auer";
        case Strategy::Greedy: return "greedy";
        case Strategy::Random: return "random";
    }
    return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "auer") return Strategy::Auer;
    if (name == "greedy") return Strategy::Greedy;
    if (name == "random") return Strategy::Random;
    throw std::invalid_argument("unknown strategy '" + name +
                                "' (expected auer, greedy or random)");
}

double auer_index(const ExpertProfile& profile, long step, double exploration) {
    if (step < 1) {
        throw std::invalid_argument("step must be >= 1");
    }
    if (profile.queries <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double width =
        std::sqrt(exploration * std::log(static_cast<double>(std::max(step, 2L))) /
                  profile.queries);
    return trust_of(profile) + width;
}

Ranking rank(const RankingConfig& config, std::span<const ExpertProfile> profiles,
             long step, Rng& rng) {
    const std::size_t coalition = profiles.size();
    if (coalition == 0) {
        throw std::invalid_argument("cannot rank an empty coalition");
    }
    if (step < 1) {
        throw std::invalid_argument("step must be >= 1");
    }

    Ranking ranking;
    ranking.trusts.resize(coalition);
    for (std::size_t k = 0; k < coalition; ++k) {
        ranking.trusts[k] = trust_of(profiles[k]);
    }

    ranking.order.resize(coalition);
    std::iota(ranking.order.begin(), ranking.order.end(), 0);
    // Shuffling before the stable sort makes tie-breaking uniformly random.
    rng.shuffle(ranking.order);
    if (config.kind == Strategy::Random) {
        return ranking;
    }

    std::vector<double> key(coalition);
    for (std::size_t k = 0; k < coalition; ++k) {
        if (config.kind == Strategy::Auer) {
            key[k] = auer_index(profiles[k], step, config.auer_exploration);
        } else {
            // Greedy: unqueried experts outrank everyone, then trust order.
            key[k] = profiles[k].queries <= 0.0
                         ? std::numeric_limits<double>::infinity()
                         : ranking.trusts[k];
        }
    }
    std::stable_sort(ranking.order.begin(), ranking.order.end(),
                     [&](ExpertIndex a, ExpertIndex b) { return key[a] > key[b]; });
    return ranking;
}

} // namespace quorum
