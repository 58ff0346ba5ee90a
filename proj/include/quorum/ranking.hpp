#pragma once

#include <span>
#include <string>
#include <vector>

#include "quorum/core.hpp"
#include "quorum/rng.hpp"

namespace quorum {

/// Expert selection strategies, trading off exploration against exploitation.
enum class Strategy {
    Auer,   // upper confidence bound on trust; explores uncertain experts
    Greedy, // pure trust order, unqueried experts first
    Random, // uniform random order; equalizes workload
};

const char* strategy_name(Strategy strategy);
Strategy strategy_from_name(const std::string& name);

struct RankingConfig {
    Strategy kind = Strategy::Auer;
    double auer_exploration = 2.0; // width constant in the confidence bonus
};

/// Full expert ordering for one item, frozen before any query is made.
/// `trusts[k]` is the trust of coalition member k (not of order[k]).
struct Ranking {
    std::vector<ExpertIndex> order; // permutation of [0, K)
    std::vector<double> trusts;     // aligned with coalition index
};

/// Confidence-bound ranking key: trust plus an exploration bonus that widens
/// with the step count and shrinks as the expert accumulates queries.
/// Unqueried experts get +infinity so they are ranked before everyone else.
double auer_index(const ExpertProfile& profile, long step, double exploration = 2.0);

/// Ranks all K experts for the current item. Ties are broken uniformly at
/// random via `rng`; the result is deterministic given identical inputs and
/// rng state.
Ranking rank(const RankingConfig& config, std::span<const ExpertProfile> profiles,
             long step, Rng& rng);

} // namespace quorum
