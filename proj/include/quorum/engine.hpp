#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "quorum/core.hpp"
#include "quorum/estimator.hpp"
#include "quorum/ranking.hpp"

namespace quorum {

enum class Mode {
    Adaptive, // query until confidence reaches tau or experts run out
    Baseline, // query a fixed number of experts per item
};

const char* mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

enum class PriorMode {
    Uniform,
    Empirical, // smoothed frequencies of the consensus labels decided so far
};

const char* prior_mode_name(PriorMode mode);
PriorMode prior_mode_from_name(const std::string& name);

struct PolicyConfig {
    Mode mode = Mode::Adaptive;
    double tau = 0.9;     // adaptive confidence threshold; may exceed 1
    int fixed_queries = 1; // baseline Q, 1 <= Q <= K
    RankingConfig ranking;
    PriorMode class_prior = PriorMode::Uniform;
};

/// Source of expert answers for (item, expert) pairs. Returning nullopt
/// means the expert abstains; the engine reroutes to the next ranked expert
/// at no cost.
class ExpertOracle {
public:
    virtual ~ExpertOracle() = default;
    virtual std::optional<ClassLabel> answer(std::int64_t item, ExpertIndex expert) const = 0;
    virtual int coalition_size() const = 0;
    virtual int class_count() const = 0;
    virtual std::int64_t item_count() const = 0;
};

/// Labels one item by walking a frozen ranking. Adaptive mode collects two
/// labels up front (one if only one expert responds), then keeps querying
/// while the fused confidence stays below tau; baseline mode takes the first
/// fixed_queries responders. Abstaining experts are skipped at zero cost. If
/// every expert abstains the decision comes back unlabeled.
///
/// When `votes_out` is given it receives the collected labels, aligned with
/// Decision::queried.
Decision annotate_item(std::int64_t item, const Ranking& ranking, const ExpertOracle& oracle,
                       const PolicyConfig& policy, int class_count,
                       std::span<const double> log_prior = {},
                       std::vector<ClassLabel>* votes_out = nullptr);

/// Runs the full per-item loop over `stream` (item ids, no repeats):
/// rank experts, annotate, append the new labels to the history, then
/// re-estimate every profile with EM. Deterministic for a fixed seed.
StreamResult process_stream(const ExpertOracle& oracle, std::span<const std::int64_t> stream,
                            const PolicyConfig& policy, const EmConfig& em_config,
                            std::uint64_t seed);

} // namespace quorum
