#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quorum/core.hpp"
#include "quorum/engine.hpp"

namespace quorum {

/// A multi-annotator corpus: per-item recorded labels for a fixed expert
/// roster, with abstentions represented as missing entries. Ground truth is
/// optional and used only for evaluation, never by the labeling engine.
struct Dataset {
    int class_count = 0;
    std::vector<std::string> item_names;   // external ids, metadata only
    std::vector<std::string> expert_names; // roster, coalition order
    std::vector<std::vector<std::optional<ClassLabel>>> labels; // [item][expert]
    std::vector<std::optional<ClassLabel>> ground_truth;        // empty if none loaded

    std::int64_t item_count() const { return static_cast<std::int64_t>(labels.size()); }
    int expert_count() const { return static_cast<int>(expert_names.size()); }
    bool has_truth() const { return !ground_truth.empty(); }

    bool operator==(const Dataset&) const = default;
};

/// Answers queries straight from recorded labels; a missing entry is an
/// abstention.
class DatasetOracle final : public ExpertOracle {
public:
    explicit DatasetOracle(const Dataset& dataset) : dataset_(&dataset) {}

    std::optional<ClassLabel> answer(std::int64_t item, ExpertIndex expert) const override {
        return dataset_->labels[static_cast<std::size_t>(item)]
                               [static_cast<std::size_t>(expert)];
    }
    int coalition_size() const override { return dataset_->expert_count(); }
    int class_count() const override { return dataset_->class_count; }
    std::int64_t item_count() const override { return dataset_->item_count(); }

private:
    const Dataset* dataset_;
};

/// Parameters for a synthetic coalition. Item difficulty is a two-component
/// mixture: easy items raise every expert's accuracy by difficulty_delta,
/// hard items lower it, both clamped away from the degenerate endpoints.
struct SyntheticSpec {
    int experts = 0;
    std::int64_t items = 0;
    int class_count = 0;
    std::vector<double> accuracies;   // per expert, each in (1/|Z|, 1)
    std::vector<double> availability; // per expert, each in (0, 1]
    double easy_fraction = 0.5;       // in [0, 1]
    double difficulty_delta = 0.0;    // in [0, 0.5)
    std::vector<double> class_prior;  // size class_count, sums to 1
    std::uint64_t seed = 0;
};

/// Loads an annotation table (header `item_id,expert_id,label`) and an
/// optional truth table (header `item_id,label`). Items and experts are
/// indexed in first-appearance order; missing (item, expert) pairs are
/// abstentions. Throws std::runtime_error naming the offending line on any
/// malformed row, out-of-range label or duplicate pair.
Dataset load_dataset(const std::string& annotations_path,
                     const std::optional<std::string>& truth_path, int class_count);

/// Writes the annotation table (and the truth table when the dataset has
/// ground truth) in the same format load_dataset reads. Output is
/// byte-deterministic.
void save_dataset(const Dataset& dataset, const std::string& annotations_path,
                  const std::optional<std::string>& truth_path);

/// Draws a synthetic dataset from the spec, deterministically per seed.
/// Every item ends up with at least one recorded label.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Replica streams for evaluation: each is `stream_length` distinct item
/// indices, uniformly sampled without replacement and randomly ordered.
/// Deterministic per seed.
std::vector<std::vector<std::int64_t>> bootstrap_streams(const Dataset& dataset,
                                                         int replicas,
                                                         std::int64_t stream_length,
                                                         std::uint64_t seed);

} // namespace quorum
