#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace quorum {

/// Class labels are 0-based indices into the owning dataset's class set.
using ClassLabel = std::int32_t;

/// Experts are addressed by their coalition index; external names are
/// dataset metadata only.
using ExpertIndex = std::int32_t;

/// Per-expert query bookkeeping: t = times queried, s = estimated number of
/// correct answers. s is real-valued because it comes from expected counts,
/// not direct observation.
struct ExpertProfile {
    double queries = 0.0;   // t
    double successes = 0.0; // s, 0 <= s <= t

    bool operator==(const ExpertProfile&) const = default;
};

/// Posterior-mean accuracy estimate for a profile: mean of
/// Beta(s + 1, t - s + 1), i.e. (s + 1) / (t + 2). Always in (0, 1);
/// equals 0.5 for an unqueried expert.
double trust_of(const ExpertProfile& profile);

/// One submitted label: expert `expert` labeled item `item` as `label`.
struct Annotation {
    std::int64_t item = 0;
    ExpertIndex expert = 0;
    ClassLabel label = 0;

    bool operator==(const Annotation&) const = default;
};

/// Append-only record of all labels submitted during a stream run,
/// indexable by item. Rejects duplicate (item, expert) pairs.
class AnnotationHistory {
public:
    /// Appends one annotation. Throws std::invalid_argument if this
    /// (item, expert) pair was already recorded.
    void record(const Annotation& annotation);

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    std::span<const Annotation> entries() const { return entries_; }

    /// Number of distinct items seen so far. Slots are assigned in
    /// first-appearance order, which keeps every traversal deterministic.
    std::size_t item_count() const { return item_entries_.size(); }

    /// Annotations of the item at slot `slot`.
    std::span<const std::uint32_t> item_annotations(std::size_t slot) const {
        return item_entries_[slot];
    }

    const Annotation& entry(std::uint32_t index) const { return entries_[index]; }

private:
    std::vector<Annotation> entries_;
    std::unordered_map<std::int64_t, std::size_t> slot_of_item_;
    std::vector<std::vector<std::uint32_t>> item_entries_; // slot -> entry indices
};

/// Outcome for one stream item: the consensus label, its confidence, and the
/// query trace. `label` is empty only when every expert abstained, in which
/// case confidence is 0 and the item is reported unlabeled rather than
/// silently guessed.
struct Decision {
    std::int64_t item = 0;
    std::optional<ClassLabel> label;
    double confidence = 0.0;
    std::vector<ExpertIndex> queried;   // experts that returned a label, in query order
    std::vector<ExpertIndex> abstained; // experts skipped at zero cost

    int cost() const { return static_cast<int>(queried.size()); }
    bool labeled() const { return label.has_value(); }
};

/// Result of processing a whole stream.
struct StreamResult {
    std::vector<Decision> decisions;
    std::vector<ExpertProfile> final_profiles;
    double mean_cost = 0.0; // (1/N) * sum of per-item query counts
};

} // namespace quorum
