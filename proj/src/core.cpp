#include "quorum/core.hpp"

#include <stdexcept>
#include <string>

namespace quorum {

double trust_of(const ExpertProfile& profile) {
    if (profile.queries < 0.0 || profile.successes < 0.0 ||
        profile.successes > profile.queries) {
        throw std::invalid_argument(
            "invalid expert profile: require 0 <= s <= t, got t=" +
            std::to_string(profile.queries) + " s=" + std::to_string(profile.successes));
    }
    return (profile.successes + 1.0) / (profile.queries + 2.0);
}

void AnnotationHistory::record(const Annotation& annotation) {
    auto [it, inserted] = slot_of_item_.try_emplace(annotation.item, item_entries_.size());
    if (inserted) {
        item_entries_.emplace_back();
    } else {
        for (std::uint32_t idx : item_entries_[it->second]) {
            if (entries_[idx].expert == annotation.expert) {
                throw std::invalid_argument(
                    "duplicate annotation for item " + std::to_string(annotation.item) +
                    ", expert " + std::to_string(annotation.expert));
            }
        }
    }
    item_entries_[it->second].push_back(static_cast<std::uint32_t>(entries_.size()));
    entries_.push_back(annotation);
}

} // namespace quorum
