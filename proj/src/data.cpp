#include "quorum/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "quorum/rng.hpp"

namespace quorum {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

ClassLabel parse_label(const std::string& path, std::size_t line_no,
                       const std::string& text, int class_count) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        parse_fail(path, line_no, "label '" + text + "' is not an integer");
    }
    if (value < 0 || value >= class_count) {
        parse_fail(path, line_no, "label " + std::to_string(value) +
                                      " outside [0, " + std::to_string(class_count) + ")");
    }
    return value;
}

} // namespace

Dataset load_dataset(const std::string& annotations_path,
                     const std::optional<std::string>& truth_path, int class_count) {
    if (class_count < 2) {
        throw std::invalid_argument("class_count must be >= 2");
    }
    std::ifstream in(annotations_path);
    if (!in) {
        throw std::runtime_error("cannot open annotations file: " + annotations_path);
    }

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) {
        parse_fail(annotations_path, 1, "file is empty");
    }
    ++line_no;
    {
        const auto header = split_csv(line);
        if (header != std::vector<std::string>{"item_id", "expert_id", "label"}) {
            parse_fail(annotations_path, line_no,
                       "expected header 'item_id,expert_id,label'");
        }
    }

    Dataset dataset;
    dataset.class_count = class_count;
    std::unordered_map<std::string, std::size_t> item_index;
    std::unordered_map<std::string, std::size_t> expert_index;
    struct Row {
        std::size_t item;
        std::size_t expert;
        ClassLabel label;
        std::size_t line_no;
    };
    std::vector<Row> rows;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3) {
            parse_fail(annotations_path, line_no,
                       "expected 3 comma-separated fields, got " +
                           std::to_string(fields.size()));
        }
        if (fields[0].empty() || fields[1].empty()) {
            parse_fail(annotations_path, line_no, "empty item or expert id");
        }
        const auto [item_it, new_item] =
            item_index.try_emplace(fields[0], dataset.item_names.size());
        if (new_item) dataset.item_names.push_back(fields[0]);
        const auto [expert_it, new_expert] =
            expert_index.try_emplace(fields[1], dataset.expert_names.size());
        if (new_expert) dataset.expert_names.push_back(fields[1]);
        rows.push_back({item_it->second, expert_it->second,
                        parse_label(annotations_path, line_no, fields[2], class_count),
                        line_no});
    }
    if (rows.empty()) {
        parse_fail(annotations_path, line_no + 1, "no annotation rows");
    }

    dataset.labels.assign(dataset.item_names.size(),
                          std::vector<std::optional<ClassLabel>>(dataset.expert_names.size()));
    for (const Row& row : rows) {
        auto& cell = dataset.labels[row.item][row.expert];
        if (cell.has_value()) {
            parse_fail(annotations_path, row.line_no,
                       "duplicate annotation for item '" + dataset.item_names[row.item] +
                           "', expert '" + dataset.expert_names[row.expert] + "'");
        }
        cell = row.label;
    }

    if (truth_path) {
        std::ifstream truth_in(*truth_path);
        if (!truth_in) {
            throw std::runtime_error("cannot open truth file: " + *truth_path);
        }
        dataset.ground_truth.assign(dataset.item_names.size(), std::nullopt);
        std::size_t truth_line = 0;
        if (!std::getline(truth_in, line)) {
            parse_fail(*truth_path, 1, "file is empty");
        }
        ++truth_line;
        if (split_csv(line) != std::vector<std::string>{"item_id", "label"}) {
            parse_fail(*truth_path, truth_line, "expected header 'item_id,label'");
        }
        while (std::getline(truth_in, line)) {
            ++truth_line;
            if (trim(line).empty()) continue;
            const auto fields = split_csv(line);
            if (fields.size() != 2) {
                parse_fail(*truth_path, truth_line, "expected 2 comma-separated fields");
            }
            const auto it = item_index.find(fields[0]);
            if (it == item_index.end()) {
                parse_fail(*truth_path, truth_line,
                           "item '" + fields[0] + "' does not appear in the annotations");
            }
            if (dataset.ground_truth[it->second].has_value()) {
                parse_fail(*truth_path, truth_line, "duplicate truth for item '" + fields[0] + "'");
            }
            dataset.ground_truth[it->second] =
                parse_label(*truth_path, truth_line, fields[1], class_count);
        }
    }
    return dataset;
}

void save_dataset(const Dataset& dataset, const std::string& annotations_path,
                  const std::optional<std::string>& truth_path) {
    std::ofstream out(annotations_path);
    if (!out) {
        throw std::runtime_error("cannot write annotations file: " + annotations_path);
    }
    out << "item_id,expert_id,label\n";
    for (std::size_t n = 0; n < dataset.labels.size(); ++n) {
        for (std::size_t k = 0; k < dataset.labels[n].size(); ++k) {
            if (dataset.labels[n][k]) {
                out << dataset.item_names[n] << ',' << dataset.expert_names[k] << ','
                    << *dataset.labels[n][k] << '\n';
            }
        }
    }
    if (!out) {
        throw std::runtime_error("write failed: " + annotations_path);
    }

    if (truth_path && dataset.has_truth()) {
        std::ofstream truth_out(*truth_path);
        if (!truth_out) {
            throw std::runtime_error("cannot write truth file: " + *truth_path);
        }
        truth_out << "item_id,label\n";
        for (std::size_t n = 0; n < dataset.ground_truth.size(); ++n) {
            if (dataset.ground_truth[n]) {
                truth_out << dataset.item_names[n] << ',' << *dataset.ground_truth[n] << '\n';
            }
        }
        if (!truth_out) {
            throw std::runtime_error("write failed: " + *truth_path);
        }
    }
}

namespace {

void validate_spec(const SyntheticSpec& spec) {
    if (spec.experts < 1) throw std::invalid_argument("synthetic spec: experts must be >= 1");
    if (spec.items < 1) throw std::invalid_argument("synthetic spec: items must be >= 1");
    if (spec.class_count < 2) {
        throw std::invalid_argument("synthetic spec: class_count must be >= 2");
    }
    const double chance = 1.0 / static_cast<double>(spec.class_count);
    if (spec.accuracies.size() != static_cast<std::size_t>(spec.experts)) {
        throw std::invalid_argument("synthetic spec: need one accuracy per expert");
    }
    for (double a : spec.accuracies) {
        if (!(a > chance && a < 1.0)) {
            throw std::invalid_argument(
                "synthetic spec: accuracies must lie in (1/|classes|, 1)");
        }
    }
    if (spec.availability.size() != static_cast<std::size_t>(spec.experts)) {
        throw std::invalid_argument("synthetic spec: need one availability per expert");
    }
    for (double p : spec.availability) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw std::invalid_argument("synthetic spec: availability must lie in (0, 1]");
        }
    }
    if (spec.easy_fraction < 0.0 || spec.easy_fraction > 1.0) {
        throw std::invalid_argument("synthetic spec: easy_fraction must lie in [0, 1]");
    }
    if (spec.difficulty_delta < 0.0 || spec.difficulty_delta >= 0.5) {
        throw std::invalid_argument("synthetic spec: difficulty_delta must lie in [0, 0.5)");
    }
    if (spec.class_prior.size() != static_cast<std::size_t>(spec.class_count)) {
        throw std::invalid_argument("synthetic spec: need one prior weight per class");
    }
    double total = 0.0;
    for (double w : spec.class_prior) {
        if (w < 0.0) throw std::invalid_argument("synthetic spec: negative class prior");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("synthetic spec: class prior must sum to 1");
    }
}

} // namespace

Dataset generate_synthetic(const SyntheticSpec& spec) {
    validate_spec(spec);

    Dataset dataset;
    dataset.class_count = spec.class_count;
    dataset.expert_names.reserve(static_cast<std::size_t>(spec.experts));
    for (int k = 0; k < spec.experts; ++k) {
        dataset.expert_names.push_back("e" + std::to_string(k));
    }
    dataset.item_names.reserve(static_cast<std::size_t>(spec.items));
    dataset.labels.reserve(static_cast<std::size_t>(spec.items));
    dataset.ground_truth.reserve(static_cast<std::size_t>(spec.items));

    const double chance = 1.0 / static_cast<double>(spec.class_count);
    Rng rng(spec.seed);

    std::vector<double> prior_cdf(spec.class_prior.size());
    std::partial_sum(spec.class_prior.begin(), spec.class_prior.end(), prior_cdf.begin());
    prior_cdf.back() = 1.0;

    auto draw_class = [&]() -> ClassLabel {
        const double u = rng.next_unit();
        const auto it = std::upper_bound(prior_cdf.begin(), prior_cdf.end(), u);
        return static_cast<ClassLabel>(std::min<std::size_t>(
            static_cast<std::size_t>(it - prior_cdf.begin()), prior_cdf.size() - 1));
    };

    auto draw_answer = [&](int expert, bool easy, ClassLabel truth) -> ClassLabel {
        const double base = spec.accuracies[static_cast<std::size_t>(expert)];
        const double p_correct = easy
                                     ? std::min(base + spec.difficulty_delta, 0.99)
                                     : std::max(base - spec.difficulty_delta, chance + 0.01);
        if (rng.bernoulli(p_correct)) {
            return truth;
        }
        const int wrong = rng.below_int(spec.class_count - 1);
        return wrong < truth ? wrong : wrong + 1;
    };

    for (std::int64_t n = 0; n < spec.items; ++n) {
        dataset.item_names.push_back("i" + std::to_string(n));
        const ClassLabel truth = draw_class();
        dataset.ground_truth.push_back(truth);
        const bool easy = rng.bernoulli(spec.easy_fraction);

        std::vector<std::optional<ClassLabel>> row(static_cast<std::size_t>(spec.experts));
        bool any = false;
        for (int k = 0; k < spec.experts; ++k) {
            if (rng.bernoulli(spec.availability[static_cast<std::size_t>(k)])) {
                row[static_cast<std::size_t>(k)] = draw_answer(k, easy, truth);
                any = true;
            }
        }
        if (!any) {
            // Every item must carry at least one label for the stream to be
            // processable; conscript a random expert.
            const int k = rng.below_int(spec.experts);
            row[static_cast<std::size_t>(k)] = draw_answer(k, easy, truth);
        }
        dataset.labels.push_back(std::move(row));
    }
    return dataset;
}

std::vector<std::vector<std::int64_t>> bootstrap_streams(const Dataset& dataset,
                                                         int replicas,
                                                         std::int64_t stream_length,
                                                         std::uint64_t seed) {
    const std::int64_t total = dataset.item_count();
    if (replicas < 1) {
        throw std::invalid_argument("replicas must be >= 1");
    }
    if (stream_length < 1 || stream_length > total) {
        throw std::invalid_argument("stream_length must lie in [1, item_count]");
    }

    std::vector<std::vector<std::int64_t>> streams;
    streams.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
        Rng rng(mix_seed(seed, 0x5eedULL, static_cast<std::uint64_t>(r)));
        std::vector<std::int64_t> indices(static_cast<std::size_t>(total));
        std::iota(indices.begin(), indices.end(), 0);
        // Partial Fisher-Yates: the first stream_length entries are a
        // uniform sample without replacement, already in random order.
        for (std::int64_t j = 0; j < stream_length; ++j) {
            const auto pick = j + static_cast<std::int64_t>(
                                      rng.below(static_cast<std::uint64_t>(total - j)));
            std::swap(indices[static_cast<std::size_t>(j)],
                      indices[static_cast<std::size_t>(pick)]);
        }
        indices.resize(static_cast<std::size_t>(stream_length));
        streams.push_back(std::move(indices));
    }
    return streams;
}

} // namespace quorum
