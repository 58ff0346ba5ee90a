#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "quorum/metrics.hpp"
#include "quorum/rng.hpp"

using namespace quorum;

namespace {

Decision make_decision(std::int64_t item, std::optional<ClassLabel> label,
                       std::vector<ExpertIndex> queried) {
    Decision d;
    d.item = item;
    d.label = label;
    d.confidence = label ? 0.9 : 0.0;
    d.queried = std::move(queried);
    return d;
}

} // namespace

TEST_CASE("accuracy counts matching labels, unlabeled items as misses") {
    const std::vector<std::optional<ClassLabel>> truth = {0, 1, 1, 0};

    std::vector<Decision> all_correct = {
        make_decision(0, 0, {0}), make_decision(1, 1, {0}),
        make_decision(2, 1, {0}), make_decision(3, 0, {0})};
    CHECK(accuracy(all_correct, truth) == 1.0);

    std::vector<Decision> three_of_four = all_correct;
    three_of_four[2].label = 0;
    CHECK(accuracy(three_of_four, truth) == 0.75);

    std::vector<Decision> with_unlabeled = all_correct;
    with_unlabeled[1].label.reset();
    CHECK(accuracy(with_unlabeled, truth) == 0.75);
}

TEST_CASE("accuracy requires ground truth for every decision") {
    const std::vector<std::optional<ClassLabel>> truth = {0, std::nullopt};
    std::vector<Decision> decisions = {make_decision(1, 0, {0})};
    CHECK_THROWS_AS(accuracy(decisions, truth), std::invalid_argument);
    decisions[0].item = 7; // out of range entirely
    CHECK_THROWS_AS(accuracy(decisions, truth), std::invalid_argument);
}

TEST_CASE("mean cost averages the query counts") {
    std::vector<Decision> flat = {make_decision(0, 0, {0, 1}), make_decision(1, 0, {2, 3}),
                                  make_decision(2, 0, {0, 2})};
    CHECK(mean_cost(flat) == 2.0);

    std::vector<Decision> skewed = {make_decision(0, 0, {0, 1}),
                                    make_decision(1, 0, {0, 1, 2, 3, 4, 5})};
    CHECK(mean_cost(skewed) == 4.0);

    CHECK_THROWS_AS(mean_cost({}), std::invalid_argument);
}

TEST_CASE("gini matches hand-computed values") {
    CHECK(gini(std::vector<long>{5, 5, 5, 5}) == 0.0);
    CHECK(gini(std::vector<long>{100, 0, 0, 0}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(gini(std::vector<long>{3, 2, 1}) == doctest::Approx(8.0 / 36.0).epsilon(1e-15));
}

TEST_CASE("gini is scale invariant and bounded by (K-1)/K") {
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        const int experts = 2 + rng.below_int(12);
        std::vector<long> counts;
        long total = 0;
        for (int k = 0; k < experts; ++k) {
            counts.push_back(rng.below_int(50));
            total += counts.back();
        }
        if (total == 0) counts[0] = 1;

        const double g = gini(counts);
        CHECK(g >= 0.0);
        CHECK(g < 1.0);

        std::vector<long> scaled;
        for (long c : counts) scaled.push_back(c * 7);
        CHECK(gini(scaled) == doctest::Approx(g).epsilon(1e-12));

        std::vector<long> concentrated(static_cast<std::size_t>(experts), 0);
        concentrated[0] = 1 + rng.below_int(100);
        CHECK(gini(concentrated) ==
              doctest::Approx((experts - 1.0) / experts).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gini(std::vector<long>{0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(gini(std::vector<long>{-1, 3}), std::invalid_argument);
}

TEST_CASE("ci95 is the interpolated percentile interval") {
    const std::vector<double> flat(100, 0.8);
    CHECK(ci95(flat) == std::pair<double, double>{0.8, 0.8});

    std::vector<double> ramp;
    for (int i = 1; i <= 100; ++i) ramp.push_back(i);
    const auto [low, high] = ci95(ramp);
    CHECK(low == doctest::Approx(3.475).epsilon(1e-12));
    CHECK(high == doctest::Approx(97.525).epsilon(1e-12));

    Rng rng(4);
    std::vector<double> shuffled = ramp;
    rng.shuffle(shuffled);
    const auto [low2, high2] = ci95(shuffled);
    CHECK(low2 == low);
    CHECK(high2 == high);

    CHECK_THROWS_AS(ci95(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("ci95 brackets the median") {
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        const int count = 2 + rng.below_int(40);
        std::vector<double> samples;
        for (int s = 0; s < count; ++s) samples.push_back(rng.uniform(-5.0, 5.0));
        auto sorted = samples;
        std::sort(sorted.begin(), sorted.end());
        const double median = count % 2 == 1
                                  ? sorted[static_cast<std::size_t>(count / 2)]
                                  : 0.5 * (sorted[static_cast<std::size_t>(count / 2 - 1)] +
                                           sorted[static_cast<std::size_t>(count / 2)]);
        const auto [low, high] = ci95(samples);
        CHECK(low <= median);
        CHECK(high >= median);
    }
}

TEST_CASE("queries over time is a plain moving average") {
    std::vector<Decision> constant;
    for (int i = 0; i < 6; ++i) constant.push_back(make_decision(i, 0, {0, 1}));
    for (double v : queries_over_time(constant, 3)) {
        CHECK(v == 2.0);
    }

    std::vector<Decision> falling = {
        make_decision(0, 0, {0, 1, 2, 3, 4, 5}), make_decision(1, 0, {0, 1, 2, 3, 4, 5}),
        make_decision(2, 0, {0, 1}), make_decision(3, 0, {0, 1})};
    CHECK(queries_over_time(falling, 2) == std::vector<double>{6.0, 4.0, 2.0});

    CHECK_THROWS_AS(queries_over_time(falling, 5), std::invalid_argument);
    CHECK_THROWS_AS(queries_over_time(falling, 0), std::invalid_argument);
}

TEST_CASE("accuracy and mean cost ignore decision order") {
    Rng rng(23);
    std::vector<std::optional<ClassLabel>> truth;
    std::vector<Decision> decisions;
    for (int i = 0; i < 50; ++i) {
        truth.push_back(rng.below_int(3));
        std::vector<ExpertIndex> queried;
        for (int q = 0; q <= rng.below_int(4); ++q) queried.push_back(q);
        decisions.push_back(make_decision(i, rng.below_int(3), queried));
    }
    const double base_accuracy = accuracy(decisions, truth);
    const double base_cost = mean_cost(decisions);
    rng.shuffle(decisions);
    CHECK(accuracy(decisions, truth) == base_accuracy);
    CHECK(mean_cost(decisions) == base_cost);
}

TEST_CASE("per-expert query counts accumulate across decisions") {
    std::vector<Decision> decisions = {make_decision(0, 0, {0, 2}),
                                       make_decision(1, 1, {2, 1})};
    CHECK(query_counts(decisions, 4) == std::vector<long>{1, 1, 2, 0});
}
