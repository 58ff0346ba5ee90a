#include <doctest.h>

#include <stdexcept>

#include "quorum/core.hpp"
#include "quorum/rng.hpp"

using namespace quorum;

TEST_CASE("trust is the posterior mean of a uniform-prior Beta") {
    CHECK(trust_of({0.0, 0.0}) == 0.5);
    CHECK(trust_of({3.0, 2.0}) == doctest::Approx(0.6).epsilon(1e-15));
    // fractional success counts are legal
    CHECK(trust_of({2.0, 1.5}) == doctest::Approx((1.5 + 1.0) / (2.0 + 2.0)).epsilon(1e-15));
}

TEST_CASE("trust rejects malformed profiles") {
    CHECK_THROWS_AS(trust_of({2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(trust_of({-1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(trust_of({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("trust stays inside (0,1) and grows with successes") {
    Rng rng(11);
    for (int i = 0; i < 10000; ++i) {
        const double t = rng.uniform(0.0, 200.0);
        const double s = rng.uniform(0.0, t);
        const double r = trust_of({t, s});
        CHECK(r > 0.0);
        CHECK(r < 1.0);
        const double bump = rng.uniform(0.0, t - s);
        CHECK(trust_of({t, s + bump}) >= r);
    }
    // strict monotonicity in s for fixed t
    CHECK(trust_of({10.0, 6.0}) > trust_of({10.0, 5.0}));
}

TEST_CASE("history appends annotations and rejects duplicates") {
    AnnotationHistory history;
    CHECK(history.empty());
    history.record({0, 3, 0});
    CHECK(history.size() == 1);

    for (int i = 1; i <= 4; ++i) {
        history.record({i, 0, 1});
    }
    CHECK(history.size() == 5);
    history.record({0, 1, 1});
    CHECK(history.size() == 6);

    CHECK_THROWS_AS(history.record({0, 3, 1}), std::invalid_argument);
    CHECK(history.size() == 6); // rejected append leaves the record intact
}

TEST_CASE("history keeps insertion order and item grouping") {
    AnnotationHistory history;
    history.record({7, 0, 2});
    history.record({4, 1, 0});
    history.record({7, 1, 2});

    const auto entries = history.entries();
    REQUIRE(entries.size() == 3);
    CHECK(entries[0] == Annotation{7, 0, 2});
    CHECK(entries[1] == Annotation{4, 1, 0});
    CHECK(entries[2] == Annotation{7, 1, 2});

    REQUIRE(history.item_count() == 2); // slot order = first appearance
    CHECK(history.item_annotations(0).size() == 2);
    CHECK(history.item_annotations(1).size() == 1);
}

TEST_CASE("replaying the same annotations reproduces an identical history") {
    const std::vector<Annotation> sequence = {
        {2, 0, 1}, {5, 2, 0}, {2, 1, 1}, {9, 0, 0}, {5, 0, 1},
    };
    AnnotationHistory a, b;
    for (const auto& annotation : sequence) {
        a.record(annotation);
        b.record(annotation);
    }
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.entries()[i] == b.entries()[i]);
    }
}
