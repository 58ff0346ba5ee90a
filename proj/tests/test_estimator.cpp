#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "quorum/estimator.hpp"
#include "quorum/rng.hpp"

using namespace quorum;

namespace {

AnnotationHistory random_history(Rng& rng, int experts, int items, int classes,
                                 double density = 1.0) {
    AnnotationHistory history;
    for (int n = 0; n < items; ++n) {
        bool any = false;
        for (int k = 0; k < experts; ++k) {
            if (rng.next_unit() < density) {
                history.record({n, k, rng.below_int(classes)});
                any = true;
            }
        }
        if (!any) {
            history.record({n, rng.below_int(experts), rng.below_int(classes)});
        }
    }
    return history;
}

std::vector<double> random_trusts(Rng& rng, int experts) {
    std::vector<double> trusts;
    for (int k = 0; k < experts; ++k) {
        trusts.push_back(rng.uniform(0.3, 0.85));
    }
    return trusts;
}

} // namespace

TEST_CASE("per-item posteriors follow the vote model") {
    AnnotationHistory history;
    history.record({0, 0, 0});
    history.record({0, 1, 0});
    const auto result = e_step(history, std::vector<double>{0.9, 0.9}, 2);
    REQUIRE(result.posteriors.size() == 1);
    CHECK(result.posteriors[0][0] == doctest::Approx(0.81 / 0.82).epsilon(1e-12));
    CHECK(result.log_likelihood == doctest::Approx(std::log(0.82)).epsilon(1e-12));
}

TEST_CASE("uninformative trusts produce uniform posteriors") {
    Rng rng(3);
    AnnotationHistory history = random_history(rng, 4, 12, 2, 0.8);
    const auto result = e_step(history, std::vector<double>(4, 0.5), 2);
    for (const auto& posterior : result.posteriors) {
        CHECK(posterior[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(posterior[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("a lone annotator transfers their trust to the posterior") {
    AnnotationHistory history;
    history.record({0, 0, 1});
    const auto result = e_step(history, std::vector<double>{0.7}, 2);
    CHECK(result.posteriors[0][1] == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("the expected-count update sums posterior mass on voted labels") {
    AnnotationHistory history;
    history.record({0, 0, 0});
    history.record({1, 0, 1});
    const std::vector<std::vector<double>> posteriors = {{0.9, 0.1}, {0.4, 0.6}};
    const auto profiles = m_step(history, posteriors, 2);
    CHECK(profiles[0].queries == 2.0);
    CHECK(profiles[0].successes == doctest::Approx(1.5).epsilon(1e-15));
    // untouched expert keeps the empty profile
    CHECK(profiles[1].queries == 0.0);
    CHECK(profiles[1].successes == 0.0);
}

TEST_CASE("certain posteriors saturate the success count at t") {
    AnnotationHistory history;
    std::vector<std::vector<double>> posteriors;
    for (int n = 0; n < 7; ++n) {
        history.record({n, 0, 1});
        posteriors.push_back({0.0, 1.0});
    }
    const auto profiles = m_step(history, posteriors, 1);
    CHECK(profiles[0].queries == 7.0);
    CHECK(profiles[0].successes == 7.0);
}

TEST_CASE("a fully symmetric binary instance settles at one half") {
    AnnotationHistory history;
    history.record({0, 0, 0});
    history.record({0, 1, 0});
    const auto result = run_em(history, std::vector<double>{0.5, 0.5}, {}, 2);
    CHECK(result.iterations < 100);
    for (double trust : result.trusts) {
        CHECK(trust == doctest::Approx(0.5).epsilon(1e-4));
    }
}

TEST_CASE("an expert agreeing with a reliable majority outranks a contrarian") {
    // expert 0 plus nine peers always agree; expert 10 always dissents
    const int classes = 4;
    AnnotationHistory history;
    for (int n = 0; n < 50; ++n) {
        const ClassLabel consensus = n % classes;
        for (int k = 0; k <= 9; ++k) {
            history.record({n, k, consensus});
        }
        history.record({n, 10, (consensus + 1) % classes});
    }
    EmConfig config;
    config.tolerance = 1e-12;
    config.max_iterations = 200;
    const auto result = run_em(history, std::vector<double>(11, 0.5), config, classes);
    CHECK(result.trusts[0] > 0.9);
    CHECK(result.trusts[10] < 0.1);
    CHECK(result.trusts[0] > result.trusts[10]);
}

TEST_CASE("the sweep cap is respected") {
    Rng rng(8);
    AnnotationHistory history = random_history(rng, 5, 20, 3);
    EmConfig config;
    config.tolerance = 1e-12;
    config.max_iterations = 1;
    const auto result = run_em(history, random_trusts(rng, 5), config, 3);
    CHECK(result.iterations == 1);
}

TEST_CASE("EM requires a nonempty history and sane trusts") {
    AnnotationHistory empty;
    CHECK_THROWS_AS(run_em(empty, std::vector<double>{0.5}, {}, 2), std::invalid_argument);

    AnnotationHistory history;
    history.record({0, 0, 0});
    CHECK_THROWS_AS(run_em(history, std::vector<double>{1.0}, {}, 2), std::invalid_argument);
    // coalition smaller than the expert ids present
    CHECK_THROWS_AS(e_step(history, std::vector<double>{}, 2), std::invalid_argument);
}

// The trust update (s+1)/(t+2) is the maximizer of the expected complete-data
// objective plus a Beta(2,2) log prior, so the guaranteed-monotone quantity is
// the penalized likelihood; the raw likelihood can dip on tiny samples where
// the prior term dominates.
TEST_CASE("the EM objective (likelihood plus trust prior) never drops") {
    Rng rng(4242);
    for (int instance = 0; instance < 300; ++instance) {
        const int experts = 2 + rng.below_int(7);
        const int items = 3 + rng.below_int(25);
        const int classes = 2 + rng.below_int(4);
        AnnotationHistory history = random_history(rng, experts, items, classes, 0.7);
        std::vector<double> trusts = random_trusts(rng, experts);

        double previous = 0.0;
        for (int sweep = 0; sweep < 25; ++sweep) {
            const auto e = e_step(history, trusts, classes);
            double objective = e.log_likelihood;
            for (double r : trusts) {
                objective += std::log(r) + std::log(1.0 - r);
            }
            if (sweep > 0) {
                CHECK(objective >= previous - 1e-10);
            }
            previous = objective;

            const auto profiles =
                m_step(history, e.posteriors, static_cast<std::size_t>(experts));
            double delta = 0.0;
            for (int k = 0; k < experts; ++k) {
                const double updated = trust_of(profiles[static_cast<std::size_t>(k)]);
                delta = std::max(delta, std::abs(updated - trusts[static_cast<std::size_t>(k)]));
                trusts[static_cast<std::size_t>(k)] = updated;
            }
            if (delta < 1e-12) break;
        }
    }
}

TEST_CASE("run_em reports one likelihood entry per sweep") {
    Rng rng(77);
    AnnotationHistory history = random_history(rng, 4, 15, 3);
    EmConfig config;
    config.tolerance = 1e-8;
    config.max_iterations = 40;
    const auto result = run_em(history, random_trusts(rng, 4), config, 3);
    CHECK(result.log_likelihoods.size() == static_cast<std::size_t>(result.iterations));
}

TEST_CASE("expected counts stay within bounds after every update") {
    Rng rng(1717);
    for (int i = 0; i < 1000; ++i) {
        const int experts = 2 + rng.below_int(6);
        const int items = 2 + rng.below_int(15);
        const int classes = 2 + rng.below_int(4);
        AnnotationHistory history = random_history(rng, experts, items, classes, 0.6);
        const auto e = e_step(history, random_trusts(rng, experts), classes);
        const auto profiles = m_step(history, e.posteriors, static_cast<std::size_t>(experts));

        std::vector<long> counted(static_cast<std::size_t>(experts), 0);
        for (const Annotation& a : history.entries()) {
            counted[static_cast<std::size_t>(a.expert)]++;
        }
        for (int k = 0; k < experts; ++k) {
            const auto& p = profiles[static_cast<std::size_t>(k)];
            CHECK(p.successes >= 0.0);
            CHECK(p.successes <= p.queries);
            CHECK(p.queries == static_cast<double>(counted[static_cast<std::size_t>(k)]));
        }
    }
}

TEST_CASE("warm starts rarely need more sweeps than cold starts") {
    Rng rng(9090);
    int warm_not_worse = 0;
    const int instances = 100;
    for (int i = 0; i < instances; ++i) {
        const int experts = 3 + rng.below_int(5);
        const int classes = 2 + rng.below_int(3);
        const int items = 8 + rng.below_int(20);
        AnnotationHistory history = random_history(rng, experts, items, classes, 0.8);

        EmConfig config;
        config.tolerance = 1e-7;
        config.max_iterations = 100;
        const auto settled = run_em(history, std::vector<double>(experts, 0.5), config, classes);

        // one more item arrives
        for (int k = 0; k < experts; ++k) {
            history.record({items, k, rng.below_int(classes)});
        }
        const auto cold = run_em(history, std::vector<double>(experts, 0.5), config, classes);
        const auto warm = run_em(history, settled.trusts, config, classes);
        if (warm.iterations <= cold.iterations) {
            ++warm_not_worse;
        }
    }
    CHECK(warm_not_worse >= instances * 9 / 10);
}

TEST_CASE("relabeling classes leaves the trusts unchanged") {
    Rng rng(606);
    for (int i = 0; i < 50; ++i) {
        const int experts = 3 + rng.below_int(4);
        const int items = 5 + rng.below_int(15);
        const int classes = 2 + rng.below_int(4);
        AnnotationHistory original = random_history(rng, experts, items, classes, 0.8);

        std::vector<ClassLabel> perm(static_cast<std::size_t>(classes));
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        AnnotationHistory relabeled;
        for (const Annotation& a : original.entries()) {
            relabeled.record({a.item, a.expert, perm[static_cast<std::size_t>(a.label)]});
        }

        const auto initial = random_trusts(rng, experts);
        EmConfig config;
        config.tolerance = 1e-10;
        config.max_iterations = 80;
        const auto base = run_em(original, initial, config, classes);
        const auto mapped = run_em(relabeled, initial, config, classes);
        for (int k = 0; k < experts; ++k) {
            CHECK(mapped.trusts[static_cast<std::size_t>(k)] ==
                  doctest::Approx(base.trusts[static_cast<std::size_t>(k)]).epsilon(1e-9));
        }
    }
}
