#include <algorithm>
#include <numeric>

#include <gtest/gtest.h>

#include "bomgene/mrmr.hpp"
#include "support.hpp"

using namespace bomgene;
using testing_support::brute_force_mrmr;
using testing_support::random_dataset;

TEST(Mrmr, DefaultSizeIsMinOfNMAnd500) {
    MrmrConfig c;
    EXPECT_EQ(effective_max_features(c, 30, 1000), 30u);
    EXPECT_EQ(effective_max_features(c, 800, 1000), 500u);
    EXPECT_EQ(effective_max_features(c, 800, 12), 12u);
    c.max_features = 7;
    EXPECT_EQ(effective_max_features(c, 30, 5), 5u);
}

TEST(Mrmr, FirstPickIsMostRelevant) {
    auto [d, y] = random_dataset(40, 12, 2, 5);
    MrmrConfig c;
    c.max_features = 3;
    auto [set, trace] = select_mrmr(d, y, c);
    std::size_t best = 0;
    for (std::size_t j = 1; j < d.n(); ++j) {
        if (f_statistic(d.column(j), y) > f_statistic(d.column(best), y)) {
            best = j;
        }
    }
    EXPECT_EQ(set.indices.front(), best);
    EXPECT_EQ(trace.steps.front().redundancy, 0.0);
    EXPECT_EQ(trace.steps.front().score, trace.steps.front().relevance);
}

TEST(Mrmr, DuplicateOfTopFeatureIsPenalised) {
    // Column 1 copies column 0; column 0 is made the most relevant.
    auto [d0, y] = random_dataset(30, 4, 2, 17);
    std::vector<std::vector<double>> rows(d0.m(), std::vector<double>(4));
    for (std::size_t i = 0; i < d0.m(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            rows[i][j] = d0(i, j);
        }
        rows[i][0] += 2.0 * y.codes[i];
        rows[i][2] += 1.0 * y.codes[i];
        rows[i][1] = rows[i][0];
    }
    auto [d, y2] = testing_support::from_rows(rows, [&] {
        std::vector<std::string> raw;
        for (int c : y.codes) {
            raw.push_back(std::to_string(c));
        }
        return raw;
    }());
    MrmrConfig c;
    c.max_features = 4;
    auto [set, trace] = select_mrmr(d, y2, c);
    EXPECT_EQ(set.indices, brute_force_mrmr(d, y2, 4));
    EXPECT_EQ(set.indices[0], 0u);
    const double dup_score = f_statistic(d.column(1), y2) - 1.0;
    const double alt = std::max(trace.steps[1].score, dup_score);
    if (trace.steps[1].feature != 1) {
        EXPECT_GT(trace.steps[1].score, dup_score);
    }
    EXPECT_DOUBLE_EQ(trace.steps[1].score, alt);
}

TEST(Mrmr, ExhaustionPutsConstantColumnsLast) {
    auto [d0, y] = random_dataset(20, 6, 2, 23);
    std::vector<std::vector<double>> rows(d0.m(), std::vector<double>(6));
    for (std::size_t i = 0; i < d0.m(); ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            rows[i][j] = d0(i, j);
        }
        rows[i][1] = 3.0;
        rows[i][4] = -1.0;
    }
    std::vector<std::string> raw;
    for (int c : y.codes) {
        raw.push_back(std::to_string(c));
    }
    auto [d, y2] = testing_support::from_rows(rows, raw);
    MrmrConfig c;
    c.max_features = 6;
    auto [set, trace] = select_mrmr(d, y2, c);
    ASSERT_EQ(set.size(), 6u);
    EXPECT_EQ(set.indices[4], 1u);
    EXPECT_EQ(set.indices[5], 4u);
    auto sorted = set.indices;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sorted, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5}));
    EXPECT_EQ(set.indices, brute_force_mrmr(d, y2, 6));
}

TEST(Mrmr, MatchesBruteForceOracle) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        auto [d, y] = random_dataset(10 + seed % 20, 2 + seed % 7, 2 + seed % 2, seed);
        MrmrConfig c;
        c.max_features = d.n();
        auto [set, trace] = select_mrmr(d, y, c);
        EXPECT_EQ(set.indices, brute_force_mrmr(d, y, d.n())) << "seed " << seed;
    }
}

TEST(Mrmr, UpdateRedundancyAddsOneTermPerCandidate) {
    auto [d, y] = random_dataset(20, 6, 2, 31);
    MrmrState state = initial_mrmr_state(d, y, MrmrConfig{});
    state.selected.indices.push_back(2);
    state.remaining.erase(std::find(state.remaining.begin(), state.remaining.end(), 2));
    state = update_redundancy(std::move(state), 2, d);
    for (std::size_t i : state.remaining) {
        EXPECT_DOUBLE_EQ(state.redundancy_sums[i], std::abs(pearson(d.column(i), d.column(2))));
    }
    EXPECT_EQ(state.redundancy_evaluations, 5u);

    MrmrState empty = state;
    empty.remaining.clear();
    const MrmrState after = update_redundancy(empty, 3, d);
    EXPECT_EQ(after.redundancy_sums, empty.redundancy_sums);
    EXPECT_EQ(after.redundancy_evaluations, empty.redundancy_evaluations);
}

TEST(Mrmr, EvaluationCountMatchesClosedForm) {
    auto [d, y] = random_dataset(30, 25, 3, 41);
    for (std::size_t p : {1u, 2u, 7u, 25u}) {
        MrmrConfig c;
        c.max_features = p;
        auto [set, trace] = select_mrmr(d, y, c);
        std::size_t expected = 0;
        for (std::size_t t = 1; t < p; ++t) {
            expected += d.n() - t;
        }
        EXPECT_EQ(trace.redundancy_evaluations, expected) << "p=" << p;
    }
}

TEST(Mrmr, PrefixStability) {
    auto [d, y] = random_dataset(40, 30, 2, 43);
    MrmrConfig big;
    big.max_features = 20;
    const auto full = select_mrmr(d, y, big).first.indices;
    for (std::size_t t = 1; t < 20; t += 3) {
        MrmrConfig small;
        small.max_features = t;
        const auto prefix = select_mrmr(d, y, small).first.indices;
        EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), full.begin())) << "t=" << t;
    }
}

TEST(Mrmr, MinScoreStopsEarly) {
    auto [d, y] = random_dataset(40, 30, 2, 47);
    MrmrConfig c;
    c.max_features = 30;
    const auto [all, trace_all] = select_mrmr(d, y, c);
    const double cut = trace_all.steps[5].score + 1e-12;
    c.min_score = cut;
    const auto [some, trace] = select_mrmr(d, y, c);
    ASSERT_LT(some.size(), all.size());
    for (const auto& s : trace.steps) {
        EXPECT_GE(s.score, cut);
    }
    EXPECT_THROW(select_mrmr(d, y, MrmrConfig{.max_features = 0}), Error);
}

TEST(Mrmr, MutualInformationConfiguration) {
    auto [d, y] = random_dataset(40, 10, 2, 53);
    MrmrConfig c;
    c.relevance = RelevanceMeasure::MutualInformation;
    c.redundancy = RedundancyMeasure::MutualInformation;
    c.max_features = 5;
    auto [set, trace] = select_mrmr(d, y, c);
    EXPECT_EQ(set.size(), 5u);
    for (const auto& s : trace.steps) {
        EXPECT_GE(s.relevance, 0.0);
        EXPECT_GE(s.redundancy, 0.0);
    }
    EXPECT_EQ(set, select_mrmr(d, y, c).first);
}
