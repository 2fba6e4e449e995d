// Randomised checks of the library's invariants over many generated inputs.

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "bomgene/bomgene.hpp"
#include "support.hpp"

using namespace bomgene;
using testing_support::random_dataset;

namespace {

std::vector<double> random_column(Rng& rng, std::size_t m) {
    std::vector<double> x(m);
    for (auto& v : x) {
        v = rng.normal() * 3.0 + 1.0;
    }
    return x;
}

} // namespace

TEST(Property, MrmrIncrementalEqualsOracle) {
    Rng pick(RandomSource{100, 0});
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t k = 2 + pick.below(2);
        const std::size_t m = 2 * k + 1 + pick.below(30 - 2 * k);
        const std::size_t n = 1 + pick.below(8);
        std::vector<std::pair<std::size_t, std::size_t>> copies;
        if (n >= 3 && pick.below(4) == 0) {
            copies.emplace_back(n - 1, 0);
        }
        auto [d, y] = random_dataset(m, n, k, seed + 500, copies);
        MrmrConfig c;
        c.max_features = n;
        EXPECT_EQ(select_mrmr(d, y, c).first.indices, testing_support::brute_force_mrmr(d, y, n))
            << "seed " << seed << " m=" << m << " n=" << n;
    }
}

TEST(Property, RedundancySumsMatchRecomputation) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto [d, y] = random_dataset(20, 10, 2, seed + 900);
        MrmrState state = initial_mrmr_state(d, y, MrmrConfig{});
        while (auto step = best_mrmr_candidate(state)) {
            state.selected.indices.push_back(step->feature);
            state.remaining.erase(std::find(state.remaining.begin(), state.remaining.end(), step->feature));
            state = update_redundancy(std::move(state), step->feature, d);
            const auto expected = testing_support::scratch_sums(d, state.selected.indices);
            for (std::size_t i : state.remaining) {
                EXPECT_NEAR(state.redundancy_sums[i], expected[i], 1e-9);
            }
        }
    }
}

TEST(Property, FStatisticAffineInvariance) {
    Rng rng(RandomSource{7, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t k = 2 + rep % 3;
        std::vector<std::string> raw;
        for (std::size_t i = 0; i < 24; ++i) {
            raw.push_back(std::to_string(i % k));
        }
        const Labels y = encode_labels(raw);
        auto x = random_column(rng, 24);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += 0.4 * y.codes[i];
        }
        const double f = f_statistic(x, y);
        for (double c : {0.5, 3.0, -2.0}) {
            for (double b : {-1.0, 10.0}) {
                std::vector<double> t(x.size());
                std::transform(x.begin(), x.end(), t.begin(), [&](double v) { return c * v + b; });
                EXPECT_NEAR(f_statistic(t, y), f, 1e-9 * std::max(1.0, f));
            }
        }
    }
}

TEST(Property, PearsonSymmetryAndAffineMaps) {
    Rng rng(RandomSource{8, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = random_column(rng, 15);
        auto b = random_column(rng, 15);
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] += 0.5 * a[i];
        }
        const double r = pearson(a, b);
        EXPECT_GE(r, -1.0);
        EXPECT_LE(r, 1.0);
        EXPECT_DOUBLE_EQ(pearson(b, a), r);
        std::vector<double> neg(a.size());
        std::transform(a.begin(), a.end(), neg.begin(), [](double v) { return -4.0 * v + 2.0; });
        EXPECT_NEAR(pearson(neg, b), -r, 1e-12);
        std::vector<double> pos(a.size());
        std::transform(a.begin(), a.end(), pos.begin(), [](double v) { return 0.25 * v - 7.0; });
        EXPECT_NEAR(pearson(pos, b), r, 1e-12);
    }
}

TEST(Property, MutualInformationSymmetricNonNegative) {
    Rng rng(RandomSource{9, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const auto a = random_column(rng, 40);
        auto b = random_column(rng, 40);
        if (rep % 2) {
            for (std::size_t i = 0; i < b.size(); ++i) {
                b[i] += a[i];
            }
        }
        const std::size_t bins = 2 + static_cast<std::size_t>(rep % 6);
        const double ab = mutual_information(a, b, bins);
        EXPECT_GE(ab, 0.0);
        EXPECT_NEAR(ab, mutual_information(b, a, bins), 1e-12);
    }
}

TEST(Property, PermutationStreamsIndependent) {
    std::vector<double> v(20);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = static_cast<double>(i);
    }
    const RandomSource root{5, 0};
    std::size_t same = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        same += permute_column(v, root.child(s)) == permute_column(v, root.child(s + 1)) ? 1 : 0;
        EXPECT_EQ(permute_column(v, root.child(s)), permute_column(v, RandomSource{5, 0}.child(s)));
    }
    EXPECT_EQ(same, 0u);
}

TEST(Property, MetricsInvariantUnderClassRelabelling) {
    Rng rng(RandomSource{10, 0});
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t k = 2 + rng.below(4);
        Confusion c(k, std::vector<std::size_t>(k));
        for (auto& row : c) {
            for (auto& v : row) {
                v = rng.below(10);
            }
        }
        c[0][0] += 1;
        std::vector<std::size_t> perm(k);
        for (std::size_t i = 0; i < k; ++i) {
            perm[i] = i;
        }
        shuffle(std::span<std::size_t>(perm), rng);
        Confusion p(k, std::vector<std::size_t>(k));
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t col = 0; col < k; ++col) {
                p[perm[r]][perm[col]] = c[r][col];
            }
        }
        const Metrics a = macro_metrics(c);
        const Metrics b = macro_metrics(p);
        EXPECT_NEAR(a.accuracy, b.accuracy, 1e-12);
        EXPECT_NEAR(a.precision, b.precision, 1e-12);
        EXPECT_NEAR(a.recall, b.recall, 1e-12);
        EXPECT_NEAR(a.f1, b.f1, 1e-12);
        for (double v : {a.accuracy, a.precision, a.recall, a.f1}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(Property, PerfectMetricsIffDiagonal) {
    Rng rng(RandomSource{11, 0});
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t k = 2 + rng.below(3);
        Confusion c(k, std::vector<std::size_t>(k, 0));
        for (std::size_t i = 0; i < k; ++i) {
            c[i][i] = 1 + rng.below(5);
        }
        EXPECT_EQ(macro_metrics(c).f1, 1.0);
        const std::size_t r = rng.below(k);
        c[r][(r + 1) % k] += 1;
        const Metrics m = macro_metrics(c);
        EXPECT_LT(m.accuracy, 1.0);
        EXPECT_LT(m.f1, 1.0);
    }
}

TEST(Property, FoldsPartitionForAnyLabels) {
    Rng rng(RandomSource{12, 0});
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t m = 10 + rng.below(60);
        const std::size_t k = 2 + rng.below(3);
        std::vector<std::string> raw(m);
        for (std::size_t i = 0; i < m; ++i) {
            raw[i] = std::to_string(i < k ? i : rng.below(k));
        }
        const Labels y = encode_labels(raw);
        CvScheme s{rep % 4 == 0 ? CvKind::LeaveOneOut : CvKind::StratifiedKFold, 2 + rng.below(9), 1,
                   RandomSource{static_cast<std::uint64_t>(rep), 1}};
        std::vector<int> seen(m, 0);
        for (const auto& f : make_folds(y, s)) {
            for (std::size_t i : f.test) {
                ++seen[i];
            }
        }
        EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
    }
}

TEST(Property, ProjectAllIndicesIsIdentity) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto [d, y] = random_dataset(5 + seed, 1 + seed % 7, 2, seed);
        EXPECT_EQ(project(d, all_features(d.n())), d);
    }
}
