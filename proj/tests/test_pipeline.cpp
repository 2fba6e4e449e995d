#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "bomgene/pipeline.hpp"
#include "cli/synthetic.hpp"
#include "support.hpp"

using namespace bomgene;

namespace {

std::pair<Dataset, Labels> planted(std::size_t m, std::size_t n, std::size_t informative, std::uint64_t seed) {
    cli::PlantedSpec spec;
    spec.m = m;
    spec.n = n;
    spec.informative = informative;
    spec.seed = seed;
    return cli::to_dataset(cli::generate_planted(spec));
}

PipelineConfig quick(SelectionMethod method) {
    PipelineConfig c;
    c.method = method;
    c.mrmr.max_features = 20;
    c.boruta.max_iterations = 30;
    c.boruta.forest.n_trees = 80;
    c.rf_top_k = 10;
    return c;
}

} // namespace

TEST(MapIndices, ComposesThroughProjection) {
    EXPECT_EQ(map_indices(FeatureSet{{1, 0}}, FeatureSet{{10, 20, 30}}), (FeatureSet{{20, 10}}));
    EXPECT_EQ(map_indices(FeatureSet{{0, 1, 2}}, FeatureSet{{10, 20, 30}}), (FeatureSet{{10, 20, 30}}));
    EXPECT_THROW(map_indices(FeatureSet{}, FeatureSet{{10, 20, 30}}), Error);
    EXPECT_THROW(map_indices(FeatureSet{{3}}, FeatureSet{{10, 20, 30}}), Error);
}

TEST(MethodNames, RoundTrip) {
    for (auto m : {SelectionMethod::BoMGene, SelectionMethod::Mrmr, SelectionMethod::Boruta,
                   SelectionMethod::RfImportance}) {
        EXPECT_EQ(parse_method(to_string(m)), m);
    }
    EXPECT_FALSE(parse_method("lasso"));
}

TEST(ZScore, StandardisesColumnsAndZeroesConstants) {
    const Dataset d = Dataset::unchecked(4, 2, {1, 2, 3, 4, 7, 7, 7, 7}, {"a", "b"});
    const Dataset z = zscore(d);
    double mean = 0.0;
    double ss = 0.0;
    for (double v : z.column(0)) {
        mean += v;
        ss += v * v;
    }
    EXPECT_NEAR(mean, 0.0, 1e-12);
    EXPECT_NEAR(ss / 4.0, 1.0, 1e-12);
    for (double v : z.column(1)) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Pipeline, BomgeneIsContainedInItsMrmrStage) {
    auto [d, y] = planted(80, 120, 6, 3);
    const auto out = run_selection(d, y, quick(SelectionMethod::BoMGene));
    ASSERT_TRUE(out.mrmr_selected);
    ASSERT_TRUE(out.boruta_ledger);
    EXPECT_EQ(out.n_input, 120u);
    EXPECT_EQ(out.n_after_mrmr, 20u);
    EXPECT_EQ(out.n_final, out.selected.size());
    EXPECT_LE(out.n_final, out.n_after_mrmr);
    for (std::size_t j : out.selected.indices) {
        EXPECT_NE(std::find(out.mrmr_selected->indices.begin(), out.mrmr_selected->indices.end(), j),
                  out.mrmr_selected->indices.end());
    }
    EXPECT_EQ(out.boruta_columns, out.mrmr_selected);
    ASSERT_EQ(out.stage_times.size(), 2u);
    EXPECT_EQ(out.stage_times[0].stage, "mrmr");
    EXPECT_EQ(out.stage_times[1].stage, "boruta");
    EXPECT_NEAR(out.total_seconds(), out.stage_times[0].seconds + out.stage_times[1].seconds, 1e-12);
    EXPECT_GE(testing_support::count_prefix(d.feature_names(), out.selected, "informative_"), 5u);

    // Same mRMR configuration on its own gives the screened set.
    const auto mrmr_only = run_selection(d, y, quick(SelectionMethod::Mrmr));
    EXPECT_EQ(mrmr_only.selected, *out.mrmr_selected);
}

TEST(Pipeline, BaselinesProduceExpectedShapes) {
    auto [d, y] = planted(60, 40, 4, 5);
    const auto mr = run_selection(d, y, quick(SelectionMethod::Mrmr));
    EXPECT_EQ(mr.selected.size(), 20u);
    EXPECT_TRUE(mr.mrmr_trace);
    EXPECT_FALSE(mr.boruta_ledger);

    const auto bo = run_selection(d, y, quick(SelectionMethod::Boruta));
    EXPECT_EQ(bo.n_after_mrmr, bo.n_input);
    EXPECT_TRUE(bo.boruta_ledger);
    EXPECT_TRUE(std::is_sorted(bo.selected.indices.begin(), bo.selected.indices.end()));

    const auto rf = run_selection(d, y, quick(SelectionMethod::RfImportance));
    ASSERT_EQ(rf.selected.size(), 10u);
    ASSERT_TRUE(rf.rf_importance);
    const auto& z = rf.rf_importance->z;
    for (std::size_t r = 1; r < rf.selected.size(); ++r) {
        EXPECT_GE(z[rf.selected.indices[r - 1]], z[rf.selected.indices[r]]);
    }
    double cutoff = z[rf.selected.indices.back()];
    std::size_t above = 0;
    for (double v : z) {
        above += v > cutoff ? 1 : 0;
    }
    EXPECT_LT(above, 10u);
}

TEST(Pipeline, DeterministicOutcome) {
    auto [d, y] = planted(60, 50, 4, 6);
    const auto a = run_selection(d, y, quick(SelectionMethod::BoMGene));
    const auto b = run_selection(d, y, quick(SelectionMethod::BoMGene));
    EXPECT_EQ(a.selected, b.selected);
    EXPECT_EQ(a.n_after_mrmr, b.n_after_mrmr);
    EXPECT_EQ(a.boruta_ledger->hits, b.boruta_ledger->hits);
    EXPECT_EQ(a.mrmr_trace->steps, b.mrmr_trace->steps);
}

TEST(Pipeline, NormalisationLeavesDefaultMrmrUnchanged) {
    auto [d, y] = planted(60, 80, 5, 7);
    // Rescale columns wildly so normalisation has something to undo.
    std::vector<double> values = d.values();
    for (std::size_t j = 0; j < d.n(); ++j) {
        for (std::size_t i = 0; i < d.m(); ++i) {
            values[j * d.m() + i] = values[j * d.m() + i] * (1.0 + static_cast<double>(j)) - 3.0 * static_cast<double>(j);
        }
    }
    const Dataset scaled = Dataset::unchecked(d.m(), d.n(), values, d.feature_names());
    PipelineConfig c = quick(SelectionMethod::Mrmr);
    const auto plain = run_selection(scaled, y, c);
    c.normalize = Normalization::ZScore;
    const auto normed = run_selection(scaled, y, c);
    EXPECT_EQ(plain.selected, normed.selected);
}

TEST(Pipeline, RejectsBadConfig) {
    auto [d, y] = planted(30, 10, 2, 8);
    PipelineConfig c = quick(SelectionMethod::RfImportance);
    c.rf_top_k = 0;
    EXPECT_THROW(run_selection(d, y, c), Error);
    c = quick(SelectionMethod::BoMGene);
    c.mrmr.max_features = 0;
    EXPECT_THROW(run_selection(d, y, c), Error);
    c = quick(SelectionMethod::BoMGene);
    c.mrmr.min_score = 1e300;
    try {
        run_selection(d, y, c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Runtime);
    }
}
