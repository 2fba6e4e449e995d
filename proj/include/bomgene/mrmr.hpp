#pragma once

// Greedy minimum-redundancy maximum-relevance screening.
//
// score_i = Rel(X_i, y) - (1/|S|) * sum_{s in S} red(X_i, X_s), with the
// redundancy sums for every remaining candidate maintained incrementally:
// each pick adds one pairwise term per remaining candidate, so selecting p
// of n features costs sum_{t=1..p-1} (n - t) redundancy evaluations.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/stats.hpp"

namespace bomgene {

struct MrmrConfig {
    /// Unset means min(n, m, 500).
    std::optional<std::size_t> max_features;
    RelevanceMeasure relevance = RelevanceMeasure::FTest;
    RedundancyMeasure redundancy = RedundancyMeasure::AbsPearson;
    /// Stop as soon as the best remaining score falls below this.
    std::optional<double> min_score;
    /// Bins for mutual-information measures. Unset means ceil(sqrt(m)).
    std::optional<std::size_t> mi_bins;
};

inline std::size_t effective_max_features(const MrmrConfig& config, std::size_t m, std::size_t n) {
    if (config.max_features) {
        return std::min(*config.max_features, n);
    }
    return std::min({n, m, std::size_t{500}});
}

struct MrmrStep {
    std::size_t feature = 0;
    double relevance = 0.0;
    double redundancy = 0.0;
    double score = 0.0;

    friend bool operator==(const MrmrStep&, const MrmrStep&) = default;
};

struct MrmrTrace {
    std::vector<MrmrStep> steps;
    /// Pairwise redundancy evaluations performed.
    std::size_t redundancy_evaluations = 0;
};

struct MrmrState {
    FeatureSet selected;
    /// Candidates not yet selected, ascending.
    std::vector<std::size_t> remaining;
    /// redundancy_sums[i] = sum over selected s of red(X_i, X_s), kept for remaining i.
    std::vector<double> redundancy_sums;
    std::vector<double> relevance_cache;
    /// Constant columns; only eligible once every non-constant candidate is taken.
    std::vector<bool> constant;
    RedundancyMeasure redundancy = RedundancyMeasure::AbsPearson;
    std::size_t bins = 2;
    std::size_t redundancy_evaluations = 0;
};

/// Pairwise redundancy between two feature columns.
inline double pairwise_redundancy(std::span<const double> a, std::span<const double> b, RedundancyMeasure measure,
                                  std::size_t bins) {
    switch (measure) {
    case RedundancyMeasure::AbsPearson:
        return std::abs(pearson(a, b));
    case RedundancyMeasure::MutualInformation:
        return mutual_information(a, b, bins);
    }
    return 0.0;
}

inline double feature_relevance(std::span<const double> column, const Labels& labels, RelevanceMeasure measure,
                                std::size_t bins) {
    switch (measure) {
    case RelevanceMeasure::FTest:
        return f_statistic(column, labels);
    case RelevanceMeasure::MutualInformation:
        return mutual_information(column, labels, bins);
    }
    return 0.0;
}

inline MrmrState initial_mrmr_state(const Dataset& dataset, const Labels& labels, const MrmrConfig& config) {
    MrmrState state;
    const std::size_t n = dataset.n();
    state.redundancy = config.redundancy;
    state.bins = config.mi_bins.value_or(default_bins(dataset.m()));
    state.remaining.resize(n);
    state.redundancy_sums.assign(n, 0.0);
    state.relevance_cache.resize(n);
    state.constant.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        state.remaining[j] = j;
        state.constant[j] = is_constant(dataset.column(j));
        state.relevance_cache[j] = feature_relevance(dataset.column(j), labels, config.relevance, state.bins);
    }
    return state;
}

/// Adds red(X_i, X_new) to the running sum of every remaining candidate.
inline MrmrState update_redundancy(MrmrState state, std::size_t newly_selected, const Dataset& dataset) {
    const auto chosen = dataset.column(newly_selected);
    for (std::size_t i : state.remaining) {
        state.redundancy_sums[i] += pairwise_redundancy(dataset.column(i), chosen, state.redundancy, state.bins);
        ++state.redundancy_evaluations;
    }
    return state;
}

/// Best candidate under the current state, or nullopt when none remain.
/// Non-constant candidates always precede constant ones; ties go to the lowest index.
inline std::optional<MrmrStep> best_mrmr_candidate(const MrmrState& state) {
    std::optional<MrmrStep> best;
    bool best_constant = true;
    const double selected = static_cast<double>(state.selected.size());
    for (std::size_t i : state.remaining) {
        const double red = selected > 0 ? state.redundancy_sums[i] / selected : 0.0;
        const double score = state.relevance_cache[i] - red;
        const bool constant = state.constant[i];
        const bool better = !best || (best_constant && !constant) || (best_constant == constant && score > best->score);
        if (better) {
            best = MrmrStep{i, state.relevance_cache[i], red, score};
            best_constant = constant;
        }
    }
    return best;
}

inline std::pair<FeatureSet, MrmrTrace> select_mrmr(const Dataset& dataset, const Labels& labels,
                                                    const MrmrConfig& config) {
    if (config.max_features && *config.max_features == 0) {
        throw validation_error("mrmr: max_features must be >= 1");
    }
    const std::size_t limit = effective_max_features(config, dataset.m(), dataset.n());
    MrmrState state = initial_mrmr_state(dataset, labels, config);
    MrmrTrace trace;

    while (state.selected.size() < limit) {
        auto step = best_mrmr_candidate(state);
        if (!step || (config.min_score && step->score < *config.min_score)) {
            break;
        }
        state.selected.indices.push_back(step->feature);
        state.remaining.erase(std::find(state.remaining.begin(), state.remaining.end(), step->feature));
        trace.steps.push_back(*step);
        if (state.selected.size() < limit && !state.remaining.empty()) {
            state = update_redundancy(std::move(state), step->feature, dataset);
        }
    }
    trace.redundancy_evaluations = state.redundancy_evaluations;
    return {std::move(state.selected), std::move(trace)};
}

} // namespace bomgene
