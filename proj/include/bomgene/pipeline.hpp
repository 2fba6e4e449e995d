#pragma once

// Two-stage selection (mRMR screening, then Boruta refinement on the
// screened columns) and the three single-method baselines.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bomgene/boruta.hpp"
#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/forest.hpp"
#include "bomgene/mrmr.hpp"

namespace bomgene {

enum class SelectionMethod { BoMGene, Mrmr, Boruta, RfImportance };
enum class Normalization { None, ZScore };

inline const char* to_string(SelectionMethod method) {
    switch (method) {
    case SelectionMethod::BoMGene:
        return "bomgene";
    case SelectionMethod::Mrmr:
        return "mrmr";
    case SelectionMethod::Boruta:
        return "boruta";
    case SelectionMethod::RfImportance:
        return "rf-importance";
    }
    return "?";
}

inline std::optional<SelectionMethod> parse_method(const std::string& text) {
    for (auto m : {SelectionMethod::BoMGene, SelectionMethod::Mrmr, SelectionMethod::Boruta,
                   SelectionMethod::RfImportance}) {
        if (text == to_string(m)) {
            return m;
        }
    }
    return std::nullopt;
}

struct PipelineConfig {
    SelectionMethod method = SelectionMethod::BoMGene;
    MrmrConfig mrmr{};
    /// boruta.forest also serves the rf-importance baseline.
    BorutaConfig boruta{};
    std::size_t rf_top_k = 100;
    Normalization normalize = Normalization::None;
};

struct StageTime {
    std::string stage;
    double seconds = 0.0;
};

struct SelectionOutcome {
    SelectionMethod method = SelectionMethod::BoMGene;
    /// Indices into the original dataset.
    FeatureSet selected;
    std::size_t n_input = 0;
    std::size_t n_after_mrmr = 0;
    std::size_t n_final = 0;
    std::vector<StageTime> stage_times;
    std::optional<FeatureSet> mrmr_selected;
    std::optional<MrmrTrace> mrmr_trace;
    std::optional<BorutaLedger> boruta_ledger;
    /// Boruta ledger columns refer to these original indices.
    std::optional<FeatureSet> boruta_columns;
    std::optional<ImportanceVector> rf_importance;

    double total_seconds() const {
        double total = 0.0;
        for (const auto& st : stage_times) {
            total += st.seconds;
        }
        return total;
    }
};

/// Composes local indices into a projection with the projection itself.
inline FeatureSet map_indices(const FeatureSet& local, const FeatureSet& projection) {
    if (local.empty()) {
        throw validation_error("map_indices: empty feature set");
    }
    FeatureSet out;
    out.indices.reserve(local.size());
    for (std::size_t i : local.indices) {
        if (i >= projection.size()) {
            throw validation_error("map_indices: local index " + std::to_string(i) + " out of range (projection has " +
                                   std::to_string(projection.size()) + ")");
        }
        out.indices.push_back(projection.indices[i]);
    }
    return out;
}

/// Per-feature (x - mean) / sd with population sd; constant columns become 0.
inline Dataset zscore(const Dataset& data) {
    std::vector<double> values = data.values();
    const std::size_t m = data.m();
    for (std::size_t j = 0; j < data.n(); ++j) {
        double* col = values.data() + j * m;
        double mean = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            mean += col[i];
        }
        mean /= static_cast<double>(m);
        double ss = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            ss += (col[i] - mean) * (col[i] - mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(m));
        for (std::size_t i = 0; i < m; ++i) {
            col[i] = sd > 0.0 ? (col[i] - mean) / sd : 0.0;
        }
    }
    return Dataset::unchecked(m, data.n(), std::move(values), data.feature_names());
}

namespace detail {

class StageClock {
public:
    explicit StageClock(std::vector<StageTime>& sink, std::string stage)
        : sink_(sink), stage_(std::move(stage)), start_(std::chrono::steady_clock::now()) {}
    StageClock(const StageClock&) = delete;
    StageClock& operator=(const StageClock&) = delete;
    ~StageClock() {
        sink_.push_back({stage_, std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()});
    }

private:
    std::vector<StageTime>& sink_;
    std::string stage_;
    std::chrono::steady_clock::time_point start_;
};

/// Indices ordered by descending z, ties to the lowest index; first `k` kept.
inline FeatureSet top_k_by_z(const ImportanceVector& importance, std::size_t k) {
    std::vector<std::size_t> order = all_features(importance.z.size()).indices;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return importance.z[a] > importance.z[b]; });
    order.resize(std::min(k, order.size()));
    return FeatureSet{std::move(order)};
}

} // namespace detail

inline SelectionOutcome run_selection(const Dataset& input, const Labels& labels, const PipelineConfig& config) {
    if (config.rf_top_k == 0) {
        throw validation_error("rf_top_k must be >= 1");
    }
    const Dataset normalized = config.normalize == Normalization::ZScore ? zscore(input) : Dataset{};
    const Dataset& data = config.normalize == Normalization::ZScore ? normalized : input;

    SelectionOutcome out;
    out.method = config.method;
    out.n_input = data.n();

    switch (config.method) {
    case SelectionMethod::Mrmr: {
        detail::StageClock clock(out.stage_times, "mrmr");
        auto [selected, trace] = select_mrmr(data, labels, config.mrmr);
        out.selected = selected;
        out.mrmr_selected = std::move(selected);
        out.mrmr_trace = std::move(trace);
        break;
    }
    case SelectionMethod::Boruta: {
        detail::StageClock clock(out.stage_times, "boruta");
        auto [selected, ledger] = boruta_run(data, labels, config.boruta);
        out.selected = std::move(selected);
        out.boruta_ledger = std::move(ledger);
        out.boruta_columns = all_features(data.n());
        break;
    }
    case SelectionMethod::RfImportance: {
        detail::StageClock clock(out.stage_times, "rf-importance");
        const auto& params = config.boruta.forest;
        const ForestModel model = train_forest(data, labels, params);
        ImportanceVector importance = permutation_importance(
            model, data, labels, params.seed.child(detail::kImportanceStream), params.threads);
        out.selected = detail::top_k_by_z(importance, config.rf_top_k);
        out.rf_importance = std::move(importance);
        break;
    }
    case SelectionMethod::BoMGene: {
        FeatureSet screened;
        {
            detail::StageClock clock(out.stage_times, "mrmr");
            auto [selected, trace] = select_mrmr(data, labels, config.mrmr);
            screened = std::move(selected);
            out.mrmr_trace = std::move(trace);
        }
        if (screened.empty()) {
            throw runtime_error("bomgene: mRMR stage selected no features; nothing to refine");
        }
        out.mrmr_selected = screened;
        {
            detail::StageClock clock(out.stage_times, "boruta");
            const Dataset reduced = project(data, screened);
            auto [local, ledger] = boruta_run(reduced, labels, config.boruta);
            out.selected = local.empty() ? FeatureSet{} : map_indices(local, screened);
            out.boruta_ledger = std::move(ledger);
            out.boruta_columns = screened;
        }
        break;
    }
    }

    out.n_after_mrmr = out.mrmr_selected ? out.mrmr_selected->size() : out.n_input;
    out.n_final = out.selected.size();
    return out;
}

} // namespace bomgene
