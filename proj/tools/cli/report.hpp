#pragma once

// JSON serialization of run reports. Every effective parameter is written
// out, defaults included, so a run can be reproduced from its report and the
// input file.

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bomgene/bomgene.hpp"

namespace bomgene::cli {

using nlohmann::json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

inline json to_json(const RandomSource& source) {
    return {{"seed", source.seed}, {"stream_id", source.stream_id}};
}

inline json to_json(const IngestSummary& summary) {
    return {{"path", summary.path},          {"m", summary.m},
            {"n", summary.n},                {"k", summary.k},
            {"imputed", summary.imputed},    {"parse_seconds", summary.parse_seconds}};
}

inline json to_json(const IngestOptions& options) {
    json label = nullptr;
    if (options.label_column) {
        if (const auto* idx = std::get_if<std::size_t>(&*options.label_column)) {
            label = *idx;
        } else {
            label = std::get<std::string>(*options.label_column);
        }
    }
    return {{"delimiter", std::string(1, options.delimiter)},
            {"label_column", label.is_null() ? json("last") : label},
            {"orientation", options.orientation == Orientation::SamplesAsRows ? "samples-as-rows" : "features-as-rows"},
            {"missing", options.missing_policy == MissingPolicy::Error ? "error" : "mean-impute"},
            {"header", options.header},
            {"row_names", options.row_names}};
}

/// Forest parameters with defaults resolved against `n_features`.
inline json to_json(const ForestParams& params, std::size_t n_features) {
    return {{"n_trees", params.n_trees},
            {"max_depth", params.max_depth ? json(*params.max_depth) : json(nullptr)},
            {"min_samples_leaf", params.min_samples_leaf},
            {"mtry", params.mtry ? json(*params.mtry) : json("ceil(sqrt(n_columns))")},
            {"mtry_at_input_width", effective_mtry(params, n_features)},
            {"bootstrap", params.bootstrap},
            {"seed", to_json(params.seed)}};
}

inline json to_json(const PipelineConfig& config, std::size_t m, std::size_t n) {
    const auto& mr = config.mrmr;
    const auto& bo = config.boruta;
    return {
        {"method", to_string(config.method)},
        {"normalize", config.normalize == Normalization::None ? "none" : "zscore"},
        {"rf_top_k", config.rf_top_k},
        {"mrmr",
         {{"max_features", effective_max_features(mr, m, n)},
          {"relevance", mr.relevance == RelevanceMeasure::FTest ? "f-test" : "mutual-information"},
          {"redundancy", mr.redundancy == RedundancyMeasure::AbsPearson ? "abs-pearson" : "mutual-information"},
          {"min_score", mr.min_score ? json(*mr.min_score) : json(nullptr)},
          {"mi_bins", mr.mi_bins.value_or(default_bins(m))}}},
        {"boruta",
         {{"max_iterations", bo.max_iterations},
          {"alpha", bo.alpha},
          {"use_binomial_test", bo.use_binomial_test},
          {"bonferroni", bo.bonferroni},
          {"tentative_policy", bo.tentative_policy == TentativePolicy::Reject ? "reject" : "keep"},
          {"min_shadows", bo.min_shadows ? json(*bo.min_shadows) : json("n_input")},
          {"forest", to_json(bo.forest, n)}}},
    };
}

inline json to_json(const MrmrTrace& trace, const std::vector<std::string>& names) {
    json steps = json::array();
    for (const auto& s : trace.steps) {
        steps.push_back({{"feature", s.feature},
                         {"name", names[s.feature]},
                         {"relevance", s.relevance},
                         {"redundancy", s.redundancy},
                         {"score", s.score}});
    }
    return {{"steps", steps}, {"redundancy_evaluations", trace.redundancy_evaluations}};
}

/// `columns[j]` is the original index of ledger feature j.
inline json to_json(const BorutaLedger& ledger, const FeatureSet& columns, const std::vector<std::string>& names) {
    json features = json::array();
    for (std::size_t j = 0; j < ledger.status.size(); ++j) {
        const std::size_t original = columns.indices[j];
        features.push_back({{"feature", original},
                            {"name", names[original]},
                            {"status", to_string(ledger.status[j])},
                            {"hits", ledger.hits[j]},
                            {"trials", ledger.trials[j]},
                            {"decided_at", ledger.decided_at[j]}});
    }
    json iterations = json::array();
    for (const auto& it : ledger.history) {
        json z = json::object();
        for (std::size_t i = 0; i < it.pool.size(); ++i) {
            z[names[columns.indices[it.pool[i]]]] = it.z[i];
        }
        iterations.push_back({{"iteration", it.iteration},
                              {"undecided", it.pool.size()},
                              {"max_shadow_z", it.max_shadow_z},
                              {"z", z}});
    }
    return {{"iterations_run", ledger.iterations_run},
            {"confirmed", ledger.count(FeatureStatus::Confirmed)},
            {"rejected", ledger.count(FeatureStatus::Rejected)},
            {"tentative", ledger.count(FeatureStatus::Tentative)},
            {"features", features},
            {"iterations", iterations}};
}

inline json to_json(const SelectionOutcome& outcome, const std::vector<std::string>& names) {
    json selected = json::array();
    for (std::size_t j : outcome.selected.indices) {
        selected.push_back({{"index", j}, {"name", names[j]}});
    }
    json stage_times = json::object();
    for (const auto& st : outcome.stage_times) {
        stage_times[st.stage] = st.seconds;
    }
    json out = {{"method", to_string(outcome.method)},
                {"selected", selected},
                {"stage_sizes",
                 {{"n_input", outcome.n_input}, {"n_after_mrmr", outcome.n_after_mrmr}, {"n_final", outcome.n_final}}},
                {"stage_seconds", stage_times}};
    if (outcome.mrmr_trace) {
        out["mrmr_trace"] = to_json(*outcome.mrmr_trace, names);
    }
    if (outcome.boruta_ledger && outcome.boruta_columns) {
        out["boruta_ledger"] = to_json(*outcome.boruta_ledger, *outcome.boruta_columns, names);
    }
    if (outcome.rf_importance) {
        json z = json::array();
        for (std::size_t j = 0; j < outcome.rf_importance->z.size(); ++j) {
            z.push_back({{"name", names[j]},
                         {"z", outcome.rf_importance->z[j]},
                         {"mean", outcome.rf_importance->raw_mean[j]},
                         {"sd", outcome.rf_importance->raw_sd[j]}});
        }
        out["rf_importance"] = z;
    }
    return out;
}

inline json to_json(const CvScheme& scheme, bool overridden) {
    return {{"kind", scheme.kind == CvKind::LeaveOneOut ? "loocv" : "stratified-k-fold"},
            {"folds", scheme.kind == CvKind::LeaveOneOut ? json("m") : json(scheme.folds)},
            {"repeats", scheme.kind == CvKind::LeaveOneOut ? std::size_t{1} : scheme.repeats},
            {"seed", to_json(scheme.seed)},
            {"source", overridden ? "override" : "default-rule(m>=300 -> 10-fold, else loocv)"}};
}

inline json to_json(const ClassifierSpec& spec, std::size_t n_features) {
    if (const auto* forest = std::get_if<ForestParams>(&spec.params)) {
        return {{"kind", "random-forest"}, {"params", to_json(*forest, n_features)}};
    }
    return {{"kind", "knn"}, {"params", {{"k", std::get<KnnParams>(spec.params).k}, {"metric", "euclidean"}}}};
}

inline json to_json(const EvalReport& report) {
    return {{"classifier", report.classifier},
            {"accuracy", report.metrics.accuracy},
            {"precision_macro", report.metrics.precision},
            {"recall_macro", report.metrics.recall},
            {"f1_macro", report.metrics.f1},
            {"train_seconds", report.train_time_seconds},
            {"confusion", report.confusion},
            {"scheme", describe(report.scheme)}};
}

} // namespace bomgene::cli
