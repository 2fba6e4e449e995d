#pragma once

// Subcommands: select, evaluate, benchmark, synth.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or validation error.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bomgene/bomgene.hpp"
#include "cli/report.hpp"
#include "cli/synthetic.hpp"

namespace bomgene::cli {

// Child streams of the --seed root.
inline constexpr std::uint64_t kSelectionStream = 1;
inline constexpr std::uint64_t kCvStream = 2;
inline constexpr std::uint64_t kEvalStream = 3;

struct CommonOptions {
    std::string input;
    std::string out;
    std::uint64_t seed = 0;
    std::optional<std::size_t> threads;
    std::string label_column;
    std::string orientation = "samples";
    std::string missing = "error";
    std::string delimiter = ",";
    bool no_header = false;
    bool row_names = false;
};

struct SelectorOptions {
    std::string method = "bomgene";
    std::optional<std::size_t> max_features;
    std::string relevance = "f-test";
    std::string redundancy = "abs-pearson";
    std::optional<double> min_score;
    std::optional<std::size_t> mi_bins;
    std::size_t iterations = 100;
    double alpha = 0.05;
    bool strict = false;
    bool bonferroni = false;
    std::string tentative = "reject";
    std::optional<std::size_t> min_shadows;
    std::size_t trees = 200;
    std::optional<std::size_t> max_depth;
    std::size_t min_leaf = 1;
    std::optional<std::size_t> mtry;
    std::size_t rf_top_k = 100;
    std::string normalize = "none";
};

struct EvalOptions {
    std::string classifiers = "rf,knn";
    std::string cv = "auto";
    std::size_t folds = 10;
    std::size_t repeat = 1;
    std::size_t eval_trees = 200;
    std::size_t knn_k = 5;
};

inline Error usage(const std::string& what) {
    return Error(ErrorKind::Usage, what);
}

inline std::size_t resolve_threads(const std::optional<std::size_t>& flag) {
    if (flag) {
        return std::max<std::size_t>(*flag, 1);
    }
    if (const char* env = std::getenv("BOMGENE_THREADS")) {
        try {
            return std::max<std::size_t>(std::stoul(env), 1);
        } catch (const std::exception&) {
            throw usage(std::string("BOMGENE_THREADS must be a positive integer, got '") + env + "'");
        }
    }
    return 1;
}

inline void add_common(CLI::App& app, CommonOptions& o, bool needs_input) {
    auto* input = app.add_option("--input", o.input, "Delimited table (samples as rows by default)");
    if (needs_input) {
        input->required();
    }
    app.add_option("--out", o.out, "Output path")->required();
    app.add_option("--seed", o.seed, "Root random seed");
    app.add_option("--threads", o.threads, "Worker cap (falls back to BOMGENE_THREADS, then 1)")
        ->check(CLI::PositiveNumber);
    app.add_option("--label-column", o.label_column, "Label column name or zero-based index (default: last)");
    app.add_option("--orientation", o.orientation, "samples | features (rows are features)")
        ->check(CLI::IsMember({"samples", "features"}));
    app.add_option("--missing", o.missing, "error | mean-impute")->check(CLI::IsMember({"error", "mean-impute"}));
    app.add_option("--delimiter", o.delimiter, "Field delimiter (single character, 'tab' for TSV)");
    app.add_flag("--no-header", o.no_header, "Input has no header row");
    app.add_flag("--row-names", o.row_names, "First column holds sample identifiers");
}

inline void add_selector(CLI::App& app, SelectorOptions& o) {
    app.add_option("--method", o.method, "bomgene | mrmr | boruta | rf-importance")
        ->check(CLI::IsMember({"bomgene", "mrmr", "boruta", "rf-importance"}));
    app.add_option("--max-features", o.max_features, "mRMR stage size (default min(n, m, 500))")
        ->check(CLI::PositiveNumber);
    app.add_option("--relevance", o.relevance, "f-test | mi")->check(CLI::IsMember({"f-test", "mi"}));
    app.add_option("--redundancy", o.redundancy, "abs-pearson | mi")->check(CLI::IsMember({"abs-pearson", "mi"}));
    app.add_option("--min-score", o.min_score, "Stop mRMR when the best score drops below this");
    app.add_option("--mi-bins", o.mi_bins, "Equal-width bins for MI (default ceil(sqrt(m)))")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    app.add_option("--iterations", o.iterations, "Boruta iterations")->check(CLI::PositiveNumber);
    app.add_option("--alpha", o.alpha, "Boruta significance level")->check(CLI::Range(1e-12, 1.0 - 1e-12));
    app.add_flag("--strict", o.strict, "Decide from a single iteration's comparison instead of the binomial test");
    app.add_flag("--bonferroni", o.bonferroni, "Divide alpha by the number of undecided features");
    app.add_option("--tentative", o.tentative, "reject | keep")->check(CLI::IsMember({"reject", "keep"}));
    app.add_option("--min-shadows", o.min_shadows, "Shadow columns per Boruta iteration (default: input width)")
        ->check(CLI::PositiveNumber);
    app.add_option("--trees", o.trees, "Trees in the Boruta / rf-importance forest")->check(CLI::PositiveNumber);
    app.add_option("--max-depth", o.max_depth, "Tree depth limit")->check(CLI::PositiveNumber);
    app.add_option("--min-leaf", o.min_leaf, "Minimum samples per leaf")->check(CLI::PositiveNumber);
    app.add_option("--mtry", o.mtry, "Features tried per split (default ceil(sqrt(columns)))")
        ->check(CLI::PositiveNumber);
    app.add_option("--rf-top-k", o.rf_top_k, "Features kept by the rf-importance baseline")->check(CLI::PositiveNumber);
    app.add_option("--normalize", o.normalize, "none | zscore")->check(CLI::IsMember({"none", "zscore"}));
}

inline void add_eval(CLI::App& app, EvalOptions& o) {
    app.add_option("--classifiers", o.classifiers, "Comma list of rf, knn");
    app.add_option("--cv", o.cv, "auto | 10fold | kfold | loocv")
        ->check(CLI::IsMember({"auto", "10fold", "kfold", "loocv"}));
    app.add_option("--folds", o.folds, "Folds for --cv kfold")->check(CLI::Range(std::size_t{2}, std::size_t{1000}));
    app.add_option("--repeat", o.repeat, "Repetitions of k-fold CV")->check(CLI::PositiveNumber);
    app.add_option("--eval-trees", o.eval_trees, "Trees in the evaluation forest")->check(CLI::PositiveNumber);
    app.add_option("--knn-k", o.knn_k, "Neighbours for k-NN")->check(CLI::PositiveNumber);
}

inline IngestOptions ingest_options(const CommonOptions& o) {
    IngestOptions opts;
    if (o.delimiter == "tab" || o.delimiter == "\\t") {
        opts.delimiter = '\t';
    } else if (o.delimiter.size() == 1) {
        opts.delimiter = o.delimiter[0];
    } else {
        throw usage("--delimiter must be a single character");
    }
    if (!o.label_column.empty()) {
        const bool numeric = std::all_of(o.label_column.begin(), o.label_column.end(),
                                         [](unsigned char c) { return std::isdigit(c) != 0; });
        if (numeric) {
            opts.label_column = static_cast<std::size_t>(std::stoul(o.label_column));
        } else {
            opts.label_column = o.label_column;
        }
    }
    opts.orientation = o.orientation == "features" ? Orientation::FeaturesAsRows : Orientation::SamplesAsRows;
    opts.missing_policy = o.missing == "mean-impute" ? MissingPolicy::MeanImpute : MissingPolicy::Error;
    opts.header = !o.no_header;
    opts.row_names = o.row_names;
    return opts;
}

inline PipelineConfig pipeline_config(const SelectorOptions& o, RandomSource root, std::size_t threads) {
    PipelineConfig config;
    config.method = *parse_method(o.method);
    config.mrmr.max_features = o.max_features;
    config.mrmr.relevance = o.relevance == "mi" ? RelevanceMeasure::MutualInformation : RelevanceMeasure::FTest;
    config.mrmr.redundancy =
        o.redundancy == "mi" ? RedundancyMeasure::MutualInformation : RedundancyMeasure::AbsPearson;
    config.mrmr.min_score = o.min_score;
    config.mrmr.mi_bins = o.mi_bins;
    config.boruta.max_iterations = o.iterations;
    config.boruta.alpha = o.alpha;
    config.boruta.use_binomial_test = !o.strict;
    config.boruta.bonferroni = o.bonferroni;
    config.boruta.tentative_policy = o.tentative == "keep" ? TentativePolicy::Keep : TentativePolicy::Reject;
    config.boruta.min_shadows = o.min_shadows;
    config.boruta.forest.n_trees = o.trees;
    config.boruta.forest.max_depth = o.max_depth;
    config.boruta.forest.min_samples_leaf = o.min_leaf;
    config.boruta.forest.mtry = o.mtry;
    config.boruta.forest.seed = root.child(kSelectionStream);
    config.boruta.forest.threads = threads;
    config.rf_top_k = o.rf_top_k;
    config.normalize = o.normalize == "zscore" ? Normalization::ZScore : Normalization::None;
    return config;
}

inline std::vector<ClassifierSpec> classifier_specs(const EvalOptions& o, RandomSource root, std::size_t threads) {
    std::vector<ClassifierSpec> specs;
    std::stringstream list(o.classifiers);
    std::string item;
    while (std::getline(list, item, ',')) {
        if (item == "rf" || item == "random-forest") {
            ForestParams params;
            params.n_trees = o.eval_trees;
            params.seed = root.child(kEvalStream);
            params.threads = threads;
            specs.push_back({params});
        } else if (item == "knn") {
            specs.push_back({KnnParams{o.knn_k}});
        } else if (!item.empty()) {
            throw usage("unknown classifier '" + item + "' (expected rf or knn)");
        }
    }
    if (specs.empty()) {
        throw usage("--classifiers selected nothing");
    }
    return specs;
}

/// Scheme from --cv; the second member says whether the size rule was overridden.
inline std::pair<CvScheme, bool> cv_scheme(const EvalOptions& o, std::size_t m, RandomSource root) {
    CvScheme scheme = choose_cv_scheme(m, root.child(kCvStream));
    bool overridden = false;
    if (o.cv == "loocv") {
        overridden = scheme.kind != CvKind::LeaveOneOut;
        scheme.kind = CvKind::LeaveOneOut;
    } else if (o.cv == "10fold" || o.cv == "kfold") {
        const std::size_t folds = o.cv == "10fold" ? 10 : o.folds;
        overridden = scheme.kind != CvKind::StratifiedKFold || folds != 10;
        scheme.kind = CvKind::StratifiedKFold;
        scheme.folds = folds;
    }
    scheme.repeats = o.repeat;
    return {scheme, overridden || o.repeat != 1};
}

inline void write_json(const std::string& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw runtime_error("cannot write '" + path + "'");
    }
    out << doc.dump(2) << '\n';
}

inline std::string sibling_path(const std::string& path, const std::string& suffix) {
    std::filesystem::path p(path);
    p.replace_extension();
    return p.string() + suffix;
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

inline json base_report(const CommonOptions& common, std::size_t threads) {
    return {{"version", {{"tool", kToolVersion}, {"schema", kReportSchema}}},
            {"seed", common.seed},
            {"config", {{"threads", threads}}}};
}

inline int cmd_select(const CommonOptions& common, const SelectorOptions& sel, const std::string& features_out) {
    const auto started = std::chrono::steady_clock::now();
    const std::size_t threads = resolve_threads(common.threads);
    const IngestOptions ingest = ingest_options(common);
    auto [data, labels, summary] = load_table(common.input, ingest);
    const RandomSource root{common.seed, 0};
    const PipelineConfig config = pipeline_config(sel, root, threads);
    const SelectionOutcome outcome = run_selection(data, labels, config);

    json report = base_report(common, threads);
    report["config"]["ingest"] = to_json(ingest);
    report["config"]["pipeline"] = to_json(config, data.m(), data.n());
    report["ingest"] = to_json(summary);
    report["selection"] = to_json(outcome, data.feature_names());
    report["evaluation"] = nullptr;
    report["timing"] = {{"total_wall_seconds", seconds_since(started)},
                        {"selection_seconds", outcome.total_seconds()},
                        {"parse_seconds", summary.parse_seconds}};
    write_json(common.out, report);

    const std::string list_path = features_out.empty() ? sibling_path(common.out, ".features.txt") : features_out;
    std::ofstream list(list_path, std::ios::binary);
    if (!list) {
        throw runtime_error("cannot write '" + list_path + "'");
    }
    for (std::size_t j : outcome.selected.indices) {
        list << data.feature_names()[j] << '\n';
    }
    std::cerr << "selected " << outcome.selected.size() << " of " << data.n() << " features (" << to_string(config.method)
              << ")\n";
    return 0;
}

inline FeatureSet read_feature_list(const std::string& path, const Dataset& data) {
    std::ifstream in(path);
    if (!in) {
        throw runtime_error("cannot open features file '" + path + "'");
    }
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t j = 0; j < data.n(); ++j) {
        index.emplace(data.feature_names()[j], j);
    }
    FeatureSet out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto it = index.find(line);
        if (it == index.end()) {
            throw validation_error("features file '" + path + "': unknown feature '" + line + "'");
        }
        out.indices.push_back(it->second);
    }
    check_feature_set(out, data.n());
    return out;
}

inline int cmd_evaluate(const CommonOptions& common, const SelectorOptions& sel, bool method_given,
                        const EvalOptions& ev, const std::string& features_path, bool select_in_folds) {
    const auto started = std::chrono::steady_clock::now();
    if (features_path.empty() == !method_given) {
        throw usage("evaluate needs exactly one of --features or --method");
    }
    if (select_in_folds && !method_given) {
        throw usage("--select-in-folds requires --method");
    }
    const std::size_t threads = resolve_threads(common.threads);
    const IngestOptions ingest = ingest_options(common);
    auto [data, labels, summary] = load_table(common.input, ingest);
    const RandomSource root{common.seed, 0};
    const auto classifiers = classifier_specs(ev, root, threads);
    const auto [scheme, overridden] = cv_scheme(ev, data.m(), root);

    json report = base_report(common, threads);
    report["config"]["ingest"] = to_json(ingest);
    report["config"]["cv"] = to_json(scheme, overridden);
    json specs = json::array();
    for (const auto& spec : classifiers) {
        specs.push_back(to_json(spec, data.n()));
    }
    report["config"]["classifiers"] = specs;
    report["ingest"] = to_json(summary);

    std::vector<EvalReport> results;
    double selection_seconds = 0.0;
    if (method_given) {
        const PipelineConfig config = pipeline_config(sel, root, threads);
        report["config"]["pipeline"] = to_json(config, data.m(), data.n());
        if (select_in_folds) {
            report["config"]["selection_protocol"] = "inside-cv-folds (deviation from select-once protocol)";
            const FoldSelector selector = [&](const Dataset& train, const Labels& train_labels) {
                return run_selection(train, train_labels, config).selected;
            };
            results = evaluate_with_fold_selection(data, labels, selector, classifiers, scheme);
            report["selection"] = nullptr;
        } else {
            report["config"]["selection_protocol"] = "select-once-on-full-data";
            const SelectionOutcome outcome = run_selection(data, labels, config);
            selection_seconds = outcome.total_seconds();
            report["selection"] = to_json(outcome, data.feature_names());
            if (outcome.selected.empty()) {
                throw runtime_error("selection returned no features; nothing to evaluate");
            }
            results = evaluate(data, labels, outcome.selected, classifiers, scheme);
        }
    } else {
        const FeatureSet features = read_feature_list(features_path, data);
        report["config"]["features_file"] = features_path;
        json selected = json::array();
        for (std::size_t j : features.indices) {
            selected.push_back({{"index", j}, {"name", data.feature_names()[j]}});
        }
        report["selection"] = {{"method", "features-file"}, {"selected", selected}};
        results = evaluate(data, labels, features, classifiers, scheme);
    }

    json evaluation = json::array();
    for (const auto& r : results) {
        evaluation.push_back(to_json(r));
    }
    report["evaluation"] = evaluation;
    report["timing"] = {{"total_wall_seconds", seconds_since(started)},
                        {"selection_seconds", selection_seconds},
                        {"parse_seconds", summary.parse_seconds}};
    write_json(common.out, report);
    for (const auto& r : results) {
        std::cerr << r.classifier << ": accuracy " << r.metrics.accuracy << ", macro F1 " << r.metrics.f1 << '\n';
    }
    return 0;
}

struct BenchmarkRow {
    std::string dataset;
    std::string method;
    std::string classifier;
    std::size_t n_selected = 0;
    std::optional<Metrics> metrics;
    double select_seconds = 0.0;
    double train_seconds = 0.0;
};

inline std::string csv_field(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) {
        return text;
    }
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') {
            out.push_back('"');
        }
        out.push_back(c);
    }
    return out + "\"";
}

inline void write_benchmark_csv(const std::string& path, std::vector<BenchmarkRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const BenchmarkRow& a, const BenchmarkRow& b) {
        return std::tie(a.dataset, a.method, a.classifier) < std::tie(b.dataset, b.method, b.classifier);
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw runtime_error("cannot write '" + path + "'");
    }
    out << "dataset,method,classifier,n_selected,accuracy,precision,recall,f1,select_seconds,train_seconds\n";
    for (const auto& r : rows) {
        out << csv_field(r.dataset) << ',' << r.method << ',' << r.classifier << ',' << r.n_selected << ',';
        if (r.metrics) {
            out << r.metrics->accuracy << ',' << r.metrics->precision << ',' << r.metrics->recall << ','
                << r.metrics->f1;
        } else {
            out << ",,,";
        }
        out << ',' << r.select_seconds << ',' << r.train_seconds << '\n';
    }
}

inline int cmd_benchmark(const CommonOptions& common, const std::vector<std::string>& inputs,
                         const std::vector<std::string>& synthetic, const SelectorOptions& sel, const EvalOptions& ev,
                         const std::string& csv_out) {
    const auto started = std::chrono::steady_clock::now();
    if (inputs.empty() && synthetic.empty()) {
        throw usage("benchmark needs at least one --input or --synthetic dataset");
    }
    const std::size_t threads = resolve_threads(common.threads);
    const IngestOptions ingest = ingest_options(common);
    const RandomSource root{common.seed, 0};
    const auto classifiers = classifier_specs(ev, root, threads);

    json report = base_report(common, threads);
    report["config"]["ingest"] = to_json(ingest);
    json specs = json::array();
    for (const auto& spec : classifiers) {
        specs.push_back(to_json(spec, 0));
    }
    report["config"]["classifiers"] = specs;
    report["config"]["selection_protocol"] = "select-once-on-full-data";

    const std::vector<SelectionMethod> methods{SelectionMethod::BoMGene, SelectionMethod::Mrmr, SelectionMethod::Boruta,
                                               SelectionMethod::RfImportance};
    std::vector<BenchmarkRow> rows;
    json datasets = json::array();
    std::size_t successes = 0;

    struct Source {
        std::string name;
        std::optional<std::string> path;
        std::optional<PlantedSpec> planted;
    };
    std::vector<Source> sources;
    for (const auto& path : inputs) {
        sources.push_back({std::filesystem::path(path).stem().string(), path, std::nullopt});
    }
    for (const auto& text : synthetic) {
        PlantedSpec spec = parse_planted_spec(text);
        sources.push_back({spec.to_string(), std::nullopt, spec});
    }

    for (const auto& source : sources) {
        json entry = {{"name", source.name}};
        std::optional<std::pair<Dataset, Labels>> loaded;
        try {
            if (source.path) {
                auto [data, labels, summary] = load_table(*source.path, ingest);
                entry["ingest"] = to_json(summary);
                loaded.emplace(std::move(data), std::move(labels));
            } else {
                const PlantedData planted = generate_planted(*source.planted);
                const auto& s = *source.planted;
                entry["generator"] = {{"spec", s.to_string()}, {"m", s.m},       {"n", s.n},
                                      {"k", s.k},              {"informative", s.informative},
                                      {"shift", s.shift},      {"seed", s.seed}};
                json cols = json::array();
                for (std::size_t j : planted.informative_columns) {
                    cols.push_back(planted.feature_names[j]);
                }
                entry["generator"]["informative_features"] = cols;
                loaded.emplace(to_dataset(planted));
            }
        } catch (const std::exception& e) {
            entry["error"] = e.what();
            datasets.push_back(entry);
            continue;
        }
        const auto& [data, labels] = *loaded;
        const auto [scheme, overridden] = cv_scheme(ev, data.m(), root);
        entry["cv"] = to_json(scheme, overridden);

        json cells = json::array();
        for (SelectionMethod method : methods) {
            SelectorOptions opts = sel;
            opts.method = to_string(method);
            const PipelineConfig config = pipeline_config(opts, root, threads);
            json cell = {{"method", to_string(method)}, {"config", to_json(config, data.m(), data.n())}};
            try {
                const SelectionOutcome outcome = run_selection(data, labels, config);
                cell["selection"] = to_json(outcome, data.feature_names());
                if (outcome.selected.empty()) {
                    cell["error"] = "no features selected";
                    for (const auto& spec : classifiers) {
                        rows.push_back({source.name, to_string(method), spec.name(), 0, std::nullopt,
                                        outcome.total_seconds(), 0.0});
                    }
                } else {
                    const auto results = evaluate(data, labels, outcome.selected, classifiers, scheme);
                    json evaluation = json::array();
                    for (const auto& r : results) {
                        evaluation.push_back(to_json(r));
                        rows.push_back({source.name, to_string(method), r.classifier, outcome.selected.size(),
                                        r.metrics, outcome.total_seconds(), r.train_time_seconds});
                        ++successes;
                    }
                    cell["evaluation"] = evaluation;
                }
            } catch (const std::exception& e) {
                cell["error"] = e.what();
            }
            cells.push_back(cell);
        }
        entry["cells"] = cells;
        datasets.push_back(entry);
    }

    report["datasets"] = datasets;
    report["timing"] = {{"total_wall_seconds", seconds_since(started)}};
    write_json(common.out, report);
    write_benchmark_csv(csv_out.empty() ? sibling_path(common.out, ".csv") : csv_out, rows);
    return successes > 0 ? 0 : 1;
}

inline int cmd_synth(const std::string& spec_text, const std::optional<std::uint64_t>& seed, const std::string& out) {
    PlantedSpec spec = parse_planted_spec(spec_text);
    if (seed) {
        spec.seed = *seed;
    }
    const PlantedData data = generate_planted(spec);
    std::ofstream file(out, std::ios::binary);
    if (!file) {
        throw runtime_error("cannot write '" + out + "'");
    }
    write_planted_csv(data, file);
    return 0;
}

/// Parses `args` (args[0] is the program name) and runs the chosen subcommand.
inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"bomgene: mRMR + Boruta hybrid feature selection for expression data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    CommonOptions select_common;
    SelectorOptions select_sel;
    std::string features_out;
    auto* select = app.add_subcommand("select", "Run one selector and write a report plus a feature list");
    add_common(*select, select_common, true);
    add_selector(*select, select_sel);
    select->add_option("--features-out", features_out, "Selected-feature list (default: <out>.features.txt)");

    CommonOptions eval_common;
    SelectorOptions eval_sel;
    EvalOptions eval_opts;
    std::string features_path;
    bool select_in_folds = false;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Cross-validate classifiers on a feature subset");
    add_common(*evaluate_cmd, eval_common, true);
    add_selector(*evaluate_cmd, eval_sel);
    add_eval(*evaluate_cmd, eval_opts);
    evaluate_cmd->add_option("--features", features_path, "File with one feature name per line");
    evaluate_cmd->add_flag("--select-in-folds", select_in_folds, "Re-run selection on every training fold");

    CommonOptions bench_common;
    SelectorOptions bench_sel;
    EvalOptions bench_eval;
    std::vector<std::string> bench_inputs;
    std::vector<std::string> bench_synthetic;
    std::string csv_out;
    auto* benchmark = app.add_subcommand("benchmark", "All four selectors x classifiers per dataset");
    add_common(*benchmark, bench_common, false);
    benchmark->remove_option(benchmark->get_option("--input"));
    benchmark->add_option("--input", bench_inputs, "Input tables (repeatable)");
    benchmark->add_option("--synthetic", bench_synthetic, "Planted dataset spec (repeatable)");
    add_selector(*benchmark, bench_sel);
    benchmark->remove_option(benchmark->get_option("--method"));
    add_eval(*benchmark, bench_eval);
    benchmark->add_option("--csv", csv_out, "CSV summary (default: <out>.csv)");

    std::string synth_spec;
    std::optional<std::uint64_t> synth_seed;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a planted-signal CSV dataset");
    synth->add_option("--spec", synth_spec, "planted:m=..,n=..,k=..,informative=..,shift=..,seed=..")->required();
    synth->add_option("--seed", synth_seed, "Override the spec's seed");
    synth->add_option("--out", synth_out, "Output CSV")->required();

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*select) {
            return cmd_select(select_common, select_sel, features_out);
        }
        if (*evaluate_cmd) {
            const bool method_given = evaluate_cmd->get_option("--method")->count() > 0;
            return cmd_evaluate(eval_common, eval_sel, method_given, eval_opts, features_path, select_in_folds);
        }
        if (*benchmark) {
            return cmd_benchmark(bench_common, bench_inputs, bench_synthetic, bench_sel, bench_eval, csv_out);
        }
        if (*synth) {
            return cmd_synth(synth_spec, synth_seed, synth_out);
        }
    } catch (const Error& e) {
        std::cerr << "bomgene: error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Runtime ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "bomgene: error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

} // namespace bomgene::cli
