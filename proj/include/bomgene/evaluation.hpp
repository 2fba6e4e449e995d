#pragma once

// Cross-validated evaluation of a feature subset: fold construction, the
// Random Forest and k-nearest-neighbour evaluators, and macro-averaged
// metrics from a summed confusion matrix.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/forest.hpp"
#include "bomgene/random.hpp"

namespace bomgene {

enum class CvKind { StratifiedKFold, LeaveOneOut };

struct CvScheme {
    CvKind kind = CvKind::LeaveOneOut;
    std::size_t folds = 10;
    /// K-fold only; leave-one-out is deterministic and runs once.
    std::size_t repeats = 1;
    RandomSource seed{};
};

inline std::string describe(const CvScheme& scheme) {
    return scheme.kind == CvKind::LeaveOneOut ? "loocv" : std::to_string(scheme.folds) + "-fold";
}

/// 10-fold stratified when m >= 300, leave-one-out otherwise.
inline CvScheme choose_cv_scheme(std::size_t m, RandomSource seed = {}) {
    if (m < 2) {
        throw validation_error("cross-validation needs at least 2 samples");
    }
    CvScheme scheme;
    scheme.kind = m >= 300 ? CvKind::StratifiedKFold : CvKind::LeaveOneOut;
    scheme.folds = 10;
    scheme.seed = seed;
    return scheme;
}

struct Fold {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Folds for one repetition. K-fold shuffles each class with a seeded stream
/// and deals its members round-robin, continuing where the previous class
/// stopped, so fold sizes and per-class counts each differ by at most one.
inline std::vector<Fold> make_folds(const Labels& labels, const CvScheme& scheme, std::size_t repeat = 0) {
    const std::size_t m = labels.size();
    std::vector<std::size_t> fold_of(m, 0);
    std::size_t folds = 0;
    if (scheme.kind == CvKind::LeaveOneOut) {
        folds = m;
        for (std::size_t i = 0; i < m; ++i) {
            fold_of[i] = i;
        }
    } else {
        folds = scheme.folds;
        if (folds < 2) {
            throw validation_error("k-fold needs k >= 2");
        }
        if (m < folds) {
            throw validation_error("k-fold: " + std::to_string(m) + " samples cannot fill " + std::to_string(folds) +
                                   " folds");
        }
        const RandomSource stream = scheme.seed.child(repeat);
        std::size_t next = 0;
        for (std::size_t c = 0; c < labels.k(); ++c) {
            std::vector<std::size_t> members;
            for (std::size_t i = 0; i < m; ++i) {
                if (static_cast<std::size_t>(labels.codes[i]) == c) {
                    members.push_back(i);
                }
            }
            Rng rng(stream.child(c));
            shuffle(std::span<std::size_t>(members), rng);
            for (std::size_t s : members) {
                fold_of[s] = next;
                next = (next + 1) % folds;
            }
        }
    }
    std::vector<Fold> out(folds);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t f = 0; f < folds; ++f) {
            (f == fold_of[i] ? out[f].test : out[f].train).push_back(i);
        }
    }
    return out;
}

struct KnnParams {
    std::size_t k = 5;
};

struct ClassifierSpec {
    std::variant<ForestParams, KnnParams> params;

    std::string name() const { return std::holds_alternative<ForestParams>(params) ? "random-forest" : "knn"; }
};

/// Euclidean k-nearest-neighbour vote. Equal distances go to the lower
/// training index; vote ties go to the lowest class code.
inline std::vector<int> knn_predict(const Dataset& train, const Labels& train_labels, const Dataset& test,
                                    const KnnParams& params) {
    if (params.k == 0) {
        throw validation_error("knn: k must be >= 1");
    }
    if (train.n() != test.n()) {
        throw validation_error("knn: feature-count mismatch");
    }
    const std::size_t k = std::min(params.k, train.m());
    std::vector<int> out(test.m());
    std::vector<std::pair<double, std::size_t>> dist(train.m());
    std::vector<std::size_t> votes(train_labels.k());
    for (std::size_t q = 0; q < test.m(); ++q) {
        for (std::size_t i = 0; i < train.m(); ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < train.n(); ++j) {
                const double diff = train(i, j) - test(q, j);
                d += diff * diff;
            }
            dist[i] = {d, i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
        std::fill(votes.begin(), votes.end(), 0);
        for (std::size_t r = 0; r < k; ++r) {
            ++votes[static_cast<std::size_t>(train_labels.codes[dist[r].second])];
        }
        out[q] = detail::majority(votes);
    }
    return out;
}

struct Metrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Square count matrix, rows = truth, columns = prediction.
using Confusion = std::vector<std::vector<std::size_t>>;

/// Accuracy plus macro precision/recall/F1 over classes present in truth.
/// A zero denominator contributes 0.
inline Metrics macro_metrics(const Confusion& confusion) {
    const std::size_t k = confusion.size();
    std::size_t total = 0;
    std::size_t trace = 0;
    for (std::size_t r = 0; r < k; ++r) {
        if (confusion[r].size() != k) {
            throw validation_error("macro_metrics: confusion matrix is not square");
        }
        for (std::size_t c = 0; c < k; ++c) {
            total += confusion[r][c];
        }
        trace += confusion[r][r];
    }
    if (total == 0) {
        throw validation_error("macro_metrics: confusion matrix is all zero");
    }
    Metrics out;
    out.accuracy = static_cast<double>(trace) / static_cast<double>(total);
    std::size_t present = 0;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t truth = 0;
        std::size_t predicted = 0;
        for (std::size_t o = 0; o < k; ++o) {
            truth += confusion[c][o];
            predicted += confusion[o][c];
        }
        if (truth == 0) {
            continue;
        }
        ++present;
        const double tp = static_cast<double>(confusion[c][c]);
        const double precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
        const double recall = tp / static_cast<double>(truth);
        out.precision += precision;
        out.recall += recall;
        out.f1 += precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
    }
    out.precision /= static_cast<double>(present);
    out.recall /= static_cast<double>(present);
    out.f1 /= static_cast<double>(present);
    return out;
}

struct EvalReport {
    std::string classifier;
    Metrics metrics;
    double train_time_seconds = 0.0;
    Confusion confusion;
    CvScheme scheme;
};

/// A fitted model's predictions for the test rows of one fold.
using FoldClassifier = std::function<std::vector<int>(const Dataset& train, const Labels& train_labels,
                                                      const Dataset& test, std::size_t fold_id)>;

inline FoldClassifier make_classifier(const ClassifierSpec& spec, double& train_seconds) {
    if (const auto* forest = std::get_if<ForestParams>(&spec.params)) {
        return [params = *forest, &train_seconds](const Dataset& train, const Labels& train_labels, const Dataset& test,
                                                  std::size_t fold_id) {
            ForestParams p = params;
            p.seed = params.seed.child(fold_id);
            const auto start = std::chrono::steady_clock::now();
            const ForestModel model = train_forest(train, train_labels, p);
            train_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return predict(model, test);
        };
    }
    // k-NN is lazy: fitting is storing the training fold, which costs nothing
    // measurable; its time is reported as 0.
    return [params = std::get<KnnParams>(spec.params)](const Dataset& train, const Labels& train_labels,
                                                       const Dataset& test, std::size_t) {
        return knn_predict(train, train_labels, test, params);
    };
}

/// Per-fold hook that chooses the feature subset from the training rows only.
using FoldSelector = std::function<FeatureSet(const Dataset& train, const Labels& train_labels)>;

namespace detail {

inline EvalReport evaluate_one(const Dataset& data, const Labels& labels, const FeatureSet* selection,
                               const FoldSelector* selector, const ClassifierSpec& spec, const CvScheme& scheme) {
    EvalReport report;
    report.classifier = spec.name();
    report.scheme = scheme;
    report.confusion.assign(labels.k(), std::vector<std::size_t>(labels.k(), 0));
    const FoldClassifier classify = make_classifier(spec, report.train_time_seconds);
    const std::size_t repeats = scheme.kind == CvKind::LeaveOneOut ? 1 : std::max<std::size_t>(scheme.repeats, 1);
    std::size_t fold_id = 0;
    for (std::size_t r = 0; r < repeats; ++r) {
        for (const Fold& fold : make_folds(labels, scheme, r)) {
            const Dataset train_rows = take_rows(data, fold.train);
            const Labels train_labels = take_rows(labels, fold.train);
            const FeatureSet features = selector ? (*selector)(train_rows, train_labels) : *selection;
            if (features.empty()) {
                throw runtime_error("fold " + std::to_string(fold_id) + ": selector returned no features");
            }
            const Dataset train = project(train_rows, features);
            const Dataset test = project(take_rows(data, fold.test), features);
            const auto predicted = classify(train, train_labels, test, fold_id);
            for (std::size_t i = 0; i < fold.test.size(); ++i) {
                const auto truth = static_cast<std::size_t>(labels.codes[fold.test[i]]);
                ++report.confusion[truth][static_cast<std::size_t>(predicted[i])];
            }
            ++fold_id;
        }
    }
    report.metrics = macro_metrics(report.confusion);
    return report;
}

} // namespace detail

/// Evaluates each classifier on `selection` under `scheme`. Selection is
/// fixed up front and shared by all folds.
inline std::vector<EvalReport> evaluate(const Dataset& data, const Labels& labels, const FeatureSet& selection,
                                        const std::vector<ClassifierSpec>& classifiers, const CvScheme& scheme) {
    if (selection.empty()) {
        throw validation_error("evaluate: empty feature selection");
    }
    check_feature_set(selection, data.n());
    std::vector<EvalReport> out;
    for (const auto& spec : classifiers) {
        out.push_back(detail::evaluate_one(data, labels, &selection, nullptr, spec, scheme));
    }
    return out;
}

/// Variant that re-runs `selector` on every training fold (selection inside
/// the cross-validation loop).
inline std::vector<EvalReport> evaluate_with_fold_selection(const Dataset& data, const Labels& labels,
                                                            const FoldSelector& selector,
                                                            const std::vector<ClassifierSpec>& classifiers,
                                                            const CvScheme& scheme) {
    std::vector<EvalReport> out;
    for (const auto& spec : classifiers) {
        out.push_back(detail::evaluate_one(data, labels, nullptr, &selector, spec, scheme));
    }
    return out;
}

} // namespace bomgene
