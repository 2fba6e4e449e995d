#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "bomgene/error.hpp"

namespace bomgene {

/// Ordered list of distinct feature indices into a parent Dataset.
struct FeatureSet {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    bool empty() const noexcept { return indices.empty(); }

    friend bool operator==(const FeatureSet&, const FeatureSet&) = default;
};

/// Class labels densely encoded 0..k-1.
struct Labels {
    std::vector<int> codes;
    std::vector<std::string> class_names;

    std::size_t size() const noexcept { return codes.size(); }
    std::size_t k() const noexcept { return class_names.size(); }

    /// Per-class sample counts.
    std::vector<std::size_t> class_counts() const {
        std::vector<std::size_t> counts(k(), 0);
        for (int c : codes) {
            ++counts[static_cast<std::size_t>(c)];
        }
        return counts;
    }

    friend bool operator==(const Labels&, const Labels&) = default;
};

/// m x n real matrix stored column-major so a feature is contiguous.
class Dataset {
public:
    Dataset() = default;

    /// Builds a dataset without checking invariants. Used for matrices derived
    /// from an already validated dataset (folds, shadow augmentation).
    static Dataset unchecked(std::size_t m, std::size_t n, std::vector<double> column_major,
                             std::vector<std::string> feature_names) {
        Dataset d;
        d.m_ = m;
        d.n_ = n;
        d.values_ = std::move(column_major);
        d.names_ = std::move(feature_names);
        return d;
    }

    std::size_t m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }

    std::span<const double> column(std::size_t j) const noexcept {
        return {values_.data() + j * m_, m_};
    }
    std::span<double> column(std::size_t j) noexcept {
        return {values_.data() + j * m_, m_};
    }

    double operator()(std::size_t row, std::size_t col) const noexcept { return values_[col * m_ + row]; }

    const std::vector<std::string>& feature_names() const noexcept { return names_; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const Dataset&, const Dataset&) = default;

private:
    std::size_t m_ = 0;
    std::size_t n_ = 0;
    std::vector<double> values_;
    std::vector<std::string> names_;
};

/// Encodes raw labels in first-appearance order.
inline Labels encode_labels(const std::vector<std::string>& raw) {
    Labels out;
    out.codes.reserve(raw.size());
    std::unordered_map<std::string, int> seen;
    for (const auto& label : raw) {
        auto [it, inserted] = seen.try_emplace(label, static_cast<int>(out.class_names.size()));
        if (inserted) {
            out.class_names.push_back(label);
        }
        out.codes.push_back(it->second);
    }
    return out;
}

/// Validates a row-major table and returns the column-major dataset together
/// with densely encoded labels.
inline std::pair<Dataset, Labels> validate_dataset(const std::vector<std::vector<double>>& rows,
                                                   std::vector<std::string> feature_names,
                                                   const std::vector<std::string>& raw_labels) {
    const std::size_t m = rows.size();
    const std::size_t n = feature_names.size();
    if (raw_labels.size() != m) {
        throw validation_error("dimension mismatch: " + std::to_string(m) + " rows but " +
                               std::to_string(raw_labels.size()) + " labels");
    }
    if (m < 2) {
        throw validation_error("dataset needs at least 2 samples, got " + std::to_string(m));
    }
    if (n < 1) {
        throw validation_error("dataset needs at least 1 feature");
    }
    std::unordered_set<std::string> names;
    for (const auto& name : feature_names) {
        if (!names.insert(name).second) {
            throw validation_error("duplicate feature name '" + name + "'");
        }
    }

    std::vector<double> values(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        if (rows[i].size() != n) {
            throw validation_error("dimension mismatch: row " + std::to_string(i) + " has " +
                                   std::to_string(rows[i].size()) + " values, expected " + std::to_string(n));
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double v = rows[i][j];
            if (!std::isfinite(v)) {
                throw validation_error("non-finite value at row " + std::to_string(i) + ", column " +
                                       std::to_string(j) + " ('" + feature_names[j] + "')");
            }
            values[j * m + i] = v;
        }
    }

    Labels labels = encode_labels(raw_labels);
    if (labels.k() < 2) {
        throw validation_error("fewer than 2 classes in labels");
    }
    return {Dataset::unchecked(m, n, std::move(values), std::move(feature_names)), std::move(labels)};
}

inline void check_feature_set(const FeatureSet& set, std::size_t n) {
    if (set.empty()) {
        throw validation_error("empty feature set");
    }
    std::vector<bool> seen(n, false);
    for (std::size_t idx : set.indices) {
        if (idx >= n) {
            throw validation_error("feature index " + std::to_string(idx) + " out of range (n=" +
                                   std::to_string(n) + ")");
        }
        if (seen[idx]) {
            throw validation_error("duplicate feature index " + std::to_string(idx));
        }
        seen[idx] = true;
    }
}

/// Columns of `dataset` listed in `features`, in that order.
inline Dataset project(const Dataset& dataset, const FeatureSet& features) {
    check_feature_set(features, dataset.n());
    const std::size_t m = dataset.m();
    std::vector<double> values;
    values.reserve(m * features.size());
    std::vector<std::string> names;
    names.reserve(features.size());
    for (std::size_t idx : features.indices) {
        auto col = dataset.column(idx);
        values.insert(values.end(), col.begin(), col.end());
        names.push_back(dataset.feature_names()[idx]);
    }
    return Dataset::unchecked(m, features.size(), std::move(values), std::move(names));
}

/// Rows of `dataset` listed in `rows`, in that order. All columns kept.
inline Dataset take_rows(const Dataset& dataset, std::span<const std::size_t> rows) {
    const std::size_t m = rows.size();
    std::vector<double> values(m * dataset.n());
    for (std::size_t j = 0; j < dataset.n(); ++j) {
        auto src = dataset.column(j);
        for (std::size_t i = 0; i < m; ++i) {
            values[j * m + i] = src[rows[i]];
        }
    }
    return Dataset::unchecked(m, dataset.n(), std::move(values), dataset.feature_names());
}

inline Labels take_rows(const Labels& labels, std::span<const std::size_t> rows) {
    Labels out;
    out.class_names = labels.class_names;
    out.codes.reserve(rows.size());
    for (std::size_t r : rows) {
        out.codes.push_back(labels.codes[r]);
    }
    return out;
}

/// Indices 0..n-1.
inline FeatureSet all_features(std::size_t n) {
    FeatureSet fs;
    fs.indices.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        fs.indices[j] = j;
    }
    return fs;
}

} // namespace bomgene
