#pragma once

// Scalar scoring kernels: one-way ANOVA F, Pearson correlation, plug-in
// mutual information over equal-width bins, and seeded column permutation.
//
// Constant inputs score 0 under every measure.

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstddef>
#include <span>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/random.hpp"

namespace bomgene {

enum class RelevanceMeasure { FTest, MutualInformation };
enum class RedundancyMeasure { AbsPearson, MutualInformation };

/// Returned by f_statistic when groups are perfectly separated (SSW = 0, SSB > 0).
inline constexpr double kFStatisticCap = 1e12;

inline bool is_constant(std::span<const double> values) noexcept {
    return std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end();
}

inline double f_statistic(std::span<const double> column, const Labels& labels) {
    const std::size_t m = column.size();
    const std::size_t k = labels.k();
    if (labels.size() != m) {
        throw validation_error("f_statistic: column length " + std::to_string(m) + " != label count " +
                               std::to_string(labels.size()));
    }
    if (m <= k) {
        throw validation_error("f_statistic: need more samples than classes (m=" + std::to_string(m) +
                               ", k=" + std::to_string(k) + ")");
    }
    if (is_constant(column)) {
        return 0.0;
    }

    std::vector<double> group_sum(k, 0.0);
    std::vector<std::size_t> group_n(k, 0);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const auto c = static_cast<std::size_t>(labels.codes[i]);
        group_sum[c] += column[i];
        ++group_n[c];
        total += column[i];
    }
    const double grand_mean = total / static_cast<double>(m);

    std::vector<double> group_mean(k, 0.0);
    std::size_t groups = 0;
    double ssb = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (group_n[c] == 0) {
            continue;
        }
        ++groups;
        group_mean[c] = group_sum[c] / static_cast<double>(group_n[c]);
        const double d = group_mean[c] - grand_mean;
        ssb += static_cast<double>(group_n[c]) * d * d;
    }
    double ssw = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = column[i] - group_mean[static_cast<std::size_t>(labels.codes[i])];
        ssw += d * d;
    }

    if (groups < 2 || ssb == 0.0) {
        return 0.0;
    }
    if (ssw == 0.0) {
        return kFStatisticCap;
    }
    const double df_between = static_cast<double>(groups - 1);
    const double df_within = static_cast<double>(m - groups);
    return std::min((ssb / df_between) / (ssw / df_within), kFStatisticCap);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw validation_error("pearson: length mismatch (" + std::to_string(a.size()) + " vs " +
                               std::to_string(b.size()) + ")");
    }
    const std::size_t m = a.size();
    if (m < 2 || is_constant(a) || is_constant(b)) {
        return 0.0;
    }
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        mean_a += a[i];
        mean_b += b[i];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        return 0.0;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// ceil(sqrt(m)), at least 2.
inline std::size_t default_bins(std::size_t m) noexcept {
    auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m))));
    return std::max<std::size_t>(bins, 2);
}

/// Equal-width bin index per value; a constant input maps to bin 0.
inline std::vector<int> equal_width_bins(std::span<const double> values, std::size_t bins) {
    std::vector<int> out(values.size(), 0);
    if (values.empty()) {
        return out;
    }
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double width = *hi_it - lo;
    if (width <= 0.0) {
        return out;
    }
    const auto last = static_cast<int>(bins) - 1;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double scaled = (values[i] - lo) / width * static_cast<double>(bins);
        out[i] = std::min(static_cast<int>(scaled), last);
    }
    return out;
}

/// Plug-in MI (nats) between two discrete codings with `ka` and `kb` levels.
inline double discrete_mutual_information(std::span<const int> a, std::size_t ka, std::span<const int> b,
                                          std::size_t kb) {
    const std::size_t m = a.size();
    if (m == 0) {
        return 0.0;
    }
    std::vector<double> joint(ka * kb, 0.0);
    std::vector<double> pa(ka, 0.0);
    std::vector<double> pb(kb, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const auto x = static_cast<std::size_t>(a[i]);
        const auto y = static_cast<std::size_t>(b[i]);
        joint[x * kb + y] += 1.0;
        pa[x] += 1.0;
        pb[y] += 1.0;
    }
    const double total = static_cast<double>(m);
    double mi = 0.0;
    for (std::size_t x = 0; x < ka; ++x) {
        for (std::size_t y = 0; y < kb; ++y) {
            const double nxy = joint[x * kb + y];
            if (nxy > 0.0) {
                mi += (nxy / total) * std::log(nxy * total / (pa[x] * pb[y]));
            }
        }
    }
    return std::max(mi, 0.0);
}

/// MI between two continuous columns, each binned into `bins` equal-width bins.
inline double mutual_information(std::span<const double> a, std::span<const double> b, std::size_t bins) {
    if (bins < 2) {
        throw validation_error("mutual_information: bins must be >= 2");
    }
    if (a.size() != b.size()) {
        throw validation_error("mutual_information: length mismatch");
    }
    const auto ca = equal_width_bins(a, bins);
    const auto cb = equal_width_bins(b, bins);
    return discrete_mutual_information(ca, bins, cb, bins);
}

/// MI between a binned continuous column and class labels used as-is.
inline double mutual_information(std::span<const double> a, const Labels& labels, std::size_t bins) {
    if (bins < 2) {
        throw validation_error("mutual_information: bins must be >= 2");
    }
    if (a.size() != labels.size()) {
        throw validation_error("mutual_information: length mismatch");
    }
    const auto ca = equal_width_bins(a, bins);
    return discrete_mutual_information(ca, bins, labels.codes, labels.k());
}

/// Uniformly random reordering of `column`, fully determined by `source`.
inline std::vector<double> permute_column(std::span<const double> column, RandomSource source) {
    std::vector<double> out(column.begin(), column.end());
    Rng rng(source);
    shuffle(std::span<double>(out), rng);
    return out;
}

} // namespace bomgene
