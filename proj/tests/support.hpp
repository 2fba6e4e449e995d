#pragma once

// Shared helpers for the test suite: small random datasets and a brute-force
// mRMR reference that recomputes every redundancy term from scratch.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bomgene/bomgene.hpp"

namespace testing_support {

using namespace bomgene;

/// Gaussian m x n dataset with k classes dealt in order (sample i -> i % k).
/// Columns listed in `copies` as {dst, src} duplicate another column.
inline std::pair<Dataset, Labels> random_dataset(std::size_t m, std::size_t n, std::size_t k, std::uint64_t seed,
                                                 std::vector<std::pair<std::size_t, std::size_t>> copies = {}) {
    Rng rng(RandomSource{seed, 99});
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (auto& row : rows) {
        for (auto& v : row) {
            v = rng.normal();
        }
    }
    for (auto [dst, src] : copies) {
        for (auto& row : rows) {
            row[dst] = row[src];
        }
    }
    std::vector<std::string> names(n);
    for (std::size_t j = 0; j < n; ++j) {
        names[j] = "f" + std::to_string(j);
    }
    std::vector<std::string> raw(m);
    for (std::size_t i = 0; i < m; ++i) {
        raw[i] = "c" + std::to_string(i % k);
    }
    return validate_dataset(rows, names, raw);
}

inline std::pair<Dataset, Labels> from_rows(const std::vector<std::vector<double>>& rows,
                                            const std::vector<std::string>& raw) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < (rows.empty() ? 0 : rows[0].size()); ++j) {
        names.push_back("f" + std::to_string(j));
    }
    return validate_dataset(rows, names, raw);
}

/// Greedy mRMR written straight from the selection rule: every step rescans
/// all candidates and recomputes the mean redundancy against the whole
/// selected set. Constant columns are only considered once no other
/// candidate is left.
inline std::vector<std::size_t> brute_force_mrmr(const Dataset& d, const Labels& y, std::size_t p) {
    const std::size_t n = d.n();
    std::vector<double> rel(n);
    std::vector<bool> constant(n);
    for (std::size_t j = 0; j < n; ++j) {
        rel[j] = f_statistic(d.column(j), y);
        constant[j] = is_constant(d.column(j));
    }
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    while (chosen.size() < p && chosen.size() < n) {
        bool any_live = false;
        for (std::size_t j = 0; j < n; ++j) {
            any_live = any_live || (!taken[j] && !constant[j]);
        }
        std::size_t best = n;
        double best_score = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (taken[j] || (any_live && constant[j])) {
                continue;
            }
            double red = 0.0;
            for (std::size_t s : chosen) {
                red += std::abs(pearson(d.column(j), d.column(s)));
            }
            const double score = chosen.empty() ? rel[j] : rel[j] - red / static_cast<double>(chosen.size());
            if (best == n || score > best_score) {
                best = j;
                best_score = score;
            }
        }
        taken[best] = true;
        chosen.push_back(best);
    }
    return chosen;
}

/// Redundancy sums of every unselected column against `selected`, from scratch.
inline std::vector<double> scratch_sums(const Dataset& d, const std::vector<std::size_t>& selected) {
    std::vector<double> out(d.n(), 0.0);
    for (std::size_t j = 0; j < d.n(); ++j) {
        for (std::size_t s : selected) {
            out[j] += std::abs(pearson(d.column(j), d.column(s)));
        }
    }
    return out;
}

inline std::size_t count_prefix(const std::vector<std::string>& names, const FeatureSet& set, const std::string& prefix) {
    std::size_t c = 0;
    for (std::size_t j : set.indices) {
        c += names[j].rfind(prefix, 0) == 0 ? 1 : 0;
    }
    return c;
}

} // namespace testing_support
