#pragma once

// All-relevant selection with shadow features.
//
// Each iteration trains a forest on the undecided features plus freshly
// permuted shadows (one per feature, topped up by further permutations of the
// pool to a fixed shadow count), and scores a hit for every undecided feature
// whose importance Z exceeds the best shadow Z. Features are then decided
// either by a one-sided Binomial(trials, 1/2) test on the accumulated hits
// or, in strict mode, by the single-iteration comparison alone. Decided
// features leave the pool.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/forest.hpp"
#include "bomgene/random.hpp"
#include "bomgene/stats.hpp"

namespace bomgene {

enum class TailSide { Upper, Lower };
enum class TentativePolicy { Reject, Keep };
enum class FeatureStatus { Tentative, Confirmed, Rejected };

inline const char* to_string(FeatureStatus status) {
    switch (status) {
    case FeatureStatus::Tentative:
        return "tentative";
    case FeatureStatus::Confirmed:
        return "confirmed";
    case FeatureStatus::Rejected:
        return "rejected";
    }
    return "?";
}

/// Exact tail of Binomial(trials, 1/2): P(H >= hits) for Upper, P(H <= hits) for Lower.
inline double binomial_tail(std::size_t hits, std::size_t trials, TailSide side) {
    if (hits > trials) {
        throw validation_error("binomial_tail: hits (" + std::to_string(hits) + ") > trials (" +
                               std::to_string(trials) + ")");
    }
    // Count outcomes in the requested tail; by symmetry the lower tail at h is
    // the upper tail at trials - h.
    const std::size_t from = side == TailSide::Upper ? hits : trials - hits;
    if (trials <= 52) {
        std::uint64_t choose = 1; // C(trials, i)
        std::uint64_t count = 0;
        for (std::size_t i = 0; i <= trials; ++i) {
            if (i >= from) {
                count += choose;
            }
            choose = choose * (trials - i) / (i + 1);
        }
        return std::ldexp(static_cast<double>(count), -static_cast<int>(trials));
    }
    // pmf(i) = C(n, i) 2^-n, accumulated in log space for large n.
    const double n = static_cast<double>(trials);
    const double log_half_n = n * std::log(0.5);
    long double total = 0.0L;
    for (std::size_t i = from; i <= trials; ++i) {
        const double x = static_cast<double>(i);
        const double log_pmf = std::lgamma(n + 1.0) - std::lgamma(x + 1.0) - std::lgamma(n - x + 1.0) + log_half_n;
        total += std::exp(static_cast<long double>(log_pmf));
    }
    return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

struct BorutaConfig {
    std::size_t max_iterations = 100;
    double alpha = 0.05;
    ForestParams forest{};
    TentativePolicy tentative_policy = TentativePolicy::Reject;
    /// false: decide each feature from a single iteration's strict comparison.
    bool use_binomial_test = true;
    /// Divide alpha by the number of undecided features each iteration.
    bool bonferroni = false;
    /// Lower bound on shadow columns per iteration. Unset means the number of
    /// input features, so every iteration is compared against the maximum
    /// of the same number of fresh permutations however small the pool gets.
    std::optional<std::size_t> min_shadows;
};

struct BorutaIteration {
    std::size_t iteration = 0; // 1-based
    double max_shadow_z = 0.0;
    /// Undecided features (original indices) entering this iteration and their Z.
    std::vector<std::size_t> pool;
    std::vector<double> z;
};

struct BorutaLedger {
    std::vector<std::size_t> hits;
    std::vector<std::size_t> trials;
    std::vector<FeatureStatus> status;
    /// Iteration at which the feature left tentative status; 0 if never.
    std::vector<std::size_t> decided_at;
    std::vector<BorutaIteration> history;
    std::size_t iterations_run = 0;

    std::size_t count(FeatureStatus s) const {
        return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
    }
};

struct ShadowAugmentation {
    Dataset augmented;
    /// shadow_map[s] = source column of augmented column n + s.
    std::vector<std::size_t> shadow_map;
};

namespace detail {

inline constexpr std::uint64_t kShadowStream = 11;
inline constexpr std::uint64_t kForestStream = 12;
inline constexpr std::uint64_t kImportanceStream = 13;

/// Appends permuted copies of the columns, cycling through them until at
/// least `min_shadows` have been added (one per column when n >= min_shadows).
/// Copy r of column j is shuffled with rng.child(keys[j]).child(r).
inline ShadowAugmentation augment(const Dataset& data, RandomSource rng, std::span<const std::size_t> keys,
                                  std::size_t min_shadows = 0) {
    const std::size_t m = data.m();
    const std::size_t n = data.n();
    const std::size_t shadows = n == 0 ? 0 : std::max(n, min_shadows);
    std::vector<double> values = data.values();
    values.reserve((n + shadows) * m);
    auto names = data.feature_names();
    ShadowAugmentation out;
    out.shadow_map.resize(shadows);
    for (std::size_t s = 0; s < shadows; ++s) {
        const std::size_t j = s % n;
        const std::size_t copy = s / n;
        const auto shadow = permute_column(data.column(j), rng.child(keys[j]).child(copy));
        values.insert(values.end(), shadow.begin(), shadow.end());
        names.push_back("shadow" + (copy > 0 ? std::to_string(copy + 1) : std::string()) + "_" +
                        data.feature_names()[j]);
        out.shadow_map[s] = j;
    }
    out.augmented = Dataset::unchecked(m, n + shadows, std::move(values), std::move(names));
    return out;
}

} // namespace detail

/// Originals followed by one independent permutation of each original column.
inline ShadowAugmentation augment_with_shadows(const Dataset& data, RandomSource rng) {
    const auto keys = all_features(data.n()).indices;
    return detail::augment(data, rng, keys);
}

inline std::pair<FeatureSet, BorutaLedger> boruta_run(const Dataset& data, const Labels& labels,
                                                      const BorutaConfig& config) {
    if (config.max_iterations == 0) {
        throw validation_error("boruta: max_iterations must be >= 1");
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw validation_error("boruta: alpha must be in (0, 1)");
    }
    const std::size_t n = data.n();
    BorutaLedger ledger;
    ledger.hits.assign(n, 0);
    ledger.trials.assign(n, 0);
    ledger.status.assign(n, FeatureStatus::Tentative);
    ledger.decided_at.assign(n, 0);

    const RandomSource base = config.forest.seed;
    const std::size_t shadow_count = config.min_shadows.value_or(n);
    std::vector<std::size_t> pool = all_features(n).indices;

    for (std::size_t t = 1; t <= config.max_iterations && !pool.empty(); ++t) {
        const Dataset current = project(data, FeatureSet{pool});
        const auto shadows =
            detail::augment(current, base.child(detail::kShadowStream).child(t), pool, shadow_count);

        ForestParams params = config.forest;
        params.seed = base.child(detail::kForestStream).child(t);
        if (params.mtry) {
            params.mtry = std::min(*params.mtry, shadows.augmented.n());
        }
        const ForestModel model = train_forest(shadows.augmented, labels, params);
        const ImportanceVector importance = permutation_importance(
            model, shadows.augmented, labels, base.child(detail::kImportanceStream).child(t), params.threads);

        const std::size_t p = pool.size();
        double max_shadow = -std::numeric_limits<double>::infinity();
        for (std::size_t s = p; s < shadows.augmented.n(); ++s) {
            max_shadow = std::max(max_shadow, importance.z[s]);
        }

        BorutaIteration record;
        record.iteration = t;
        record.max_shadow_z = max_shadow;
        record.pool = pool;
        record.z.assign(importance.z.begin(), importance.z.begin() + static_cast<std::ptrdiff_t>(p));

        const double alpha = config.bonferroni ? config.alpha / static_cast<double>(p) : config.alpha;
        std::vector<std::size_t> still_open;
        for (std::size_t local = 0; local < p; ++local) {
            const std::size_t j = pool[local];
            const double z = importance.z[local];
            ++ledger.trials[j];
            if (z > max_shadow) {
                ++ledger.hits[j];
            }
            FeatureStatus decision = FeatureStatus::Tentative;
            if (config.use_binomial_test) {
                if (binomial_tail(ledger.hits[j], ledger.trials[j], TailSide::Upper) < alpha) {
                    decision = FeatureStatus::Confirmed;
                } else if (binomial_tail(ledger.hits[j], ledger.trials[j], TailSide::Lower) < alpha) {
                    decision = FeatureStatus::Rejected;
                }
            } else if (z > max_shadow) {
                decision = FeatureStatus::Confirmed;
            } else if (z < max_shadow) {
                decision = FeatureStatus::Rejected;
            }
            if (decision == FeatureStatus::Tentative) {
                still_open.push_back(j);
            } else {
                ledger.status[j] = decision;
                ledger.decided_at[j] = t;
            }
        }
        ledger.history.push_back(std::move(record));
        ledger.iterations_run = t;
        pool = std::move(still_open);
    }

    FeatureSet selected;
    for (std::size_t j = 0; j < n; ++j) {
        const bool keep_tentative =
            config.tentative_policy == TentativePolicy::Keep && ledger.status[j] == FeatureStatus::Tentative;
        if (ledger.status[j] == FeatureStatus::Confirmed || keep_tentative) {
            selected.indices.push_back(j);
        }
    }
    return {std::move(selected), std::move(ledger)};
}

} // namespace bomgene
