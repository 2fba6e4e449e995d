#pragma once

// Random Forest classifier with Gini splits and out-of-bag permutation
// importance.
//
// Randomness is drawn from streams keyed by stable identifiers:
//   tree t bootstrap        params.seed.child(t).child(kBootstrapStream)
//   tree t, node v          params.seed.child(t).child(kNodeStream).child(v)
//   importance (t, j)       rng.child(t).child(j)
// so models and importances do not depend on the number of workers.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bomgene/dataset.hpp"
#include "bomgene/error.hpp"
#include "bomgene/parallel.hpp"
#include "bomgene/random.hpp"
#include "bomgene/stats.hpp"

namespace bomgene {

struct ForestParams {
    std::size_t n_trees = 200;
    std::optional<std::size_t> max_depth;
    std::size_t min_samples_leaf = 1;
    /// Features tried per split. Unset means ceil(sqrt(n)).
    std::optional<std::size_t> mtry;
    bool bootstrap = true;
    RandomSource seed{};
    /// Worker cap; results do not depend on it.
    std::size_t threads = 1;
};

inline std::size_t effective_mtry(const ForestParams& params, std::size_t n) {
    if (params.mtry) {
        return std::clamp<std::size_t>(*params.mtry, 1, std::max<std::size_t>(n, 1));
    }
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));
}

struct TreeNode {
    static constexpr std::uint32_t kLeaf = UINT32_MAX;

    std::uint32_t feature = kLeaf;
    double threshold = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    int label = 0;

    bool is_leaf() const noexcept { return feature == kLeaf; }

    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
public:
    std::vector<TreeNode> nodes;

    /// Class for one sample; `value(f)` returns the sample's feature f.
    template <class Value>
    int predict_with(Value&& value) const {
        std::uint32_t at = 0;
        while (!nodes[at].is_leaf()) {
            const auto& node = nodes[at];
            at = value(node.feature) <= node.threshold ? node.left : node.right;
        }
        return nodes[at].label;
    }

    int predict(const Dataset& data, std::size_t row) const {
        return predict_with([&](std::uint32_t f) { return data(row, f); });
    }

    /// Distinct split features, ascending.
    std::vector<std::size_t> split_features() const {
        std::vector<std::size_t> out;
        for (const auto& node : nodes) {
            if (!node.is_leaf()) {
                out.push_back(node.feature);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::size_t depth() const {
        std::size_t best = 0;
        std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0, 0}};
        while (!stack.empty()) {
            auto [at, d] = stack.back();
            stack.pop_back();
            best = std::max(best, d);
            if (!nodes[at].is_leaf()) {
                stack.emplace_back(nodes[at].left, d + 1);
                stack.emplace_back(nodes[at].right, d + 1);
            }
        }
        return best;
    }

    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
    std::vector<DecisionTree> trees;
    /// Per tree: training sample indices with bootstrap multiplicity.
    std::vector<std::vector<std::size_t>> bags;
    /// Per tree: ascending sample indices absent from the bag.
    std::vector<std::vector<std::size_t>> oob_indices;
    std::size_t n_features = 0;
    std::size_t classes = 0;

    friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

struct ImportanceVector {
    std::vector<double> z;
    std::vector<double> raw_mean;
    std::vector<double> raw_sd;
    /// Trees that had out-of-bag samples and contributed.
    std::size_t trees_used = 0;
};

namespace detail {

inline constexpr std::uint64_t kBootstrapStream = 1;
inline constexpr std::uint64_t kNodeStream = 2;

/// Majority class, ties to the lowest code.
inline int majority(std::span<const std::size_t> counts) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < counts.size(); ++c) {
        if (counts[c] > counts[best]) {
            best = c;
        }
    }
    return static_cast<int>(best);
}

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const Labels& labels, const ForestParams& params, RandomSource tree_source)
        : data_(data), labels_(labels), params_(params), source_(tree_source), k_(labels.k()),
          mtry_(effective_mtry(params, data.n())) {}

    DecisionTree build(std::vector<std::size_t> samples) {
        tree_.nodes.clear();
        samples_ = std::move(samples);
        grow(0, samples_.size(), 0);
        return std::move(tree_);
    }

private:
    struct Split {
        std::size_t feature = 0;
        double threshold = 0.0;
        double score = -1.0; // sum_l c^2/n_l + sum_r c^2/n_r, larger is purer
    };

    std::uint32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
        const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
        tree_.nodes.emplace_back();

        std::vector<std::size_t> counts(k_, 0);
        for (std::size_t i = begin; i < end; ++i) {
            ++counts[static_cast<std::size_t>(labels_.codes[samples_[i]])];
        }
        const std::size_t size = end - begin;
        const bool pure = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;
        const bool depth_capped = params_.max_depth && depth >= *params_.max_depth;
        std::optional<Split> split;
        if (!pure && !depth_capped && size >= 2 * params_.min_samples_leaf) {
            split = find_split(begin, end, counts, id);
        }
        if (!split) {
            tree_.nodes[id].label = majority(counts);
            return id;
        }

        auto middle = std::partition(samples_.begin() + static_cast<std::ptrdiff_t>(begin),
                                     samples_.begin() + static_cast<std::ptrdiff_t>(end), [&](std::size_t s) {
                                         return data_(s, split->feature) <= split->threshold;
                                     });
        const auto mid = static_cast<std::size_t>(middle - samples_.begin());
        const std::uint32_t left = grow(begin, mid, depth + 1);
        const std::uint32_t right = grow(mid, end, depth + 1);
        auto& node = tree_.nodes[id];
        node.feature = static_cast<std::uint32_t>(split->feature);
        node.threshold = split->threshold;
        node.left = left;
        node.right = right;
        node.label = majority(counts);
        return id;
    }

    // Features are drawn without replacement in random order until `mtry`
    // features that vary within the node have been scored (or none remain).
    std::optional<Split> find_split(std::size_t begin, std::size_t end, const std::vector<std::size_t>& counts,
                                    std::uint32_t node_id) {
        Rng rng(source_.child(kNodeStream).child(node_id));
        const std::size_t n = data_.n();
        order_.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            order_[j] = j;
        }

        const std::size_t size = end - begin;
        const std::size_t min_leaf = params_.min_samples_leaf;
        std::optional<Split> best;
        std::size_t scored = 0;
        for (std::size_t drawn = 0; drawn < n && scored < mtry_; ++drawn) {
            const std::size_t pick = drawn + static_cast<std::size_t>(rng.below(n - drawn));
            std::swap(order_[drawn], order_[pick]);
            const std::size_t feature = order_[drawn];

            pairs_.clear();
            for (std::size_t i = begin; i < end; ++i) {
                const std::size_t s = samples_[i];
                pairs_.emplace_back(data_(s, feature), labels_.codes[s]);
            }
            std::sort(pairs_.begin(), pairs_.end());
            if (pairs_.front().first == pairs_.back().first) {
                continue;
            }
            ++scored;

            left_.assign(k_, 0);
            double left_sq = 0.0;
            double right_sq = 0.0;
            right_ = counts;
            for (std::size_t c : right_) {
                right_sq += static_cast<double>(c) * static_cast<double>(c);
            }
            for (std::size_t i = 0; i + 1 < size; ++i) {
                const auto c = static_cast<std::size_t>(pairs_[i].second);
                left_sq += 2.0 * static_cast<double>(left_[c]) + 1.0;
                right_sq -= 2.0 * static_cast<double>(right_[c]) - 1.0;
                ++left_[c];
                --right_[c];
                const std::size_t nl = i + 1;
                const std::size_t nr = size - nl;
                if (pairs_[i].first == pairs_[i + 1].first || nl < min_leaf || nr < min_leaf) {
                    continue;
                }
                const double score = left_sq / static_cast<double>(nl) + right_sq / static_cast<double>(nr);
                double threshold = pairs_[i].first + (pairs_[i + 1].first - pairs_[i].first) / 2.0;
                if (!(threshold < pairs_[i + 1].first)) {
                    threshold = pairs_[i].first;
                }
                const bool better = !best || score > best->score ||
                                    (score == best->score && (feature < best->feature ||
                                                              (feature == best->feature && threshold < best->threshold)));
                if (better) {
                    best = Split{feature, threshold, score};
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    const Labels& labels_;
    const ForestParams& params_;
    RandomSource source_;
    std::size_t k_;
    std::size_t mtry_;
    DecisionTree tree_;
    std::vector<std::size_t> samples_;
    std::vector<std::size_t> order_;
    std::vector<std::pair<double, int>> pairs_;
    std::vector<std::size_t> left_;
    std::vector<std::size_t> right_;
};

} // namespace detail

inline ForestModel train_forest(const Dataset& data, const Labels& labels, const ForestParams& params) {
    if (labels.size() != data.m()) {
        throw validation_error("train_forest: " + std::to_string(data.m()) + " samples but " +
                               std::to_string(labels.size()) + " labels");
    }
    if (data.m() == 0 || data.n() == 0) {
        throw validation_error("train_forest: empty training data");
    }
    if (params.n_trees == 0) {
        throw validation_error("train_forest: n_trees must be >= 1");
    }
    if (params.min_samples_leaf == 0) {
        throw validation_error("train_forest: min_samples_leaf must be >= 1");
    }
    if (params.max_depth && *params.max_depth == 0) {
        throw validation_error("train_forest: max_depth must be >= 1");
    }
    if (params.mtry && (*params.mtry == 0 || *params.mtry > data.n())) {
        throw validation_error("train_forest: mtry must be in [1, n]");
    }

    const std::size_t m = data.m();
    ForestModel model;
    model.n_features = data.n();
    model.classes = labels.k();
    model.trees.resize(params.n_trees);
    model.bags.resize(params.n_trees);
    model.oob_indices.resize(params.n_trees);

    parallel_for(params.n_trees, params.threads, [&](std::size_t t) {
        const RandomSource tree_source = params.seed.child(t);
        std::vector<std::size_t> bag(m);
        std::vector<bool> in_bag(m, !params.bootstrap);
        if (params.bootstrap) {
            Rng rng(tree_source.child(detail::kBootstrapStream));
            for (auto& s : bag) {
                s = static_cast<std::size_t>(rng.below(m));
                in_bag[s] = true;
            }
        } else {
            for (std::size_t i = 0; i < m; ++i) {
                bag[i] = i;
            }
        }
        std::vector<std::size_t> oob;
        for (std::size_t i = 0; i < m; ++i) {
            if (!in_bag[i]) {
                oob.push_back(i);
            }
        }
        detail::TreeBuilder builder(data, labels, params, tree_source);
        model.trees[t] = builder.build(bag);
        model.bags[t] = std::move(bag);
        model.oob_indices[t] = std::move(oob);
    });
    return model;
}

/// Per-sample majority vote; vote ties go to the lowest class code.
inline std::vector<int> predict(const ForestModel& model, const Dataset& data) {
    if (data.n() != model.n_features) {
        throw validation_error("predict: dataset has " + std::to_string(data.n()) + " features, model expects " +
                               std::to_string(model.n_features));
    }
    std::vector<int> out(data.m());
    std::vector<std::size_t> votes(model.classes);
    for (std::size_t i = 0; i < data.m(); ++i) {
        std::fill(votes.begin(), votes.end(), 0);
        for (const auto& tree : model.trees) {
            ++votes[static_cast<std::size_t>(tree.predict(data, i))];
        }
        out[i] = detail::majority(votes);
    }
    return out;
}

/// OOB permutation importance, Z-normalised across trees.
///
/// Tree t contributes acc_oob(t) - acc_oob(t, feature j permuted among the
/// OOB rows). Features a tree never splits on contribute exactly 0 without
/// being evaluated. Trees with no OOB rows are skipped.
inline ImportanceVector permutation_importance(const ForestModel& model, const Dataset& data, const Labels& labels,
                                               RandomSource rng, std::size_t threads = 1) {
    if (data.n() != model.n_features) {
        throw validation_error("permutation_importance: feature-count mismatch");
    }
    const std::size_t n = model.n_features;
    const std::size_t trees = model.trees.size();
    std::vector<std::vector<double>> contributions(trees);
    std::vector<char> used(trees, 0);

    parallel_for(trees, threads, [&](std::size_t t) {
        const auto& oob = model.oob_indices[t];
        if (oob.empty()) {
            return;
        }
        used[t] = 1;
        const auto& tree = model.trees[t];
        auto& row = contributions[t];
        row.assign(n, 0.0);

        std::size_t correct = 0;
        for (std::size_t s : oob) {
            correct += tree.predict(data, s) == labels.codes[s] ? 1 : 0;
        }
        const double total = static_cast<double>(oob.size());
        const double base = static_cast<double>(correct) / total;

        std::vector<double> original(oob.size());
        for (std::size_t j : tree.split_features()) {
            for (std::size_t r = 0; r < oob.size(); ++r) {
                original[r] = data(oob[r], j);
            }
            const auto permuted = permute_column(original, rng.child(t).child(j));
            std::size_t permuted_correct = 0;
            for (std::size_t r = 0; r < oob.size(); ++r) {
                const std::size_t s = oob[r];
                const int predicted =
                    tree.predict_with([&](std::uint32_t f) { return f == j ? permuted[r] : data(s, f); });
                permuted_correct += predicted == labels.codes[s] ? 1 : 0;
            }
            row[j] = base - static_cast<double>(permuted_correct) / total;
        }
    });

    ImportanceVector out;
    out.z.assign(n, 0.0);
    out.raw_mean.assign(n, 0.0);
    out.raw_sd.assign(n, 0.0);
    out.trees_used = static_cast<std::size_t>(std::count(used.begin(), used.end(), 1));
    if (out.trees_used == 0) {
        throw runtime_error("permutation_importance: no tree has out-of-bag samples");
    }
    const double count = static_cast<double>(out.trees_used);
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t t = 0; t < trees; ++t) {
            if (used[t]) {
                sum += contributions[t][j];
            }
        }
        const double mean = sum / count;
        double ss = 0.0;
        for (std::size_t t = 0; t < trees; ++t) {
            if (used[t]) {
                const double d = contributions[t][j] - mean;
                ss += d * d;
            }
        }
        const double sd = out.trees_used > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
        out.raw_mean[j] = mean;
        out.raw_sd[j] = sd;
        out.z[j] = sd > 0.0 ? mean / sd : 0.0;
    }
    return out;
}

} // namespace bomgene
