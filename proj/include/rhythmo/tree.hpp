#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "rhythmo/error.hpp"
#include "rhythmo/types.hpp"

namespace rhythmo {

struct TreeNode {
    int feature = -1;      // -1 marks a leaf
    double threshold = 0.0;
    double value = 0.0;    // leaf output
    int left = -1;
    int right = -1;

    bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
    std::vector<TreeNode> nodes;
    int max_depth = 0;

    double predict(std::span<const double> x) const {
        int idx = 0;
        while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
            const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
            idx = x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                              : node.right;
        }
        return nodes[static_cast<std::size_t>(idx)].value;
    }
};

// Column-wise argsort of the training matrix, computed once and shared
// across boosting stages.
struct SortedFeatures {
    std::vector<std::vector<std::uint32_t>> order; // per feature, rows sorted by value

    SortedFeatures() = default;
    explicit SortedFeatures(const Matrix& X) {
        order.resize(X.cols);
        for (std::size_t f = 0; f < X.cols; ++f) {
            auto& ord = order[f];
            ord.resize(X.rows);
            std::iota(ord.begin(), ord.end(), 0u);
            std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
                return X(a, f) < X(b, f);
            });
        }
    }
};

namespace detail {

struct SplitResult {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Best squared-error split over the samples flagged in `in_node`.
// Deterministic tie-break: first improvement wins with features scanned
// ascending, so ties resolve to the lowest feature index.
inline SplitResult best_split(const Matrix& X, const std::vector<double>& target,
                              const SortedFeatures& sorted, const std::vector<char>& in_node,
                              std::size_t node_count, double node_sum,
                              std::size_t min_samples_leaf, std::vector<double>& scratch_vals,
                              std::vector<double>& scratch_targets) {
    SplitResult best;
    if (node_count < 2 * min_samples_leaf) return best;
    const double parent_score = node_sum * node_sum / static_cast<double>(node_count);
    for (std::size_t f = 0; f < X.cols; ++f) {
        scratch_vals.clear();
        scratch_targets.clear();
        for (std::uint32_t row : sorted.order[f]) {
            if (!in_node[row]) continue;
            scratch_vals.push_back(X(row, f));
            scratch_targets.push_back(target[row]);
        }
        double left_sum = 0.0;
        for (std::size_t i = 0; i + 1 < scratch_vals.size(); ++i) {
            left_sum += scratch_targets[i];
            if (scratch_vals[i] == scratch_vals[i + 1]) continue;
            std::size_t n_left = i + 1;
            std::size_t n_right = scratch_vals.size() - n_left;
            if (n_left < min_samples_leaf || n_right < min_samples_leaf) continue;
            double right_sum = node_sum - left_sum;
            double score = left_sum * left_sum / static_cast<double>(n_left) +
                           right_sum * right_sum / static_cast<double>(n_right);
            double gain = score - parent_score;
            if (gain > best.gain + 1e-12) {
                best.found = true;
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (scratch_vals[i] + scratch_vals[i + 1]);
                best.gain = gain;
            }
        }
    }
    return best;
}

inline void grow_node(DecisionTree& tree, const Matrix& X, const std::vector<double>& target,
                      const SortedFeatures& sorted, std::vector<char>& in_node,
                      const std::vector<std::uint32_t>& rows, int depth, int max_depth,
                      std::size_t min_samples_leaf, int node_index,
                      std::vector<double>& scratch_vals, std::vector<double>& scratch_targets) {
    double sum = 0.0;
    for (std::uint32_t r : rows) sum += target[r];
    double mean = sum / static_cast<double>(rows.size());

    if (depth >= max_depth) {
        tree.nodes[static_cast<std::size_t>(node_index)].value = mean;
        return;
    }

    std::fill(in_node.begin(), in_node.end(), 0);
    for (std::uint32_t r : rows) in_node[r] = 1;
    SplitResult split = best_split(X, target, sorted, in_node, rows.size(), sum,
                                   min_samples_leaf, scratch_vals, scratch_targets);
    if (!split.found) {
        tree.nodes[static_cast<std::size_t>(node_index)].value = mean;
        return;
    }

    std::vector<std::uint32_t> left_rows, right_rows;
    for (std::uint32_t r : rows) {
        if (X(r, static_cast<std::size_t>(split.feature)) <= split.threshold)
            left_rows.push_back(r);
        else
            right_rows.push_back(r);
    }

    int left_index = static_cast<int>(tree.nodes.size());
    int right_index = left_index + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left_index;
    node.right = right_index;

    grow_node(tree, X, target, sorted, in_node, left_rows, depth + 1, max_depth,
              min_samples_leaf, left_index, scratch_vals, scratch_targets);
    grow_node(tree, X, target, sorted, in_node, right_rows, depth + 1, max_depth,
              min_samples_leaf, right_index, scratch_vals, scratch_targets);
}

} // namespace detail

// Greedy least-squares regression tree; leaf values are mean targets of
// reaching samples.
inline DecisionTree fit_tree(const Matrix& X, const std::vector<double>& target, int max_depth,
                             std::size_t min_samples_leaf = 1,
                             const SortedFeatures* presorted = nullptr) {
    if (target.size() != X.rows)
        throw data_error("DimensionMismatch", "target length does not match row count");
    if (X.rows < 2 * min_samples_leaf)
        throw data_error("TooFewSamples", "need at least 2*min_samples_leaf rows");

    SortedFeatures local;
    if (!presorted) {
        local = SortedFeatures(X);
        presorted = &local;
    }

    DecisionTree tree;
    tree.max_depth = max_depth;
    tree.nodes.emplace_back();

    std::vector<std::uint32_t> rows(X.rows);
    std::iota(rows.begin(), rows.end(), 0u);
    std::vector<char> in_node(X.rows, 0);
    std::vector<double> scratch_vals, scratch_targets;
    scratch_vals.reserve(X.rows);
    scratch_targets.reserve(X.rows);
    detail::grow_node(tree, X, target, *presorted, in_node, rows, 0, max_depth,
                      min_samples_leaf, 0, scratch_vals, scratch_targets);
    return tree;
}

} // namespace rhythmo
