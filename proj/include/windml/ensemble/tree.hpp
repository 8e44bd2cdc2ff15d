#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "windml/common/rng.hpp"

namespace windml {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double value = 0.0; // mean target of the training rows at this node
    int count = 0;
    double sse = 0.0; // training sum of squared deviations at this node
};

struct RegressionTree {
    std::vector<TreeNode> nodes; // nodes[0] is the root

    bool empty() const { return nodes.empty(); }

    double predict(std::span<const double> features) const {
        if (nodes.empty()) throw std::logic_error("RegressionTree::predict: empty tree");
        int i = 0;
        while (nodes[static_cast<std::size_t>(i)].feature >= 0) {
            const auto& nd = nodes[static_cast<std::size_t>(i)];
            i = features[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
        }
        return nodes[static_cast<std::size_t>(i)].value;
    }

    int leaf_count() const {
        int c = 0;
        for (const auto& nd : nodes) c += nd.feature < 0;
        return c;
    }
};

struct TreeParams {
    int min_node_size = 5;
    int max_depth = -1; // -1 means unlimited
    bool prune = false;
    int cv_folds = 10;
};

// Supplies the candidate feature subset for one split decision.
using CandidateSampler = std::function<std::vector<int>(Rng&)>;

inline CandidateSampler all_features_sampler(int p) {
    std::vector<int> all(static_cast<std::size_t>(p));
    std::iota(all.begin(), all.end(), 0);
    return [all](Rng&) { return all; };
}

// Uniform random mtry-subset per node. When mtry == p no randomness is
// consumed, so bagging and RF(mtry = p) agree stream-for-stream.
inline CandidateSampler mtry_sampler(int p, int mtry) {
    if (mtry < 1 || mtry > p) throw std::invalid_argument("mtry_sampler: need 1 <= mtry <= p");
    if (mtry == p) return all_features_sampler(p);
    return [p, mtry](Rng& rng) { return rng.sample_without_replacement(p, mtry); };
}

struct SplitResult {
    int feature = -1;
    double threshold = 0.0;
    double deviance = 0.0; // left SSE + right SSE
};

// Exhaustive deviance-minimizing split: every candidate feature, every
// midpoint between consecutive distinct sorted values, both children at
// least min_node_size rows. Ties break to the lowest feature index, then
// the smallest threshold (features scanned ascending, strict improvement).
inline std::optional<SplitResult> best_split(const std::vector<std::vector<double>>& rows,
                                             const std::vector<double>& targets,
                                             std::span<const std::size_t> indices,
                                             std::vector<int> candidate_features,
                                             int min_node_size = 1) {
    const std::size_t n = indices.size();
    if (n < 2 || n < 2 * static_cast<std::size_t>(min_node_size)) return std::nullopt;
    std::sort(candidate_features.begin(), candidate_features.end());

    std::optional<SplitResult> best;
    std::vector<std::size_t> order(indices.begin(), indices.end());
    for (int j : candidate_features) {
        const auto ju = static_cast<std::size_t>(j);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return rows[a][ju] < rows[b][ju]; });
        // Prefix sums over the sorted order.
        double sum_left = 0.0, sumsq_left = 0.0, sum_all = 0.0, sumsq_all = 0.0;
        for (std::size_t i : order) {
            sum_all += targets[i];
            sumsq_all += targets[i] * targets[i];
        }
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double yk = targets[order[k]];
            sum_left += yk;
            sumsq_left += yk * yk;
            const double lo = rows[order[k]][ju];
            const double hi = rows[order[k + 1]][ju];
            if (lo == hi) continue; // no threshold separates equal values
            const std::size_t nl = k + 1, nr = n - nl;
            if (nl < static_cast<std::size_t>(min_node_size) ||
                nr < static_cast<std::size_t>(min_node_size))
                continue;
            const double sum_right = sum_all - sum_left;
            const double sumsq_right = sumsq_all - sumsq_left;
            const double sse_l = std::max(0.0, sumsq_left - sum_left * sum_left / static_cast<double>(nl));
            const double sse_r = std::max(0.0, sumsq_right - sum_right * sum_right / static_cast<double>(nr));
            const double deviance = sse_l + sse_r;
            if (!best || deviance < best->deviance) {
                best = SplitResult{j, lo + (hi - lo) / 2.0, deviance};
            }
        }
    }
    return best;
}

// Recursive deviance-minimizing tree growth. Stops at the depth cap, the
// node-size floor, a zero-gain best split, or when no valid split exists.
inline RegressionTree grow_tree(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& targets, const TreeParams& params,
                                const CandidateSampler& candidate_sampler, Rng& rng) {
    if (rows.empty()) throw std::invalid_argument("grow_tree: empty data");
    if (rows.size() != targets.size())
        throw std::invalid_argument("grow_tree: rows/targets length mismatch");

    RegressionTree tree;
    struct Task {
        std::vector<std::size_t> indices;
        int node;
        int depth;
    };
    std::vector<std::size_t> root_indices(rows.size());
    std::iota(root_indices.begin(), root_indices.end(), 0);
    tree.nodes.emplace_back();
    std::vector<Task> stack;
    stack.push_back({std::move(root_indices), 0, 0});

    while (!stack.empty()) {
        Task task = std::move(stack.back());
        stack.pop_back();
        const auto& idx = task.indices;

        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i : idx) {
            sum += targets[i];
            sumsq += targets[i] * targets[i];
        }
        const auto n = static_cast<double>(idx.size());
        TreeNode& node = tree.nodes[static_cast<std::size_t>(task.node)];
        node.count = static_cast<int>(idx.size());
        node.value = sum / n;
        node.sse = std::max(0.0, sumsq - sum * sum / n);

        if (params.max_depth >= 0 && task.depth >= params.max_depth) continue;
        if (idx.size() < 2 * static_cast<std::size_t>(params.min_node_size) || idx.size() < 2)
            continue;

        const auto candidates = candidate_sampler(rng);
        const auto split = best_split(rows, targets, idx, candidates, params.min_node_size);
        if (!split || split->deviance >= node.sse) continue; // no positive gain

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (rows[i][static_cast<std::size_t>(split->feature)] < split->threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        const int left_node = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        TreeNode& parent = tree.nodes[static_cast<std::size_t>(task.node)];
        parent.feature = split->feature;
        parent.threshold = split->threshold;
        parent.left = left_node;
        parent.right = left_node + 1;
        // Right pushed first so the left subtree is laid out first (the
        // stack is LIFO); layout is part of the determinism contract.
        stack.push_back({std::move(right_idx), left_node + 1, task.depth + 1});
        stack.push_back({std::move(left_idx), left_node, task.depth + 1});
    }
    return tree;
}

} // namespace windml
