#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "windml/ensemble/tree.hpp"

namespace windml {

namespace detail {

struct SubtreeInfo {
    double leaf_sse = 0.0; // sum of leaf SSE over the subtree
    int leaves = 0;
};

inline SubtreeInfo subtree_info(const RegressionTree& tree, int node,
                                std::vector<SubtreeInfo>& memo) {
    const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
    SubtreeInfo info;
    if (nd.feature < 0) {
        info = {nd.sse, 1};
    } else {
        const auto l = subtree_info(tree, nd.left, memo);
        const auto r = subtree_info(tree, nd.right, memo);
        info = {l.leaf_sse + r.leaf_sse, l.leaves + r.leaves};
    }
    memo[static_cast<std::size_t>(node)] = info;
    return info;
}

// Drops nodes made unreachable by collapsing, renumbering children.
inline RegressionTree compact_tree(const RegressionTree& tree) {
    RegressionTree out;
    std::vector<int> remap(tree.nodes.size(), -1);
    // Pre-order copy keeps the left-subtree-first layout.
    std::vector<int> order;
    std::vector<int> walk{0};
    while (!walk.empty()) {
        const int cur = walk.back();
        walk.pop_back();
        order.push_back(cur);
        const auto& nd = tree.nodes[static_cast<std::size_t>(cur)];
        if (nd.feature >= 0) {
            walk.push_back(nd.right);
            walk.push_back(nd.left);
        }
    }
    for (int old_node : order) {
        remap[static_cast<std::size_t>(old_node)] = static_cast<int>(out.nodes.size());
        out.nodes.push_back(tree.nodes[static_cast<std::size_t>(old_node)]);
    }
    for (auto& nd : out.nodes) {
        if (nd.feature >= 0) {
            nd.left = remap[static_cast<std::size_t>(nd.left)];
            nd.right = remap[static_cast<std::size_t>(nd.right)];
        }
    }
    return out;
}

// Collapses every link with weakest-link g <= alpha, weakest first (smallest
// node index on ties), in place and without compacting. Because the
// cost-complexity sequence is nested, repeated calls with ascending alpha
// continue the same pruning sequence.
inline void collapse_to_alpha(RegressionTree& tree, double alpha) {
    while (tree.nodes[0].feature >= 0) {
        std::vector<SubtreeInfo> memo(tree.nodes.size());
        subtree_info(tree, 0, memo);
        double min_g = std::numeric_limits<double>::infinity();
        int weakest = -1;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& nd = tree.nodes[i];
            if (nd.feature < 0) continue;
            const double g = (nd.sse - memo[i].leaf_sse) / static_cast<double>(memo[i].leaves - 1);
            if (g < min_g || (g == min_g && static_cast<int>(i) < weakest)) {
                min_g = g;
                weakest = static_cast<int>(i);
            }
        }
        if (weakest < 0 || min_g > alpha) break;
        tree.nodes[static_cast<std::size_t>(weakest)].feature = -1;
    }
}

} // namespace detail

// Weakest-link alpha values of the cost-complexity sequence, ascending,
// starting from 0 (the unpruned tree).
inline std::vector<double> pruning_alphas(RegressionTree tree) {
    std::vector<double> alphas{0.0};
    while (true) {
        std::vector<detail::SubtreeInfo> memo(tree.nodes.size());
        if (tree.nodes[0].feature < 0) break;
        detail::subtree_info(tree, 0, memo);
        double min_g = std::numeric_limits<double>::infinity();
        int weakest = -1;
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
            const auto& nd = tree.nodes[i];
            if (nd.feature < 0) continue;
            const double g = (nd.sse - memo[i].leaf_sse) / static_cast<double>(memo[i].leaves - 1);
            if (g < min_g) {
                min_g = g;
                weakest = static_cast<int>(i);
            }
        }
        if (weakest < 0) break;
        if (alphas.back() < min_g) alphas.push_back(min_g);
        tree.nodes[static_cast<std::size_t>(weakest)].feature = -1;
    }
    return alphas;
}

// Subtree of the cost-complexity sequence at penalty alpha: links with
// g <= alpha are collapsed, weakest first.
inline RegressionTree prune_at_alpha(RegressionTree tree, double alpha) {
    detail::collapse_to_alpha(tree, alpha);
    return detail::compact_tree(tree);
}

// Cost-complexity pruning with K-fold cross-validation: candidate alphas
// are the geometric midpoints of the main tree's weakest-link sequence; the
// alpha minimizing total validation squared error wins, ties to the larger
// alpha (simpler tree).
inline RegressionTree prune_tree(const RegressionTree& tree,
                                 const std::vector<std::vector<double>>& rows,
                                 const std::vector<double>& targets, int cv_folds,
                                 TreeParams params = {}) {
    if (cv_folds < 2) throw std::invalid_argument("prune_tree: cv_folds must be >= 2");
    const auto alphas = pruning_alphas(tree);

    std::vector<double> candidates;
    candidates.push_back(0.0);
    for (std::size_t k = 1; k + 1 < alphas.size(); ++k)
        candidates.push_back(std::sqrt(alphas[k] * alphas[k + 1]));
    if (alphas.size() > 1) candidates.push_back(alphas.back());

    if (candidates.size() == 1) return detail::compact_tree(tree);

    const std::size_t n = rows.size();
    const auto sampler = all_features_sampler(static_cast<int>(rows.front().size()));
    params.prune = false;
    std::vector<double> cv_sse(candidates.size(), 0.0);

    for (int fold = 0; fold < cv_folds; ++fold) {
        const std::size_t lo = n * static_cast<std::size_t>(fold) / static_cast<std::size_t>(cv_folds);
        const std::size_t hi = n * static_cast<std::size_t>(fold + 1) / static_cast<std::size_t>(cv_folds);
        std::vector<std::vector<double>> train_x;
        std::vector<double> train_y;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= lo && i < hi) continue;
            train_x.push_back(rows[i]);
            train_y.push_back(targets[i]);
        }
        if (train_x.empty()) continue;
        Rng rng(0); // the all-features sampler consumes no randomness
        RegressionTree fold_tree = grow_tree(train_x, train_y, params, sampler, rng);
        // Candidates ascend, so the nested pruning sequence is continued
        // incrementally instead of re-pruned from scratch per candidate.
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            detail::collapse_to_alpha(fold_tree, candidates[c]);
            for (std::size_t i = lo; i < hi; ++i) {
                const double err = fold_tree.predict(rows[i]) - targets[i];
                cv_sse[c] += err * err;
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t c = 1; c < candidates.size(); ++c)
        if (cv_sse[c] <= cv_sse[best]) best = c; // <=: ties prefer larger alpha
    return prune_at_alpha(tree, candidates[best]);
}

} // namespace windml
