#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "windml/common/rng.hpp"
#include "windml/ensemble/tree.hpp"

namespace windml {

// Bagged ensemble of unpruned trees. Bagging is the mtry = p special case;
// smaller mtry gives a random forest.
struct Forest {
    std::vector<RegressionTree> trees;
    int b = 0;    // tree count
    int mtry = 0; // candidate variables per split
    bool bootstrap = true;
    std::uint64_t master_seed = 0;

    double predict(std::span<const double> features) const {
        if (trees.empty()) throw std::logic_error("Forest::predict: empty forest");
        double sum = 0.0;
        for (const auto& t : trees) sum += t.predict(features);
        return sum / static_cast<double>(trees.size());
    }
};

// Grows b unpruned trees, each on its own bootstrap resample (n draws with
// replacement) when bootstrap is on, otherwise on the full data. Tree i uses
// the RNG stream derived from (master_seed, i), so the result is identical
// under any parallel schedule. Per-tree draw order: bootstrap indices first,
// then per-node feature subsets.
inline Forest fit_forest(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& targets, int b, int mtry, bool bootstrap,
                         std::uint64_t master_seed, TreeParams params = {}, int jobs = 1) {
    if (b < 1) throw std::invalid_argument("fit_forest: b must be >= 1");
    const int p = static_cast<int>(rows.front().size());
    if (mtry < 1 || mtry > p) throw std::invalid_argument("fit_forest: need 1 <= mtry <= p");

    Forest forest;
    forest.b = b;
    forest.mtry = mtry;
    forest.bootstrap = bootstrap;
    forest.master_seed = master_seed;
    forest.trees.resize(static_cast<std::size_t>(b));

    const auto sampler = mtry_sampler(p, mtry);
    const std::size_t n = rows.size();

    auto grow_one = [&](int i) {
        Rng rng = Rng::stream(master_seed, static_cast<std::uint64_t>(i));
        if (bootstrap) {
            std::vector<std::vector<double>> bx(n);
            std::vector<double> by(n);
            for (std::size_t k = 0; k < n; ++k) {
                const auto idx = static_cast<std::size_t>(rng.next_below(n));
                bx[k] = rows[idx];
                by[k] = targets[idx];
            }
            forest.trees[static_cast<std::size_t>(i)] = grow_tree(bx, by, params, sampler, rng);
        } else {
            forest.trees[static_cast<std::size_t>(i)] = grow_tree(rows, targets, params, sampler, rng);
        }
    };

    if (jobs <= 1) {
        for (int i = 0; i < b; ++i) grow_one(i);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w)
            workers.emplace_back([&, w] {
                for (int i = w; i < b; i += jobs) grow_one(i);
            });
        for (auto& t : workers) t.join();
    }
    return forest;
}

inline double predict_forest(const Forest& forest, std::span<const double> features) {
    return forest.predict(features);
}

} // namespace windml
