#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace windml {

struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0; // half-open
    std::size_t size() const { return end - begin; }
};

// Temporal split: training is the earliest contiguous range, test blocks
// are the subsequent contiguous equal-length ranges in time order.
// Contiguity avoids leaking temporal correlation into the test sets.
struct SplitPlan {
    IndexRange training;
    std::vector<IndexRange> test_blocks;
};

inline SplitPlan make_split_plan(std::size_t n_rows, std::size_t train_size, std::size_t n_blocks,
                                 std::size_t block_size) {
    if (train_size + n_blocks * block_size > n_rows)
        throw std::invalid_argument("make_split_plan: insufficient rows");
    if (train_size == 0 || n_blocks == 0 || block_size == 0)
        throw std::invalid_argument("make_split_plan: sizes must be positive");
    SplitPlan plan;
    plan.training = {0, train_size};
    for (std::size_t k = 0; k < n_blocks; ++k) {
        const std::size_t begin = train_size + k * block_size;
        plan.test_blocks.push_back({begin, begin + block_size});
    }
    return plan;
}

} // namespace windml
