#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tripa {

// Prefix-sum (Fenwick) tree over nonnegative integer weights, indexed by
// insertion order. Supports append, point increment and cumulative-weight
// search, all O(log n). Elements are never removed.
class FenwickTree {
public:
    std::size_t size() const { return tree_.size(); }
    std::uint64_t total() const { return total_; }

    void append(std::uint64_t weight) {
        const std::size_t i = tree_.size() + 1;  // 1-based position
        // node i covers (i - lowbit(i), i]
        std::uint64_t node = weight + prefix_1based(i - 1) - prefix_1based(i - lowbit(i));
        tree_.push_back(node);
        total_ += weight;
    }

    void add(std::size_t index, std::uint64_t delta) {
        for (std::size_t i = index + 1; i <= tree_.size(); i += lowbit(i))
            tree_[i - 1] += delta;
        total_ += delta;
    }

    // sum of weights of elements [0, count)
    std::uint64_t prefix(std::size_t count) const { return prefix_1based(count); }

    std::uint64_t value(std::size_t index) const {
        return prefix(index + 1) - prefix(index);
    }

    // smallest index whose inclusive prefix sum exceeds target; pre: target < total()
    std::size_t find(std::uint64_t target) const {
        if (target >= total_) throw std::out_of_range("FenwickTree::find: target >= total");
        std::size_t pos = 0;
        std::size_t step = 1;
        while ((step << 1) <= tree_.size()) step <<= 1;
        for (; step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next <= tree_.size() && tree_[next - 1] <= target) {
                target -= tree_[next - 1];
                pos = next;
            }
        }
        return pos;  // 0-based element index
    }

private:
    static std::size_t lowbit(std::size_t i) { return i & (~i + 1); }

    std::uint64_t prefix_1based(std::size_t i) const {
        std::uint64_t sum = 0;
        for (; i > 0; i -= lowbit(i)) sum += tree_[i - 1];
        return sum;
    }

    std::vector<std::uint64_t> tree_;
    std::uint64_t total_ = 0;
};

}  // namespace tripa
