#pragma once

#include <bit>
#include <cstdint>
#include <iterator>
#include <vector>

namespace lbg {

/// Set of graph node indices (0..63) as a bitmask.
class NodeSet {
public:
    constexpr NodeSet() = default;
    constexpr explicit NodeSet(std::uint64_t bits)
        : bits_(bits)
    {
    }

    static constexpr NodeSet single(int i) { return NodeSet(std::uint64_t{1} << i); }
    static constexpr NodeSet first(int k) { return NodeSet(k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1); }

    [[nodiscard]] constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
    constexpr void insert(int i) { bits_ |= std::uint64_t{1} << i; }
    constexpr void erase(int i) { bits_ &= ~(std::uint64_t{1} << i); }
    [[nodiscard]] constexpr int size() const { return std::popcount(bits_); }
    [[nodiscard]] constexpr bool empty() const { return bits_ == 0; }
    [[nodiscard]] constexpr bool subset_of(NodeSet o) const { return (bits_ & ~o.bits_) == 0; }
    [[nodiscard]] constexpr bool disjoint(NodeSet o) const { return (bits_ & o.bits_) == 0; }
    [[nodiscard]] constexpr std::uint64_t bits() const { return bits_; }
    /// Smallest element; undefined on an empty set.
    [[nodiscard]] constexpr int front() const { return std::countr_zero(bits_); }

    constexpr NodeSet operator|(NodeSet o) const { return NodeSet(bits_ | o.bits_); }
    constexpr NodeSet operator&(NodeSet o) const { return NodeSet(bits_ & o.bits_); }
    constexpr NodeSet operator-(NodeSet o) const { return NodeSet(bits_ & ~o.bits_); }
    constexpr NodeSet& operator|=(NodeSet o) { bits_ |= o.bits_; return *this; }
    constexpr friend bool operator==(NodeSet, NodeSet) = default;

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = int;
        using difference_type = std::ptrdiff_t;
        using pointer = void;
        using reference = int;

        constexpr iterator() = default;
        constexpr explicit iterator(std::uint64_t rest) : rest_(rest) {}
        constexpr int operator*() const { return std::countr_zero(rest_); }
        constexpr iterator& operator++() { rest_ &= rest_ - 1; return *this; }
        constexpr iterator operator++(int) { auto t = *this; ++*this; return t; }
        constexpr friend bool operator==(iterator, iterator) = default;

    private:
        std::uint64_t rest_ = 0;
    };

    [[nodiscard]] constexpr iterator begin() const { return iterator(bits_); }
    [[nodiscard]] constexpr iterator end() const { return iterator(0); }

    [[nodiscard]] std::vector<int> to_vector() const { return {begin(), end()}; }

private:
    std::uint64_t bits_ = 0;
};

} // namespace lbg
