#pragma once

#include <bit>
#include <cstdint>
#include <vector>

namespace blform {

// Subset of a ground set of at most 64 elements, element i <-> bit i.
struct SubsetMask {
    std::uint64_t bits = 0;

    constexpr SubsetMask() = default;
    constexpr explicit SubsetMask(std::uint64_t b) : bits(b) {}

    static SubsetMask from_indices(const std::vector<std::size_t>& indices) {
        SubsetMask s;
        for (std::size_t i : indices) s.bits |= (std::uint64_t{1} << i);
        return s;
    }

    static constexpr SubsetMask full(std::size_t m) {
        return SubsetMask(m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1);
    }

    constexpr bool test(std::size_t i) const { return (bits >> i) & 1; }
    constexpr std::size_t count() const { return static_cast<std::size_t>(std::popcount(bits)); }
    constexpr bool empty() const { return bits == 0; }

    constexpr SubsetMask with(std::size_t i) const { return SubsetMask(bits | (std::uint64_t{1} << i)); }
    constexpr SubsetMask without(std::size_t i) const { return SubsetMask(bits & ~(std::uint64_t{1} << i)); }

    constexpr bool contains(SubsetMask other) const { return (other.bits & ~bits) == 0; }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        out.reserve(count());
        for (std::uint64_t b = bits; b != 0; b &= b - 1)
            out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
        return out;
    }

    friend constexpr SubsetMask operator|(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits | b.bits); }
    friend constexpr SubsetMask operator&(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits & b.bits); }
    friend constexpr SubsetMask operator-(SubsetMask a, SubsetMask b) { return SubsetMask(a.bits & ~b.bits); }
    friend constexpr bool operator==(SubsetMask a, SubsetMask b) { return a.bits == b.bits; }
    friend constexpr bool operator<(SubsetMask a, SubsetMask b) { return a.bits < b.bits; }
};

}  // namespace blform
