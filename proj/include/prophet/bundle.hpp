#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace prophet {

// A subset of the item universe {0..m-1}, stored as a bitmask. The universe
// size is carried by the owning valuation or instance; bundles themselves
// support up to 31 items.
class Bundle {
public:
    static constexpr int kMaxItems = 31;

    constexpr Bundle() = default;
    constexpr explicit Bundle(std::uint32_t bits) : bits_(bits) {}

    static Bundle full(int num_items)
    {
        if (num_items < 0 || num_items > kMaxItems)
            throw std::out_of_range("Bundle::full: universe size out of range");
        return Bundle(num_items == 0 ? 0u : ((1u << num_items) - 1u));
    }

    static Bundle single(int item)
    {
        if (item < 0 || item >= kMaxItems)
            throw std::out_of_range("Bundle::single: item index out of range");
        return Bundle(1u << item);
    }

    static Bundle of(std::initializer_list<int> items)
    {
        Bundle b;
        for (int j : items) b = b.with(j);
        return b;
    }

    static Bundle from_items(const std::vector<int>& items)
    {
        Bundle b;
        for (int j : items) b = b.with(j);
        return b;
    }

    constexpr std::uint32_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }

    constexpr bool contains(int item) const
    {
        return item >= 0 && item < kMaxItems && (bits_ >> item & 1u) != 0;
    }

    constexpr bool subset_of(Bundle other) const { return (bits_ & ~other.bits_) == 0; }
    constexpr bool intersects(Bundle other) const { return (bits_ & other.bits_) != 0; }

    Bundle with(int item) const
    {
        if (item < 0 || item >= kMaxItems)
            throw std::out_of_range("Bundle::with: item index out of range");
        return Bundle(bits_ | (1u << item));
    }

    Bundle without(int item) const
    {
        if (item < 0 || item >= kMaxItems)
            throw std::out_of_range("Bundle::without: item index out of range");
        return Bundle(bits_ & ~(1u << item));
    }

    constexpr Bundle operator|(Bundle o) const { return Bundle(bits_ | o.bits_); }
    constexpr Bundle operator&(Bundle o) const { return Bundle(bits_ & o.bits_); }
    // set difference
    constexpr Bundle operator-(Bundle o) const { return Bundle(bits_ & ~o.bits_); }

    constexpr bool operator==(const Bundle&) const = default;

    // members in ascending index order
    std::vector<int> items() const
    {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint32_t rest = bits_; rest != 0; rest &= rest - 1)
            out.push_back(std::countr_zero(rest));
        return out;
    }

    std::string to_string() const
    {
        std::string s = "{";
        bool first = true;
        for (int j : items()) {
            if (!first) s += ",";
            s += std::to_string(j);
            first = false;
        }
        return s + "}";
    }

private:
    std::uint32_t bits_ = 0;
};

// Iterates all subsets of `ground`, in increasing bitmask order.
template <typename Fn>
void for_each_subset(Bundle ground, Fn&& fn)
{
    const std::uint32_t g = ground.bits();
    std::uint32_t sub = 0;
    while (true) {
        fn(Bundle(sub));
        if (sub == g) break;
        sub = (sub - g) & g;  // next submask above `sub`
    }
}

}  // namespace prophet
