#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace finsheaf {

/// Maximum number of points in any space (subsets are 64-bit masks).
inline constexpr std::size_t kMaxPoints = 64;

/// A subset of the points of a finite space, as a bitmask over point indices.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  static constexpr Subset singleton(std::size_t i) { return Subset{std::uint64_t{1} << i}; }
  static constexpr Subset first(std::size_t n) {
    return Subset{n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1};
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t i) const { return (bits_ >> i) & 1U; }
  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(Subset other) const { return (bits_ & other.bits_) != 0; }

  constexpr Subset with(std::size_t i) const { return Subset{bits_ | (std::uint64_t{1} << i)}; }
  constexpr Subset without(std::size_t i) const { return Subset{bits_ & ~(std::uint64_t{1} << i)}; }

  constexpr Subset operator|(Subset o) const { return Subset{bits_ | o.bits_}; }
  constexpr Subset operator&(Subset o) const { return Subset{bits_ & o.bits_}; }
  constexpr Subset operator-(Subset o) const { return Subset{bits_ & ~o.bits_}; }
  constexpr Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  constexpr Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }

  constexpr bool operator==(const Subset&) const = default;
  // Canonical order: by cardinality, then by mask value.
  constexpr std::strong_ordering operator<=>(const Subset& o) const {
    if (auto c = size() <=> o.size(); c != 0) return c;
    return bits_ <=> o.bits_;
  }

  /// Lowest member index; undefined on the empty set.
  constexpr std::size_t lowest() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }

  template <class F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<std::size_t>(std::countr_zero(b)));
  }

  std::vector<std::size_t> members() const {
    std::vector<std::size_t> out;
    out.reserve(size());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

 private:
  std::uint64_t bits_ = 0;
};

}  // namespace finsheaf

template <>
struct std::hash<finsheaf::Subset> {
  std::size_t operator()(finsheaf::Subset s) const noexcept { return std::hash<std::uint64_t>{}(s.bits()); }
};
