#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace latshift {

/// Deepest supported denominator 2^t. Every numerator/2^t with t <= 53 is an
/// exact binary64 value.
inline constexpr unsigned kMaxDepth = 53;

/// Low `bits` bits set.
constexpr std::uint64_t low_mask(unsigned bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

/// A point of [0,1)^s whose coordinates are nums[i] / 2^depth.
class DyadicPoint {
 public:
  DyadicPoint(unsigned depth, std::vector<std::uint64_t> nums);

  static DyadicPoint zero(std::size_t dimension, unsigned depth);

  [[nodiscard]] std::size_t dimension() const { return nums_.size(); }
  [[nodiscard]] unsigned depth() const { return depth_; }
  [[nodiscard]] std::span<const std::uint64_t> numerators() const { return nums_; }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const { return nums_[i]; }

  /// Coordinate i as a double (exact).
  [[nodiscard]] double coordinate(std::size_t i) const;
  [[nodiscard]] std::vector<double> to_doubles() const;
  void to_doubles(std::span<double> out) const;

  /// Same point over the finer denominator 2^depth (depth >= this->depth()).
  [[nodiscard]] DyadicPoint rescaled(unsigned depth) const;

  /// Coordinate-wise 1 - x (mod 1).
  [[nodiscard]] DyadicPoint reflected() const;

  /// Exact representation equality (same depth and numerators).
  friend bool operator==(const DyadicPoint&, const DyadicPoint&) = default;

 private:
  unsigned depth_;
  std::vector<std::uint64_t> nums_;
};

/// Coordinate-wise addition mod 1 at depth max(a.depth(), b.depth()).
DyadicPoint operator+(const DyadicPoint& a, const DyadicPoint& b);

/// True when a and b denote the same point of [0,1)^s, regardless of depth.
bool same_point(const DyadicPoint& a, const DyadicPoint& b);

}  // namespace latshift
