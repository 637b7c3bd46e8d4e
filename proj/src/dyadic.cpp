#include "latshift/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "latshift/error.hpp"

namespace latshift {

DyadicPoint::DyadicPoint(unsigned depth, std::vector<std::uint64_t> nums)
    : depth_(depth), nums_(std::move(nums)) {
  if (depth_ > kMaxDepth) {
    throw ValidationError("dyadic depth " + std::to_string(depth_) + " exceeds " +
                          std::to_string(kMaxDepth));
  }
  const std::uint64_t limit = std::uint64_t{1} << depth_;
  for (std::uint64_t n : nums_) {
    if (n >= limit) throw ValidationError("dyadic numerator out of range [0, 2^depth)");
  }
}

DyadicPoint DyadicPoint::zero(std::size_t dimension, unsigned depth) {
  return DyadicPoint(depth, std::vector<std::uint64_t>(dimension, 0));
}

double DyadicPoint::coordinate(std::size_t i) const {
  return std::ldexp(static_cast<double>(nums_[i]), -static_cast<int>(depth_));
}

std::vector<double> DyadicPoint::to_doubles() const {
  std::vector<double> out(nums_.size());
  to_doubles(out);
  return out;
}

void DyadicPoint::to_doubles(std::span<double> out) const {
  for (std::size_t i = 0; i < nums_.size(); ++i) out[i] = coordinate(i);
}

DyadicPoint DyadicPoint::rescaled(unsigned depth) const {
  if (depth < depth_) throw ValidationError("cannot rescale a dyadic point to a coarser depth");
  std::vector<std::uint64_t> nums(nums_);
  for (auto& n : nums) n <<= (depth - depth_);
  return DyadicPoint(depth, std::move(nums));
}

DyadicPoint DyadicPoint::reflected() const {
  const std::uint64_t mask = low_mask(depth_);
  std::vector<std::uint64_t> nums(nums_);
  for (auto& n : nums) n = (std::uint64_t{0} - n) & mask;
  return DyadicPoint(depth_, std::move(nums));
}

DyadicPoint operator+(const DyadicPoint& a, const DyadicPoint& b) {
  if (a.dimension() != b.dimension()) throw ValidationError("dyadic addition: dimension mismatch");
  const unsigned depth = std::max(a.depth(), b.depth());
  const std::uint64_t mask = low_mask(depth);
  std::vector<std::uint64_t> nums(a.dimension());
  for (std::size_t i = 0; i < nums.size(); ++i) {
    nums[i] = ((a[i] << (depth - a.depth())) + (b[i] << (depth - b.depth()))) & mask;
  }
  return DyadicPoint(depth, std::move(nums));
}

bool same_point(const DyadicPoint& a, const DyadicPoint& b) {
  if (a.dimension() != b.dimension()) return false;
  const unsigned depth = std::max(a.depth(), b.depth());
  return a.rescaled(depth) == b.rescaled(depth);
}

}  // namespace latshift
