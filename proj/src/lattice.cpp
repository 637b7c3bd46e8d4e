#include "latshift/lattice.hpp"

#include <string>

#include "latshift/error.hpp"

namespace latshift {

GeneratingVector::GeneratingVector(std::vector<std::uint64_t> components, unsigned depth)
    : z_(std::move(components)), depth_(depth) {
  if (z_.empty()) throw ValidationError("generating vector must have at least one component");
  if (depth_ < 1 || depth_ > kMaxDepth) {
    throw ValidationError("generating vector depth must lie in [1, " + std::to_string(kMaxDepth) +
                          "]");
  }
  for (auto& c : z_) {
    c &= low_mask(depth_);
    if ((c & 1U) == 0) {
      throw ValidationError("generating vector component " + std::to_string(c) +
                            " is even; every component must be odd");
    }
  }
}

GeneratingVector GeneratingVector::reduced(unsigned depth) const {
  if (depth > depth_) throw ValidationError("cannot reduce a generating vector to a finer modulus");
  return GeneratingVector(z_, depth);
}

GeneratingVector GeneratingVector::prefix(std::size_t d) const {
  if (d == 0 || d > z_.size()) throw ValidationError("generating vector prefix length out of range");
  return GeneratingVector(std::vector<std::uint64_t>(z_.begin(), z_.begin() + static_cast<long>(d)),
                          depth_);
}

std::uint64_t pow_mod_pow2(std::uint64_t base, std::uint64_t exp, unsigned bits) {
  const std::uint64_t mask = low_mask(bits);
  std::uint64_t result = 1 & mask;
  base &= mask;
  while (exp != 0) {
    if (exp & 1U) result = (result * base) & mask;
    base = (base * base) & mask;
    exp >>= 1;
  }
  return result;
}

GeneratingVector korobov_vector(std::uint64_t ell, std::size_t s, unsigned t) {
  if (ell == 0 || (ell & 1U) == 0) {
    throw ValidationError("Korobov parameter must be odd and positive, got " + std::to_string(ell));
  }
  if (s < 1) throw ValidationError("dimension must be at least 1");
  if (t < 1) throw ValidationError("bit depth must be at least 1");
  std::vector<std::uint64_t> z(s);
  for (std::size_t i = 0; i < s; ++i) z[i] = pow_mod_pow2(ell, i, t);
  return GeneratingVector(std::move(z), t);
}

Rank1Rule::Rank1Rule(unsigned m, GeneratingVector z) : m_(m), z_(std::move(z)) {
  if (m_ > z_.depth()) {
    throw ValidationError("rule resolution m=" + std::to_string(m_) +
                          " exceeds the generating vector's modulus depth " +
                          std::to_string(z_.depth()));
  }
}

DyadicPoint Rank1Rule::node(std::uint64_t j) const {
  if (j >= size()) throw ValidationError("node index out of range [0, 2^m)");
  std::vector<std::uint64_t> nums(dimension());
  for (std::size_t i = 0; i < nums.size(); ++i) nums[i] = coordinate(j, i);
  return DyadicPoint(m_, std::move(nums));
}

EmbeddedPair::EmbeddedPair(unsigned m, unsigned sr, GeneratingVector z)
    : m_(m), sr_(sr), z_(std::move(z)) {
  if (m_ + sr_ > z_.depth()) {
    throw ValidationError("extended resolution m+sr=" + std::to_string(m_ + sr_) +
                          " exceeds the generating vector's modulus depth " +
                          std::to_string(z_.depth()));
  }
}

Rank1Rule EmbeddedPair::base_rule() const { return Rank1Rule(m_, z_); }

Rank1Rule EmbeddedPair::extended_rule() const { return Rank1Rule(m_ + sr_, z_); }

DyadicPoint EmbeddedPair::extended_node(std::uint64_t k) const {
  if (k >= (std::uint64_t{1} << (m_ + sr_))) {
    throw ValidationError("extended node index out of range [0, 2^(m+sr))");
  }
  std::vector<std::uint64_t> nums(dimension());
  for (std::size_t i = 0; i < nums.size(); ++i) nums[i] = coordinate(k, i);
  return DyadicPoint(m_ + sr_, std::move(nums));
}

DyadicPoint EmbeddedPair::coset_node(std::uint64_t j, std::uint64_t wnum) const {
  if (j >= (std::uint64_t{1} << m_)) throw ValidationError("base index out of range [0, 2^m)");
  if (wnum >= (std::uint64_t{1} << sr_)) throw ValidationError("shift numerator out of range [0, 2^sr)");
  return extended_node((j << sr_) + wnum);
}

}  // namespace latshift
