#pragma once

// Rank-1 lattice rules over N = 2^m nodes, in exact integer arithmetic.
//
// Node j of a rule with generating vector z has coordinates (j * z_i mod 2^m)
// / 2^m. Because N is a power of two, all products are taken with wrapping
// 64-bit multiplication and masked: 2^m divides 2^64, so the low m bits of the
// wrapped product are exactly (j * z_i) mod 2^m.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "latshift/dyadic.hpp"

namespace latshift {

/// Integer generating vector z, stored reduced mod 2^depth. Every component
/// is odd, which for a power-of-two node count is exactly gcd(z_i, N) = 1.
class GeneratingVector {
 public:
  GeneratingVector(std::vector<std::uint64_t> components, unsigned depth);

  [[nodiscard]] std::size_t dimension() const { return z_.size(); }
  [[nodiscard]] unsigned depth() const { return depth_; }
  [[nodiscard]] std::span<const std::uint64_t> components() const { return z_; }
  [[nodiscard]] std::uint64_t operator[](std::size_t i) const { return z_[i]; }

  /// The same vector reduced to a shallower modulus 2^depth.
  [[nodiscard]] GeneratingVector reduced(unsigned depth) const;

  /// The first d components.
  [[nodiscard]] GeneratingVector prefix(std::size_t d) const;

  friend bool operator==(const GeneratingVector&, const GeneratingVector&) = default;

 private:
  std::vector<std::uint64_t> z_;
  unsigned depth_;
};

/// (base^exp) mod 2^bits by square-and-multiply.
std::uint64_t pow_mod_pow2(std::uint64_t base, std::uint64_t exp, unsigned bits);

/// Korobov vector (1, ell, ell^2, ..., ell^(s-1)) mod 2^t. ell must be odd.
GeneratingVector korobov_vector(std::uint64_t ell, std::size_t s, unsigned t);

/// Qf = 2^-m sum_j f({j z / 2^m}).
class Rank1Rule {
 public:
  Rank1Rule(unsigned m, GeneratingVector z);

  [[nodiscard]] unsigned m() const { return m_; }
  [[nodiscard]] std::uint64_t size() const { return std::uint64_t{1} << m_; }
  [[nodiscard]] std::size_t dimension() const { return z_.dimension(); }
  [[nodiscard]] const GeneratingVector& z() const { return z_; }

  /// Numerator of coordinate i of node j over 2^m. No range check.
  [[nodiscard]] std::uint64_t coordinate(std::uint64_t j, std::size_t i) const {
    return (j * z_[i]) & low_mask(m_);
  }

  [[nodiscard]] DyadicPoint node(std::uint64_t j) const;

 private:
  unsigned m_;
  GeneratingVector z_;
};

/// A 2^m-point rule embedded in the 2^(m+sr)-point rule with the same z.
/// Base node j is extended node j * 2^sr.
class EmbeddedPair {
 public:
  EmbeddedPair(unsigned m, unsigned sr, GeneratingVector z);

  [[nodiscard]] unsigned m() const { return m_; }
  [[nodiscard]] unsigned sr() const { return sr_; }
  [[nodiscard]] unsigned extended_depth() const { return m_ + sr_; }
  [[nodiscard]] std::size_t dimension() const { return z_.dimension(); }
  [[nodiscard]] const GeneratingVector& z() const { return z_; }

  [[nodiscard]] Rank1Rule base_rule() const;
  [[nodiscard]] Rank1Rule extended_rule() const;

  /// Numerator of coordinate i of extended node k over 2^(m+sr). No range check.
  [[nodiscard]] std::uint64_t coordinate(std::uint64_t k, std::size_t i) const {
    return (k * z_[i]) & low_mask(m_ + sr_);
  }

  [[nodiscard]] DyadicPoint extended_node(std::uint64_t k) const;

  /// Node {(j + wnum/2^sr) z / 2^m}, i.e. extended node 2^sr * j + wnum.
  [[nodiscard]] DyadicPoint coset_node(std::uint64_t j, std::uint64_t wnum) const;

 private:
  unsigned m_;
  unsigned sr_;
  GeneratingVector z_;
};

}  // namespace latshift
