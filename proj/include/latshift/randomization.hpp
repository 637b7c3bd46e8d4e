#pragma once

// Randomized rank-1 rules and the bit codecs that feed them.
//
//   grid shift    Q_v f  = 2^-m sum_j f({j z / 2^m + v}),  v in (2^-r Z)^s
//   scalar shift  Q'_w f = 2^-m sum_j f({(j + w) z / 2^m}), w in 2^-sr Z
//   ideal shift   Q_u f  = 2^-m sum_j f({j z / 2^m + u}),  u in [0,1)^s
//
// Both finite schemes consume r*s bits per replicate. Grid and scalar nodes
// are formed exactly as integers; only the ideal shift uses floating-point
// fractional parts.
//
// Every evaluator sums f(x) - c, where c is the integrand's known integral
// (0 if unknown), over the chunked reduction in parallel.hpp, and returns
// c + sum / N. The *_deviation variants return sum / N without adding c back.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "latshift/bitsource.hpp"
#include "latshift/lattice.hpp"
#include "latshift/periodic.hpp"

namespace latshift {

/// b_1 ... b_{rs}, most significant first within each r-bit group.
class BitString {
 public:
  BitString(Bits bits, unsigned r, std::size_t s);

  [[nodiscard]] const Bits& bits() const { return bits_; }
  [[nodiscard]] unsigned r() const { return r_; }
  [[nodiscard]] std::size_t s() const { return s_; }
  [[nodiscard]] std::size_t size() const { return bits_.size(); }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  Bits bits_;
  unsigned r_;
  std::size_t s_;
};

/// v_i = nums[i] / 2^r.
struct GridShift {
  unsigned r = 0;
  std::vector<std::uint64_t> nums;

  void validate() const;
  friend bool operator==(const GridShift&, const GridShift&) = default;
};

/// w = wnum / 2^sr.
struct ScalarShift {
  unsigned sr = 0;
  std::uint64_t wnum = 0;

  void validate() const;
  [[nodiscard]] double value() const;
  friend bool operator==(const ScalarShift&, const ScalarShift&) = default;
};

/// Idealized continuous shift u in [0,1)^s.
struct RealShift {
  std::vector<double> u;

  void validate() const;
};

using ShiftSpec = std::variant<RealShift, GridShift, ScalarShift>;

enum class Scheme { Ideal, Grid, Scalar };

/// Coordinate k takes bits (k-1)r+1 ... kr, most significant first.
GridShift bits_to_grid_shift(const BitString& bits);
BitString grid_shift_to_bits(const GridShift& v);

/// w = .b_1 ... b_sr.
ScalarShift bits_to_scalar_shift(const BitString& bits);
BitString scalar_shift_to_bits(const ScalarShift& w, unsigned r, std::size_t s);

/// The constant subtracted from every term: If when known, else 0.
double integral_offset(const PeriodicFunction& f);

/// Plain rule Qf.
double eval_rule(const Rank1Rule& rule, const PeriodicFunction& f);
double rule_deviation(const Rank1Rule& rule, const PeriodicFunction& f);

/// Q_v f. Node and shift are added exactly at depth max(m, r).
double eval_grid_shifted(const Rank1Rule& rule, const PeriodicFunction& f, const GridShift& v);
double grid_shifted_deviation(const Rank1Rule& rule, const PeriodicFunction& f, const GridShift& v);

/// Q'_w f, evaluated on the coset nodes of the extended rule.
double eval_scalar_shifted(const EmbeddedPair& pair, const PeriodicFunction& f, const ScalarShift& w);
double scalar_shifted_deviation(const EmbeddedPair& pair, const PeriodicFunction& f,
                                const ScalarShift& w);

/// Q_u f with floating-point fractional parts. This is the idealized
/// estimator; it cannot be realized from finitely many random bits.
double eval_real_shifted(const Rank1Rule& rule, const PeriodicFunction& f, const RealShift& u);

/// Consumes the bits for one replicate of `scheme` from `src`: r*s bits for
/// grid and scalar shifts, 53*s bits for an ideal shift (u_i = n_i / 2^53).
ShiftSpec draw_shift(BitSource& src, Scheme scheme, std::size_t s, unsigned r);

/// Bits consumed by draw_shift for one replicate.
std::uint64_t bits_per_replicate(Scheme scheme, std::size_t s, unsigned r);

struct ReplicateEstimate {
  std::vector<double> values;
  double mean = 0.0;
  /// Sample standard deviation with divisor q-1; absent when q = 1.
  std::optional<double> sd;

  [[nodiscard]] std::size_t q() const { return values.size(); }
};

/// y_k = evaluator(shift_k); ybar = (1/q) sum y_k.
ReplicateEstimate estimate_mean(const std::function<double(const ShiftSpec&)>& evaluator,
                                std::span<const ShiftSpec> shifts);

/// Evaluator for `scheme` against a Korobov-style embedded pair. Grid and
/// ideal schemes use the base rule; the scalar scheme uses the pair.
std::function<double(const ShiftSpec&)> make_evaluator(const EmbeddedPair& pair,
                                                       const PeriodicFunction& f);

}  // namespace latshift
