#pragma once

// Dual-lattice sums for rank-1 rules.
//
// The dual lattice of the rule with node count N and generating vector z is
// L = { h in Z^s : h . z = 0 mod N }. For a shift c,
//
//   Q_c f - If = sum'_{h in L} exp(2 pi i h.c) f^(h)
//
// (the prime drops h = 0). Averaging over a uniform shift u gives the
// moments of y = Q_u f:
//
//   E (y - If)^2 = sum'_h |f^(h)|^2
//   E (y - If)^3 = sum'_h f^(h) sum'_{k != h} conj f^(k) conj f^(h - k)
//
// All infinite sums are truncated to the box |h_i| <= H.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latshift/lattice.hpp"
#include "latshift/periodic.hpp"

namespace latshift {

struct TruncationBox {
  std::int64_t H = 1;

  explicit TruncationBox(std::int64_t bound);
  [[nodiscard]] bool contains(std::span<const std::int64_t> h) const;
};

struct DualIndex {
  std::vector<std::int64_t> h;

  friend bool operator==(const DualIndex&, const DualIndex&) = default;
  friend auto operator<=>(const DualIndex&, const DualIndex&) = default;
};

/// True when h . z = 0 mod 2^m.
bool is_dual(const Rank1Rule& rule, std::span<const std::int64_t> h);

/// Inverse of an odd a modulo 2^bits.
std::uint64_t inverse_mod_pow2(std::uint64_t a, unsigned bits);

/// Every nonzero dual point in the box, in lexicographic order. h_1..h_{s-1}
/// range over the box; h_s is solved from the congruence using the inverse of
/// the (odd) last component of z and then stepped by N.
std::vector<DualIndex> dual_points(const Rank1Rule& rule, TruncationBox box);

template <class T>
struct SeriesResult {
  T value{};
  /// Bound on the contribution of frequencies outside the box, when the
  /// integrand provides one.
  std::optional<double> tail_bound;
  std::int64_t H = 0;
};

/// Truncated sum' exp(2 pi i h.c) f^(h): the error Q_c f - If.
SeriesResult<std::complex<double>> shift_error_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                                      std::span<const double> shift, TruncationBox box);

/// Truncated sum' |f^(h)|^2: the variance of the idealized shifted rule.
SeriesResult<double> cp_variance_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                        TruncationBox box);

/// Variance of the idealized shifted rule from the autocorrelation closed
/// form, (1/N) sum_j A(x_j) - 1. Independent of the dual enumeration.
double cp_variance_closed_form(const Rank1Rule& rule, const ProductBernoulli& f);

/// Truncated third central moment of the idealized shifted rule. The pairs
/// (h, k) range over nonzero box duals with k != h and h - k inside the box.
SeriesResult<double> third_moment_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                         TruncationBox box);

/// Cumulants of one replicate (q = 1) or of a mean of q replicates.
struct CumulantSet {
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double kappa4 = 0.0;
  std::uint64_t q = 1;

  [[nodiscard]] double mu2() const { return kappa2; }
  [[nodiscard]] double mu3() const { return kappa3; }
  [[nodiscard]] double mu4() const { return kappa4 + 3.0 * kappa2 * kappa2; }
};

/// Cumulants of the mean of q iid copies: kappa_r / q^(r-1).
CumulantSet mean_cumulants(const CumulantSet& single, std::uint64_t q);

}  // namespace latshift
