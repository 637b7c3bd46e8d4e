#pragma once

// Exact moments of the finite randomizations, by enumerating every shift.
//
// For a grid shift with r >= m, the mean of Q_v f is the product-rectangle
// rule on the 2^(rs)-point grid (each shifted node is itself uniform on the
// grid). For the scalar shift, the mean of Q'_w f is the extended rule with
// 2^(m+sr) nodes (the cosets j*2^sr + wnum tile the extended index range).
// Each report carries that identity as an independent cross-check of the
// enumerated mean.

#include <cstdint>
#include <optional>
#include <string>

#include "latshift/lattice.hpp"
#include "latshift/periodic.hpp"

namespace latshift {

/// Largest shift space (or node set) enumerated, as a power of two.
inline constexpr unsigned kMaxEnumerationBits = 26;

enum class ShiftScheme { GridShift, ScalarShift };
enum class MomentMethod { Enumeration, Identity, ClosedForm };

std::string to_string(ShiftScheme scheme);
std::string to_string(MomentMethod method);

struct CrossCheck {
  MomentMethod method = MomentMethod::Identity;
  std::string description;  // "product-rectangle rule" or "extended rule"
  double reference = 0.0;
  double relative_difference = 0.0;
};

struct MomentReport {
  ShiftScheme scheme = ShiftScheme::GridShift;
  double mean = 0.0;
  /// mean - If; absent when the integral is unknown.
  std::optional<double> bias;
  double variance = 0.0;
  double sd = 0.0;
  /// Third central moment.
  double mu3 = 0.0;
  std::uint64_t shift_space_size = 0;
  MomentMethod method = MomentMethod::Enumeration;
  std::optional<CrossCheck> cross_check;
};

/// All 2^(rs) grid shifts of `rule`. Requires r >= m and rs <= 26.
MomentReport moments_grid_shift(const Rank1Rule& rule, const PeriodicFunction& f, unsigned r);

/// All 2^sr scalar shifts of `pair`. Requires sr <= 26.
MomentReport moments_scalar_shift(const EmbeddedPair& pair, const PeriodicFunction& f);

/// 2^(-sr) sum over the grid {0, 1/2^r, ...}^s of f. Product-form integrands
/// are evaluated one axis at a time; others need s*r <= 26.
double rectangle_rule_mean(const PeriodicFunction& f, unsigned r);

/// Same, always by full grid enumeration.
double rectangle_rule_mean_enumerated(const PeriodicFunction& f, unsigned r);

/// Qf over all 2^(m+sr) extended nodes. Requires m+sr <= 26.
double extended_rule_value(const EmbeddedPair& pair, const PeriodicFunction& f);

/// |a - b| / |b| (absolute difference when b == 0).
double relative_difference(double a, double b);

}  // namespace latshift
