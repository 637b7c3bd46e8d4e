#include "latshift/moments.hpp"

#include <cmath>

#include "latshift/error.hpp"
#include "latshift/kahan.hpp"
#include "latshift/parallel.hpp"
#include "latshift/randomization.hpp"

namespace latshift {

namespace {

void guard_bits(std::uint64_t bits, const char* what) {
  if (bits > kMaxEnumerationBits) {
    throw GuardError(std::string(what) + " needs 2^" + std::to_string(bits) +
                     " evaluations; the enumeration guard is 2^" +
                     std::to_string(kMaxEnumerationBits));
  }
}

// Two-pass central moments of the deviations d(i) = value(i) - offset,
// i in [0, count).
template <class Deviation>
MomentReport enumerate_moments(std::uint64_t count, double offset, std::optional<double> integral,
                               Deviation deviation) {
  const double n = static_cast<double>(count);
  const double mean_dev = chunked_sum(count, deviation) / n;

  // Two accumulators need two passes through chunked_sum; recomputing is
  // cheaper than holding 2^26 values.
  const double m2 = chunked_sum(count, [&](std::uint64_t i) {
                      const double d = deviation(i) - mean_dev;
                      return d * d;
                    }) / n;
  const double m3 = chunked_sum(count, [&](std::uint64_t i) {
                      const double d = deviation(i) - mean_dev;
                      return d * d * d;
                    }) / n;

  MomentReport rep;
  rep.mean = offset + mean_dev;
  if (integral) rep.bias = mean_dev + (offset - *integral);
  rep.variance = m2;
  rep.sd = std::sqrt(m2);
  rep.mu3 = m3;
  rep.shift_space_size = count;
  rep.method = MomentMethod::Enumeration;
  return rep;
}

}  // namespace

std::string to_string(ShiftScheme scheme) {
  return scheme == ShiftScheme::GridShift ? "grid-shift" : "scalar-shift";
}

std::string to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::Enumeration: return "enumeration";
    case MomentMethod::Identity: return "identity";
    case MomentMethod::ClosedForm: return "closed-form";
  }
  return "unknown";
}

double relative_difference(double a, double b) {
  const double diff = std::abs(a - b);
  return b == 0.0 ? diff : diff / std::abs(b);
}

MomentReport moments_grid_shift(const Rank1Rule& rule, const PeriodicFunction& f, unsigned r) {
  if (r < rule.m()) {
    throw GuardError("grid-shift moment analysis requires r >= m (r=" + std::to_string(r) +
                     ", m=" + std::to_string(rule.m()) + ")");
  }
  const std::size_t s = rule.dimension();
  guard_bits(std::uint64_t{r} * s, "grid-shift enumeration");
  if (f.dimension() != s) throw ValidationError("integrand dimension does not match rule");

  const unsigned rs = r * static_cast<unsigned>(s);
  const std::uint64_t mask = low_mask(r);
  auto deviation = [&](std::uint64_t index) {
    thread_local GridShift v;
    v.r = r;
    v.nums.resize(s);
    // Shift index = b_1 ... b_rs read as a binary number; coordinate k owns
    // the k-th r-bit group from the top.
    for (std::size_t k = 0; k < s; ++k) {
      v.nums[k] = (index >> (rs - r * (k + 1))) & mask;
    }
    return grid_shifted_deviation(rule, f, v);
  };

  MomentReport rep = enumerate_moments(std::uint64_t{1} << rs, integral_offset(f),
                                       f.known_integral(), deviation);
  rep.scheme = ShiftScheme::GridShift;
  const double reference = rectangle_rule_mean(f, r);
  rep.cross_check = CrossCheck{MomentMethod::Identity, "product-rectangle rule", reference,
                               relative_difference(rep.mean, reference)};
  return rep;
}

MomentReport moments_scalar_shift(const EmbeddedPair& pair, const PeriodicFunction& f) {
  guard_bits(pair.sr(), "scalar-shift enumeration");
  guard_bits(pair.extended_depth(), "extended rule cross-check");
  if (f.dimension() != pair.dimension()) throw ValidationError("integrand dimension does not match rule");

  auto deviation = [&](std::uint64_t wnum) {
    return scalar_shifted_deviation(pair, f, ScalarShift{pair.sr(), wnum});
  };
  MomentReport rep = enumerate_moments(std::uint64_t{1} << pair.sr(), integral_offset(f),
                                       f.known_integral(), deviation);
  rep.scheme = ShiftScheme::ScalarShift;
  const double reference = extended_rule_value(pair, f);
  rep.cross_check = CrossCheck{MomentMethod::Identity, "extended rule", reference,
                               relative_difference(rep.mean, reference)};
  return rep;
}

double rectangle_rule_mean(const PeriodicFunction& f, unsigned r) {
  if (!f.is_product()) return rectangle_rule_mean_enumerated(f, r);
  guard_bits(r, "rectangle rule axis");
  const std::uint64_t n = std::uint64_t{1} << r;
  double product = 1.0;
  for (std::size_t i = 0; i < f.dimension(); ++i) {
    KahanSum axis;
    for (std::uint64_t j = 0; j < n; ++j) {
      axis += f.factor(i, std::ldexp(static_cast<double>(j), -static_cast<int>(r)));
    }
    product *= axis.value() / static_cast<double>(n);
  }
  return product;
}

double rectangle_rule_mean_enumerated(const PeriodicFunction& f, unsigned r) {
  const std::size_t s = f.dimension();
  guard_bits(std::uint64_t{r} * s, "product-rectangle enumeration");
  const unsigned rs = r * static_cast<unsigned>(s);
  const std::uint64_t mask = low_mask(r);
  const double offset = integral_offset(f);
  const double sum = chunked_sum(std::uint64_t{1} << rs, [&](std::uint64_t index) {
    thread_local std::vector<double> x;
    x.resize(s);
    for (std::size_t k = 0; k < s; ++k) {
      x[k] = std::ldexp(static_cast<double>((index >> (rs - r * (k + 1))) & mask),
                        -static_cast<int>(r));
    }
    return f(x) - offset;
  });
  return offset + sum / std::ldexp(1.0, static_cast<int>(rs));
}

double extended_rule_value(const EmbeddedPair& pair, const PeriodicFunction& f) {
  guard_bits(pair.extended_depth(), "extended rule");
  return eval_rule(pair.extended_rule(), f);
}

}  // namespace latshift
