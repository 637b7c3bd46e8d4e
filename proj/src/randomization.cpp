#include "latshift/randomization.hpp"

#include <cmath>
#include <string>

#include "latshift/error.hpp"
#include "latshift/kahan.hpp"
#include "latshift/parallel.hpp"

namespace latshift {

namespace {

constexpr unsigned kIdealBits = 53;

// Sum over j < n of f(x_j) - offset, divided by n, where coordinate i of x_j
// is coord(j, i).
template <class Coord>
double mean_deviation(std::uint64_t n, const PeriodicFunction& f, double offset, Coord coord) {
  const std::size_t s = f.dimension();
  const double sum = chunked_sum(n, [&](std::uint64_t j) {
    thread_local std::vector<double> x;
    x.resize(s);
    for (std::size_t i = 0; i < s; ++i) x[i] = coord(j, i);
    return f(x) - offset;
  });
  return sum / static_cast<double>(n);
}

void require_dimension(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                          " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

BitString::BitString(Bits bits, unsigned r, std::size_t s) : bits_(std::move(bits)), r_(r), s_(s) {
  if (bits_.size() != static_cast<std::size_t>(r_) * s_) {
    throw ValidationError("bit string holds " + std::to_string(bits_.size()) + " bits, expected r*s = " +
                          std::to_string(static_cast<std::size_t>(r_) * s_));
  }
  for (auto b : bits_) {
    if (b > 1) throw ValidationError("bit string entries must be 0 or 1");
  }
}

void GridShift::validate() const {
  if (r > kMaxDepth) throw ValidationError("grid shift resolution exceeds the supported depth");
  for (auto n : nums) {
    if (n > low_mask(r)) throw ValidationError("grid shift numerator out of range [0, 2^r)");
  }
}

void ScalarShift::validate() const {
  if (sr > kMaxDepth) throw ValidationError("scalar shift resolution exceeds the supported depth");
  if (wnum > low_mask(sr)) throw ValidationError("scalar shift numerator out of range [0, 2^sr)");
}

double ScalarShift::value() const {
  return std::ldexp(static_cast<double>(wnum), -static_cast<int>(sr));
}

void RealShift::validate() const {
  for (double x : u) {
    if (!(x >= 0.0 && x < 1.0)) throw ValidationError("real shift coordinates must lie in [0,1)");
  }
}

GridShift bits_to_grid_shift(const BitString& bits) {
  GridShift v{bits.r(), std::vector<std::uint64_t>(bits.s(), 0)};
  v.validate();
  for (std::size_t k = 0; k < bits.s(); ++k) {
    std::uint64_t num = 0;
    for (unsigned i = 0; i < bits.r(); ++i) num = (num << 1) | bits.bits()[k * bits.r() + i];
    v.nums[k] = num;
  }
  return v;
}

BitString grid_shift_to_bits(const GridShift& v) {
  v.validate();
  Bits bits(static_cast<std::size_t>(v.r) * v.nums.size());
  for (std::size_t k = 0; k < v.nums.size(); ++k) {
    for (unsigned i = 0; i < v.r; ++i) {
      bits[k * v.r + i] = static_cast<std::uint8_t>((v.nums[k] >> (v.r - 1 - i)) & 1U);
    }
  }
  return BitString(std::move(bits), v.r, v.nums.size());
}

ScalarShift bits_to_scalar_shift(const BitString& bits) {
  ScalarShift w{static_cast<unsigned>(bits.size()), 0};
  w.validate();
  for (auto b : bits.bits()) w.wnum = (w.wnum << 1) | b;
  return w;
}

BitString scalar_shift_to_bits(const ScalarShift& w, unsigned r, std::size_t s) {
  w.validate();
  if (static_cast<std::size_t>(r) * s != w.sr) {
    throw ValidationError("scalar shift has " + std::to_string(w.sr) + " bits, expected r*s");
  }
  Bits bits(w.sr);
  for (unsigned i = 0; i < w.sr; ++i) {
    bits[i] = static_cast<std::uint8_t>((w.wnum >> (w.sr - 1 - i)) & 1U);
  }
  return BitString(std::move(bits), r, s);
}

double integral_offset(const PeriodicFunction& f) { return f.known_integral().value_or(0.0); }

double rule_deviation(const Rank1Rule& rule, const PeriodicFunction& f) {
  require_dimension(rule.dimension(), f.dimension(), "rule evaluation");
  const int m = static_cast<int>(rule.m());
  return mean_deviation(rule.size(), f, integral_offset(f), [&](std::uint64_t j, std::size_t i) {
    return std::ldexp(static_cast<double>(rule.coordinate(j, i)), -m);
  });
}

double eval_rule(const Rank1Rule& rule, const PeriodicFunction& f) {
  return integral_offset(f) + rule_deviation(rule, f);
}

double grid_shifted_deviation(const Rank1Rule& rule, const PeriodicFunction& f, const GridShift& v) {
  require_dimension(rule.dimension(), f.dimension(), "grid-shifted rule");
  require_dimension(rule.dimension(), v.nums.size(), "grid-shifted rule");
  v.validate();
  const unsigned depth = std::max(rule.m(), v.r);
  const unsigned node_up = depth - rule.m();
  const unsigned shift_up = depth - v.r;
  const std::uint64_t mask = low_mask(depth);
  return mean_deviation(rule.size(), f, integral_offset(f), [&](std::uint64_t j, std::size_t i) {
    const std::uint64_t num = ((rule.coordinate(j, i) << node_up) + (v.nums[i] << shift_up)) & mask;
    return std::ldexp(static_cast<double>(num), -static_cast<int>(depth));
  });
}

double eval_grid_shifted(const Rank1Rule& rule, const PeriodicFunction& f, const GridShift& v) {
  return integral_offset(f) + grid_shifted_deviation(rule, f, v);
}

double scalar_shifted_deviation(const EmbeddedPair& pair, const PeriodicFunction& f,
                                const ScalarShift& w) {
  require_dimension(pair.dimension(), f.dimension(), "scalar-shifted rule");
  w.validate();
  if (w.sr != pair.sr()) {
    throw ValidationError("scalar shift has " + std::to_string(w.sr) +
                          " bits but the embedded pair extends by " + std::to_string(pair.sr()));
  }
  const unsigned sr = pair.sr();
  const int depth = static_cast<int>(pair.extended_depth());
  return mean_deviation(std::uint64_t{1} << pair.m(), f, integral_offset(f),
                        [&](std::uint64_t j, std::size_t i) {
                          const std::uint64_t k = (j << sr) + w.wnum;
                          return std::ldexp(static_cast<double>(pair.coordinate(k, i)), -depth);
                        });
}

double eval_scalar_shifted(const EmbeddedPair& pair, const PeriodicFunction& f, const ScalarShift& w) {
  return integral_offset(f) + scalar_shifted_deviation(pair, f, w);
}

double eval_real_shifted(const Rank1Rule& rule, const PeriodicFunction& f, const RealShift& u) {
  require_dimension(rule.dimension(), f.dimension(), "real-shifted rule");
  require_dimension(rule.dimension(), u.u.size(), "real-shifted rule");
  u.validate();
  const int m = static_cast<int>(rule.m());
  const double offset = integral_offset(f);
  return offset + mean_deviation(rule.size(), f, offset, [&](std::uint64_t j, std::size_t i) {
           const double t = std::ldexp(static_cast<double>(rule.coordinate(j, i)), -m) + u.u[i];
           return t - std::floor(t);
         });
}

std::uint64_t bits_per_replicate(Scheme scheme, std::size_t s, unsigned r) {
  return scheme == Scheme::Ideal ? std::uint64_t{kIdealBits} * s : std::uint64_t{r} * s;
}

ShiftSpec draw_shift(BitSource& src, Scheme scheme, std::size_t s, unsigned r) {
  switch (scheme) {
    case Scheme::Grid:
      return bits_to_grid_shift(BitString(src.draw(static_cast<std::size_t>(r) * s), r, s));
    case Scheme::Scalar:
      return bits_to_scalar_shift(BitString(src.draw(static_cast<std::size_t>(r) * s), r, s));
    case Scheme::Ideal: {
      const auto v = bits_to_grid_shift(BitString(src.draw(kIdealBits * s), kIdealBits, s));
      RealShift u;
      u.u.reserve(s);
      for (auto n : v.nums) u.u.push_back(std::ldexp(static_cast<double>(n), -static_cast<int>(kIdealBits)));
      return u;
    }
  }
  throw ValidationError("unknown randomization scheme");
}

ReplicateEstimate estimate_mean(const std::function<double(const ShiftSpec&)>& evaluator,
                                std::span<const ShiftSpec> shifts) {
  if (shifts.empty()) throw ValidationError("at least one replicate is required");
  ReplicateEstimate est;
  est.values.reserve(shifts.size());
  for (const auto& shift : shifts) est.values.push_back(evaluator(shift));

  const double q = static_cast<double>(est.values.size());
  est.mean = kahan_sum(est.values) / q;
  if (est.values.size() > 1) {
    KahanSum ss;
    for (double y : est.values) ss += (y - est.mean) * (y - est.mean);
    est.sd = std::sqrt(ss.value() / (q - 1.0));
  }
  return est;
}

std::function<double(const ShiftSpec&)> make_evaluator(const EmbeddedPair& pair,
                                                       const PeriodicFunction& f) {
  return [base = pair.base_rule(), pair, &f](const ShiftSpec& shift) {
    return std::visit(
        [&](const auto& sh) -> double {
          using T = std::decay_t<decltype(sh)>;
          if constexpr (std::is_same_v<T, GridShift>) {
            return eval_grid_shifted(base, f, sh);
          } else if constexpr (std::is_same_v<T, ScalarShift>) {
            return eval_scalar_shifted(pair, f, sh);
          } else {
            return eval_real_shifted(base, f, sh);
          }
        },
        shift);
  };
}

}  // namespace latshift
