#pragma once

#include <span>

namespace latshift {

/// Running sum with Kahan compensation.
class KahanSum {
 public:
  KahanSum() = default;
  explicit KahanSum(double initial) : sum_(initial) {}

  KahanSum& operator+=(double value) {
    const double y = value - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
    return *this;
  }

  KahanSum& operator-=(double value) { return *this += -value; }

  /// Best estimate of the sum: the running total with the outstanding
  /// correction folded back in.
  [[nodiscard]] double value() const { return sum_ - comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double kahan_sum(std::span<const double> values) {
  KahanSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

}  // namespace latshift
