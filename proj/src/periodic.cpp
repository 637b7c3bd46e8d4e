#include "latshift/periodic.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "latshift/error.hpp"
#include "latshift/kahan.hpp"

namespace latshift {

namespace {
constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;
}

double bernoulli_b2(double x) { return x * x - x + 1.0 / 6.0; }

double bernoulli_b4(double x) {
  const double x2 = x * x;
  return x2 * x2 - 2.0 * x2 * x + x2 - 1.0 / 30.0;
}

double grid_mean_b2(std::uint64_t n) {
  if (n == 0) throw ValidationError("grid size must be at least 1");
  KahanSum acc;
  const double inv = 1.0 / static_cast<double>(n);
  for (std::uint64_t j = 0; j < n; ++j) acc += bernoulli_b2(static_cast<double>(j) * inv);
  return acc.value() / static_cast<double>(n);
}

double PeriodicFunction::eval(const DyadicPoint& p) const {
  if (p.dimension() != dimension()) throw ValidationError("point dimension does not match function");
  std::vector<double> x(p.dimension());
  p.to_doubles(x);
  return (*this)(x);
}

std::complex<double> PeriodicFunction::fourier_coeff(std::span<const std::int64_t>) const {
  throw MissingFourierModel("this integrand has no Fourier coefficient model");
}

double PeriodicFunction::factor(std::size_t, double) const {
  throw ValidationError("this integrand is not of product form");
}

ProductBernoulli::ProductBernoulli(std::size_t s) : s_(s) {
  if (s_ < 1) throw ValidationError("dimension must be at least 1");
}

double ProductBernoulli::operator()(std::span<const double> x) const {
  double p = 1.0;
  for (double xi : x) p *= 1.0 + bernoulli_b2(xi);
  return p;
}

double ProductBernoulli::axis_coefficient(std::int64_t h) {
  if (h == 0) return 1.0;
  const double hd = static_cast<double>(h);
  return 1.0 / (kTwoPiSq * hd * hd);
}

double ProductBernoulli::coefficient(std::span<const std::int64_t> h) const {
  if (h.size() != s_) throw ValidationError("frequency dimension does not match function");
  double c = 1.0;
  for (std::int64_t hi : h) c *= axis_coefficient(hi);
  return c;
}

std::complex<double> ProductBernoulli::fourier_coeff(std::span<const std::int64_t> h) const {
  return {coefficient(h), 0.0};
}

// A frequency outside the box has at least one coordinate with |h_i| > H.
// Union over that coordinate: (tail of one axis) * (full sum of the others).
//   sum_h g(h)          = 1 + 2 zeta(2) / (2 pi^2) = 7/6
//   sum_{|h|>H} g(h)    <= 1 / (pi^2 H)
//   sum_h g(h)^2        = 1 + 2 zeta(4) / (4 pi^4) = 1 + 1/180
//   sum_{|h|>H} g(h)^2  <= 1 / (6 pi^4 H^3)
std::optional<double> ProductBernoulli::abs_tail_bound(std::int64_t H) const {
  if (H < 1) throw ValidationError("truncation bound H must be at least 1");
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return static_cast<double>(s_) * std::pow(7.0 / 6.0, static_cast<double>(s_ - 1)) /
         (pi2 * static_cast<double>(H));
}

std::optional<double> ProductBernoulli::squared_tail_bound(std::int64_t H) const {
  if (H < 1) throw ValidationError("truncation bound H must be at least 1");
  const double pi4 = std::pow(std::numbers::pi, 4);
  const double h3 = std::pow(static_cast<double>(H), 3);
  return static_cast<double>(s_) * std::pow(1.0 + 1.0 / 180.0, static_cast<double>(s_ - 1)) /
         (6.0 * pi4 * h3);
}

double ProductBernoulli::factor(std::size_t, double x) const { return 1.0 + bernoulli_b2(x); }

double ProductBernoulli::autocorrelation(std::span<const double> t) const {
  if (t.size() != s_) throw ValidationError("lag dimension does not match function");
  double p = 1.0;
  for (double ti : t) {
    const double frac = ti - std::floor(ti);
    p *= 1.0 - bernoulli_b4(frac) / 6.0;
  }
  return p;
}

double ProductBernoulli::autocorrelation(const DyadicPoint& t) const {
  return autocorrelation(t.to_doubles());
}

CallableFunction::CallableFunction(std::size_t s, Fn fn, std::optional<double> integral)
    : s_(s), fn_(std::move(fn)), integral_(integral) {
  if (s_ < 1) throw ValidationError("dimension must be at least 1");
  if (!fn_) throw ValidationError("callable must not be empty");
}

}  // namespace latshift
