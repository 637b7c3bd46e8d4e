#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>

#include "latshift/dyadic.hpp"

namespace latshift {

/// B2(x) = x^2 - x + 1/6.
double bernoulli_b2(double x);

/// B4(x) = x^4 - 2x^3 + x^2 - 1/30.
double bernoulli_b4(double x);

/// (1/n) sum_{j<n} B2(j/n), summed term by term. Equals 1/(6n^2).
double grid_mean_b2(std::uint64_t n);

/// A function on R^s that is one-periodic in every coordinate.
///
/// Only evaluation is mandatory. Integrands that know their integral let the
/// rule evaluators accumulate f - If, which keeps tiny biases resolvable.
/// Fourier-space analysis needs fourier_coeff(); the default throws
/// MissingFourierModel. Product-form integrands expose their factors so the
/// product-rectangle rule can be evaluated one axis at a time.
class PeriodicFunction {
 public:
  virtual ~PeriodicFunction() = default;

  [[nodiscard]] virtual std::size_t dimension() const = 0;

  /// f(x) for x in [0,1)^s.
  [[nodiscard]] virtual double operator()(std::span<const double> x) const = 0;

  /// f at a dyadic point; the exact coordinates are converted just before
  /// evaluation.
  [[nodiscard]] double eval(const DyadicPoint& p) const;

  [[nodiscard]] virtual std::optional<double> known_integral() const { return std::nullopt; }

  [[nodiscard]] virtual bool has_fourier_model() const { return false; }
  [[nodiscard]] virtual std::complex<double> fourier_coeff(std::span<const std::int64_t> h) const;

  /// Bound on sum_{h outside [-H,H]^s} |f^(h)|, when known.
  [[nodiscard]] virtual std::optional<double> abs_tail_bound(std::int64_t /*H*/) const {
    return std::nullopt;
  }
  /// Bound on sum_{h outside [-H,H]^s} |f^(h)|^2, when known.
  [[nodiscard]] virtual std::optional<double> squared_tail_bound(std::int64_t /*H*/) const {
    return std::nullopt;
  }

  [[nodiscard]] virtual bool is_product() const { return false; }
  /// Factor i of a product-form integrand, f(x) = prod_i factor(i, x_i).
  [[nodiscard]] virtual double factor(std::size_t i, double x) const;
};

/// f(x) = prod_i (1 + B2(x_i)), with integral 1 and Fourier coefficients
/// prod_i g(h_i), g(0) = 1, g(h) = 1 / (2 pi^2 h^2).
class ProductBernoulli final : public PeriodicFunction {
 public:
  explicit ProductBernoulli(std::size_t s);

  [[nodiscard]] std::size_t dimension() const override { return s_; }
  [[nodiscard]] double operator()(std::span<const double> x) const override;
  [[nodiscard]] std::optional<double> known_integral() const override { return 1.0; }

  [[nodiscard]] bool has_fourier_model() const override { return true; }
  [[nodiscard]] std::complex<double> fourier_coeff(std::span<const std::int64_t> h) const override;
  /// Real-valued form of fourier_coeff().
  [[nodiscard]] double coefficient(std::span<const std::int64_t> h) const;
  /// One-dimensional coefficient g(h).
  [[nodiscard]] static double axis_coefficient(std::int64_t h);

  [[nodiscard]] std::optional<double> abs_tail_bound(std::int64_t H) const override;
  [[nodiscard]] std::optional<double> squared_tail_bound(std::int64_t H) const override;

  [[nodiscard]] bool is_product() const override { return true; }
  [[nodiscard]] double factor(std::size_t i, double x) const override;

  /// integral of f(x) f({x + t}) dx = prod_i (1 - B4({t_i}) / 6).
  [[nodiscard]] double autocorrelation(std::span<const double> t) const;
  [[nodiscard]] double autocorrelation(const DyadicPoint& t) const;

 private:
  std::size_t s_;
};

/// Adapts any callable to PeriodicFunction. The callable is trusted to be
/// one-periodic.
class CallableFunction final : public PeriodicFunction {
 public:
  using Fn = std::function<double(std::span<const double>)>;

  CallableFunction(std::size_t s, Fn fn, std::optional<double> integral = std::nullopt);

  [[nodiscard]] std::size_t dimension() const override { return s_; }
  [[nodiscard]] double operator()(std::span<const double> x) const override { return fn_(x); }
  [[nodiscard]] std::optional<double> known_integral() const override { return integral_; }

 private:
  std::size_t s_;
  Fn fn_;
  std::optional<double> integral_;
};

}  // namespace latshift
