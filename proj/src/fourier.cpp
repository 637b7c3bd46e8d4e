#include "latshift/fourier.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "latshift/error.hpp"
#include "latshift/kahan.hpp"
#include "latshift/parallel.hpp"

namespace latshift {

namespace {

void require_fourier(const PeriodicFunction& f, std::size_t s) {
  if (!f.has_fourier_model()) throw MissingFourierModel("integrand has no Fourier coefficient model");
  if (f.dimension() != s) throw ValidationError("integrand dimension does not match rule");
}

// Floor-mod into [0, N).
std::int64_t mod_n(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

}  // namespace

TruncationBox::TruncationBox(std::int64_t bound) : H(bound) {
  if (H < 1) throw ValidationError("truncation bound H must be at least 1");
}

bool TruncationBox::contains(std::span<const std::int64_t> h) const {
  for (auto x : h) {
    if (x < -H || x > H) return false;
  }
  return true;
}

bool is_dual(const Rank1Rule& rule, std::span<const std::int64_t> h) {
  if (h.size() != rule.dimension()) throw ValidationError("frequency dimension does not match rule");
  std::uint64_t dot = 0;
  for (std::size_t i = 0; i < h.size(); ++i) dot += static_cast<std::uint64_t>(h[i]) * rule.z()[i];
  return (dot & low_mask(rule.m())) == 0;
}

std::uint64_t inverse_mod_pow2(std::uint64_t a, unsigned bits) {
  if ((a & 1U) == 0) throw ValidationError("only odd integers are invertible modulo a power of two");
  // Newton iteration x <- x (2 - a x) doubles the number of correct low bits.
  std::uint64_t x = a;  // correct to 3 bits for odd a
  for (int i = 0; i < 6; ++i) x *= 2 - a * x;
  return x & low_mask(bits);
}

std::vector<DualIndex> dual_points(const Rank1Rule& rule, TruncationBox box) {
  const std::size_t s = rule.dimension();
  const std::int64_t n = static_cast<std::int64_t>(rule.size());
  const std::int64_t H = box.H;
  const std::uint64_t zs_inv = inverse_mod_pow2(rule.z()[s - 1], rule.m());

  std::vector<DualIndex> out;
  std::vector<std::int64_t> h(s, -H);
  for (;;) {
    // h_s = -(sum_{i<s} h_i z_i) * z_s^{-1} mod N
    std::uint64_t dot = 0;
    for (std::size_t i = 0; i + 1 < s; ++i) dot += static_cast<std::uint64_t>(h[i]) * rule.z()[i];
    const std::uint64_t target = (std::uint64_t{0} - dot * zs_inv) & low_mask(rule.m());
    const std::int64_t residue = static_cast<std::int64_t>(target);
    // Smallest representative >= -H.
    std::int64_t last = -H + mod_n(residue - (-H), n);
    for (; last <= H; last += n) {
      h[s - 1] = last;
      bool zero = true;
      for (auto x : h) zero = zero && x == 0;
      if (!zero) out.push_back(DualIndex{h});
    }

    // Odometer over h_1 .. h_{s-1}.
    std::size_t i = s - 1;
    while (i > 0) {
      --i;
      if (h[i] < H) {
        ++h[i];
        break;
      }
      h[i] = -H;
      if (i == 0) return out;
    }
    if (s == 1) return out;
  }
}

SeriesResult<std::complex<double>> shift_error_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                                      std::span<const double> shift, TruncationBox box) {
  require_fourier(f, rule.dimension());
  if (shift.size() != rule.dimension()) throw ValidationError("shift dimension does not match rule");
  const auto duals = dual_points(rule, box);
  KahanSum re;
  KahanSum im;
  for (const auto& d : duals) {
    double phase = 0.0;
    for (std::size_t i = 0; i < d.h.size(); ++i) phase += static_cast<double>(d.h[i]) * shift[i];
    phase -= std::floor(phase);
    const std::complex<double> term =
        std::polar(1.0, 2.0 * std::numbers::pi * phase) * f.fourier_coeff(d.h);
    re += term.real();
    im += term.imag();
  }
  return {{re.value(), im.value()}, f.abs_tail_bound(box.H), box.H};
}

SeriesResult<double> cp_variance_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                        TruncationBox box) {
  require_fourier(f, rule.dimension());
  const auto duals = dual_points(rule, box);
  const double sum = chunked_sum(duals.size(), [&](std::uint64_t i) {
    return std::norm(f.fourier_coeff(duals[i].h));
  });
  return {sum, f.squared_tail_bound(box.H), box.H};
}

double cp_variance_closed_form(const Rank1Rule& rule, const ProductBernoulli& f) {
  if (f.dimension() != rule.dimension()) throw ValidationError("integrand dimension does not match rule");
  const std::size_t s = rule.dimension();
  const int m = static_cast<int>(rule.m());
  // E (Q_u f)^2 = (1/N^2) sum_{j,k} A(x_k - x_j) = (1/N) sum_j A(x_j), and
  // A(t) - 1 is summed to keep the small result resolved.
  const double sum = chunked_sum(rule.size(), [&](std::uint64_t j) {
    thread_local std::vector<double> t;
    t.resize(s);
    for (std::size_t i = 0; i < s; ++i) t[i] = std::ldexp(static_cast<double>(rule.coordinate(j, i)), -m);
    return f.autocorrelation(t) - 1.0;
  });
  return sum / static_cast<double>(rule.size());
}

SeriesResult<double> third_moment_series(const Rank1Rule& rule, const PeriodicFunction& f,
                                         TruncationBox box) {
  require_fourier(f, rule.dimension());
  const auto duals = dual_points(rule, box);
  const std::size_t s = rule.dimension();

  std::vector<std::complex<double>> coeff(duals.size());
  for (std::size_t i = 0; i < duals.size(); ++i) coeff[i] = f.fourier_coeff(duals[i].h);

  // Inner sums per h, reduced in the chunked order over h.
  const double sum = chunked_sum(duals.size(), [&](std::uint64_t a) {
    thread_local std::vector<std::int64_t> diff;
    diff.resize(s);
    const auto& h = duals[a].h;
    KahanSum inner_re;
    for (std::size_t b = 0; b < duals.size(); ++b) {
      if (b == a) continue;
      const auto& k = duals[b].h;
      for (std::size_t i = 0; i < s; ++i) diff[i] = h[i] - k[i];
      if (!box.contains(diff)) continue;
      const std::complex<double> term =
          coeff[a] * std::conj(coeff[b]) * std::conj(f.fourier_coeff(diff));
      inner_re += term.real();
    }
    return inner_re.value();
  });
  return {sum, std::nullopt, box.H};
}

CumulantSet mean_cumulants(const CumulantSet& single, std::uint64_t q) {
  if (q == 0) throw ValidationError("replicate count q must be at least 1");
  const double qd = static_cast<double>(q);
  CumulantSet out;
  out.kappa2 = single.kappa2 / qd;
  out.kappa3 = single.kappa3 / (qd * qd);
  out.kappa4 = single.kappa4 / (qd * qd * qd);
  out.q = single.q * q;
  return out;
}

}  // namespace latshift
