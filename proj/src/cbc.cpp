#include "latshift/cbc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "latshift/bitsource.hpp"
#include "latshift/error.hpp"
#include "latshift/moments.hpp"
#include "latshift/parallel.hpp"
#include "latshift/periodic.hpp"

namespace latshift {

namespace {

// 1 + B2(i / 2^t) for every i < 2^t, with entries i and 2^t - i equal bit for bit.
std::vector<double> factor_table(unsigned t) {
  const std::uint64_t n = std::uint64_t{1} << t;
  std::vector<double> tab(n);
  for (std::uint64_t i = 0; i <= n / 2; ++i) {
    tab[i] = 1.0 + bernoulli_b2(std::ldexp(static_cast<double>(i), -static_cast<int>(t)));
    tab[(n - i) & (n - 1)] = tab[i];
  }
  return tab;
}

// Per-node product of the factors of the components chosen so far, at one
// resolution. Used by the search; reported merits come from merit().
class LevelState {
 public:
  explicit LevelState(unsigned t)
      : t_(t), mask_(low_mask(t)), table_(factor_table(t)), prod_(std::uint64_t{1} << t, 1.0) {}

  void append(std::uint64_t c) {
    const std::uint64_t zc = c & mask_;
    for (std::uint64_t k = 0; k < prod_.size(); ++k) prod_[k] *= table_[(k * zc) & mask_];
  }

  // Merit of the prefix extended by component c.
  [[nodiscard]] double merit_with(std::uint64_t c) const {
    const std::uint64_t zc = c & mask_;
    const double sum = chunked_sum(prod_.size(), [&](std::uint64_t k) {
      return prod_[k] * table_[(k * zc) & mask_] - 1.0;
    });
    return sum / static_cast<double>(prod_.size());
  }

  [[nodiscard]] std::uint64_t level() const { return std::uint64_t{1} << t_; }

 private:
  unsigned t_;
  std::uint64_t mask_;
  std::vector<double> table_;
  std::vector<double> prod_;
};

void guard_merit_depth(unsigned t) {
  if (t > kMaxEnumerationBits) {
    throw GuardError("merit evaluation over 2^" + std::to_string(t) +
                     " nodes exceeds the enumeration guard 2^" + std::to_string(kMaxEnumerationBits));
  }
}

}  // namespace

MeritValue merit(const GeneratingVector& z, unsigned t) {
  guard_merit_depth(t);
  if (z.depth() < t) throw ValidationError("generating vector modulus is coarser than the merit level");
  const std::uint64_t n = std::uint64_t{1} << t;
  const std::uint64_t mask = low_mask(t);
  const long double inv = 1.0L / static_cast<long double>(n);
  const std::uint64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<long double> partial(n_chunks);
  // Extended precision keeps equivalent lattices (coordinate permutations,
  // sign flips) on the same double after rounding.
  parallel_for(n_chunks, [&](std::size_t c) {
    long double sum = 0.0L;
    long double comp = 0.0L;
    const std::uint64_t end = std::min(n, (c + 1) * kChunkSize);
    for (std::uint64_t k = c * kChunkSize; k < end; ++k) {
      long double p = 1.0L;
      for (auto zi : z.components()) {
        const long double x = static_cast<long double>((k * zi) & mask) * inv;
        p *= 1.0L + (x * x - x + 1.0L / 6.0L);
      }
      const long double y = (p - 1.0L) - comp;
      const long double tot = sum + y;
      comp = (tot - sum) - y;
      sum = tot;
    }
    partial[c] = sum - comp;
  });
  long double total = 0.0L;
  for (long double v : partial) total += v;
  return {static_cast<double>(total * inv), n};
}

MeritNormalizers korobov_normalizers(std::size_t s, unsigned m, unsigned sr) {
  MeritNormalizers norm{std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity()};
  for (auto ell : kKorobovBaselines) {
    const auto z = korobov_vector(ell, s, std::max(1U, m + sr));
    norm.base = std::min(norm.base, merit(z, m).value);
    norm.extended = std::min(norm.extended, merit(z, m + sr).value);
  }
  return norm;
}

EmbeddedMerit embedded_merit(const GeneratingVector& z, unsigned m, unsigned sr) {
  return embedded_merit(z, m, sr, korobov_normalizers(z.dimension(), m, sr));
}

EmbeddedMerit embedded_merit(const GeneratingVector& z, unsigned m, unsigned sr,
                             const MeritNormalizers& norm) {
  EmbeddedMerit em;
  em.base = merit(z, m);
  em.extended = merit(z, m + sr);
  em.combined = std::max(em.base.value / norm.base, em.extended.value / norm.extended);
  return em;
}

std::vector<std::uint64_t> cbc_candidates(unsigned ext_bits, const CandidatePolicy& policy) {
  if (ext_bits < 1) throw ValidationError("candidate resolution must be at least one bit");
  const std::uint64_t odd_count = std::uint64_t{1} << (ext_bits - 1);
  bool full = policy.kind == CandidatePolicy::Kind::Full;
  if (policy.kind == CandidatePolicy::Kind::Auto) full = ext_bits <= kCbcFullScanBits;
  if (!full && policy.sample_size >= odd_count) full = true;

  std::vector<std::uint64_t> out;
  if (full) {
    out.reserve(odd_count);
    for (std::uint64_t c = 1; c < (std::uint64_t{1} << ext_bits); c += 2) out.push_back(c);
    return out;
  }
  if (policy.sample_size == 0) throw ValidationError("candidate sample size must be positive");
  Xoshiro256StarStar rng(policy.seed);
  std::set<std::uint64_t> picked;
  while (picked.size() < policy.sample_size) picked.insert((rng() & low_mask(ext_bits)) | 1U);
  return {picked.begin(), picked.end()};
}

GeneratingVector cbc_construct(std::size_t s, unsigned m, unsigned sr, const CandidatePolicy& policy) {
  if (s < 1) throw ValidationError("dimension must be at least 1");
  const unsigned ext = m + sr;
  guard_merit_depth(ext);
  const unsigned depth = std::max(1U, ext);

  std::vector<std::uint64_t> z{1};
  if (s == 1) return GeneratingVector(z, depth);

  const auto candidates = cbc_candidates(depth, policy);
  if (candidates.empty()) throw ValidationError("empty candidate set");

  LevelState base(m);
  LevelState extended(ext);
  base.append(1);
  extended.append(1);

  std::vector<double> score(candidates.size());
  for (std::size_t d = 2; d <= s; ++d) {
    const auto norm = korobov_normalizers(d, m, sr);
    parallel_for(candidates.size(), [&](std::size_t i) {
      const double b = base.merit_with(candidates[i]);
      const double e = extended.merit_with(candidates[i]);
      score[i] = std::max(b / norm.base, e / norm.extended);
    });
    // Candidates are ascending; a later candidate wins only if it is better
    // by more than the tie tolerance.
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i) {
      if (score[i] < score[best] * (1.0 - kCbcTieTolerance)) best = i;
    }
    z.push_back(candidates[best]);
    base.append(candidates[best]);
    extended.append(candidates[best]);
  }
  return GeneratingVector(std::move(z), depth);
}

}  // namespace latshift
