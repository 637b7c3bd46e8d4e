#pragma once

// Component-by-component search for generating vectors that are good at two
// embedded resolutions, 2^m and 2^(m+sr).
//
// The figure of merit is Qf - 1 for f = prod (1 + B2(x_i)): the error of the
// rule on the reference integrand, equal to the sum of its (positive) Fourier
// coefficients over the nonzero dual lattice. Each level's merit is divided
// by the best Korobov merit at that level (ell in kKorobovBaselines) and the
// combined merit is the worse of the two ratios.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "latshift/lattice.hpp"

namespace latshift {

inline constexpr std::array<std::uint64_t, 3> kKorobovBaselines = {17797, 1267, 12915};

/// Seed of the candidate sample used when the full scan is too large.
inline constexpr std::uint64_t kCbcSampleSeed = 0x6C61747368696674ULL;  // "latshift"
inline constexpr std::size_t kCbcSampleSize = 4096;
/// Full candidate scan up to this extended resolution (bits).
inline constexpr unsigned kCbcFullScanBits = 16;
/// Relative score difference below which two candidates count as tied.
inline constexpr double kCbcTieTolerance = 1e-12;

struct MeritValue {
  double value = 0.0;
  std::uint64_t level = 0;  // node count N
};

struct EmbeddedMerit {
  MeritValue base;
  MeritValue extended;
  double combined = 0.0;
};

struct MeritNormalizers {
  double base = 1.0;
  double extended = 1.0;
};

/// Qf - 1 for the reference integrand, rule z over N = 2^t nodes (components
/// taken mod 2^t). Requires t <= 26 and z.depth() >= t.
MeritValue merit(const GeneratingVector& z, unsigned t);

/// Best Korobov merits among kKorobovBaselines in dimension s.
MeritNormalizers korobov_normalizers(std::size_t s, unsigned m, unsigned sr);

EmbeddedMerit embedded_merit(const GeneratingVector& z, unsigned m, unsigned sr);
EmbeddedMerit embedded_merit(const GeneratingVector& z, unsigned m, unsigned sr,
                             const MeritNormalizers& norm);

struct CandidatePolicy {
  enum class Kind { Auto, Full, Sampled };
  Kind kind = Kind::Auto;
  std::uint64_t seed = kCbcSampleSeed;
  std::size_t sample_size = kCbcSampleSize;
};

/// Odd candidates in [1, 2^(m+sr)) under `policy`, ascending. Auto scans all
/// of them when m+sr <= kCbcFullScanBits and samples otherwise.
std::vector<std::uint64_t> cbc_candidates(unsigned ext_bits, const CandidatePolicy& policy);

/// z_1 = 1; each later component minimizes the combined merit of the prefix,
/// smallest candidate on ties. Requires m+sr <= 26.
GeneratingVector cbc_construct(std::size_t s, unsigned m, unsigned sr,
                               const CandidatePolicy& policy = {});

}  // namespace latshift
