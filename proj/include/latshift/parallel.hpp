#pragma once

// Deterministic chunked reduction.
//
// An index range [0, n) is cut into fixed chunks of kChunkSize indices. Each
// chunk is summed with its own Kahan accumulator and the chunk totals are then
// combined in ascending chunk order. Which thread computes which chunk has no
// influence on the arithmetic, so results are bit-identical for any thread
// count.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "latshift/kahan.hpp"

namespace latshift {

inline constexpr std::uint64_t kChunkSize = 4096;

/// Worker count: set_thread_count() override, else LATSHIFT_THREADS, else
/// std::thread::hardware_concurrency().
std::size_t thread_count();

/// Overrides the worker count for this process; 0 restores the default.
void set_thread_count(std::size_t n);

/// Runs body(i) for every i in [0, n_tasks). Calls made from inside a running
/// parallel_for execute serially on the calling thread. The first exception
/// thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& body);

namespace detail {

// Chunks summed side by side on one thread. Each chunk still sees its own
// terms in index order, so the per-chunk arithmetic is unchanged; the
// interleaving only hides the latency of the compensated add.
inline constexpr std::uint64_t kChunksPerBlock = 8;

template <class Term>
void sum_chunk_block(std::uint64_t n, std::uint64_t first_chunk, std::uint64_t n_chunks,
                     Term& term, double* out) {
  std::array<KahanSum, kChunksPerBlock> acc{};
  std::array<std::uint64_t, kChunksPerBlock> len{};
  std::uint64_t longest = 0;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    const std::uint64_t begin = (first_chunk + c) * kChunkSize;
    len[c] = std::min(kChunkSize, n - begin);
    longest = std::max(longest, len[c]);
  }
  if (n_chunks == kChunksPerBlock && len[kChunksPerBlock - 1] == kChunkSize) {
    const std::uint64_t base = first_chunk * kChunkSize;
    for (std::uint64_t i = 0; i < kChunkSize; ++i) {
      for (std::uint64_t c = 0; c < kChunksPerBlock; ++c) {
        acc[c] += term(base + c * kChunkSize + i);
      }
    }
  } else {
    for (std::uint64_t i = 0; i < longest; ++i) {
      for (std::uint64_t c = 0; c < n_chunks; ++c) {
        if (i < len[c]) acc[c] += term((first_chunk + c) * kChunkSize + i);
      }
    }
  }
  for (std::uint64_t c = 0; c < n_chunks; ++c) out[c] = acc[c].value();
}

}  // namespace detail

/// Sum of term(i) for i in [0, n) under the chunked reduction contract.
template <class Term>
double chunked_sum(std::uint64_t n, Term&& term) {
  if (n == 0) return 0.0;
  const std::uint64_t n_chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<double> partial(n_chunks);
  const std::uint64_t n_blocks = (n_chunks + detail::kChunksPerBlock - 1) / detail::kChunksPerBlock;
  parallel_for(n_blocks, [&](std::size_t block) {
    const std::uint64_t first = block * detail::kChunksPerBlock;
    const std::uint64_t count = std::min(detail::kChunksPerBlock, n_chunks - first);
    detail::sum_chunk_block(n, first, count, term, partial.data() + first);
  });
  KahanSum total;
  for (double p : partial) total += p;
  return total.value();
}

}  // namespace latshift
