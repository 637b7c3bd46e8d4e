#pragma once

// Sources of iid fair bits for shift randomization.
//
// The seeded source exists so experiments and tests replay exactly. It is a
// pseudo-random generator and is not a substitute for physically random bits;
// those are ingested as files (bits fetched from a hardware or quantum source
// and saved to disk).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace latshift {

/// One bit per element, each 0 or 1.
using Bits = std::vector<std::uint8_t>;

/// xoshiro256** 1.0 (Blackman and Vigna), state filled from SplitMix64.
/// Satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

/// SplitMix64 step: advances state and returns the next output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Sequential, single-consumer stream of bits.
class BitSource {
 public:
  virtual ~BitSource() = default;

  /// Next n bits. Advances bits_consumed() by exactly n, or throws without
  /// consuming anything.
  Bits draw(std::size_t n);

  [[nodiscard]] std::uint64_t bits_consumed() const { return consumed_; }

  /// Spec string that recreates this source, e.g. "seed:7" or "file:x.txt:ascii01".
  [[nodiscard]] virtual std::string describe() const = 0;

 protected:
  virtual void fill(std::uint8_t* out, std::size_t n) = 0;

 private:
  std::uint64_t consumed_ = 0;
};

/// Bits taken most-significant first from consecutive 64-bit words.
class WordBitSource : public BitSource {
 protected:
  void fill(std::uint8_t* out, std::size_t n) override;
  virtual std::uint64_t next_word() = 0;

 private:
  std::uint64_t word_ = 0;
  unsigned left_ = 0;
};

class SeededBitSource final : public WordBitSource {
 public:
  explicit SeededBitSource(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  [[nodiscard]] std::string describe() const override;

 protected:
  std::uint64_t next_word() override { return rng_(); }

 private:
  std::uint64_t seed_;
  Xoshiro256StarStar rng_;
};

/// std::random_device; not reproducible.
class OsEntropyBitSource final : public WordBitSource {
 public:
  [[nodiscard]] std::string describe() const override { return "os"; }

 protected:
  std::uint64_t next_word() override;

 private:
  std::random_device device_;
};

enum class BitFileFormat { Ascii01, RawMsbFirst };

BitFileFormat parse_bit_file_format(std::string_view name);
std::string_view to_string(BitFileFormat format);

/// Bits held in memory; errors at exhaustion instead of wrapping.
class FileBitSource final : public BitSource {
 public:
  FileBitSource(Bits bits, std::string origin);

  [[nodiscard]] std::size_t remaining() const { return bits_.size() - pos_; }
  [[nodiscard]] std::size_t size() const { return bits_.size(); }
  [[nodiscard]] std::string describe() const override { return origin_; }

 protected:
  void fill(std::uint8_t* out, std::size_t n) override;

 private:
  Bits bits_;
  std::size_t pos_ = 0;
  std::string origin_;
};

/// ascii01: characters '0'/'1', whitespace ignored, anything else rejected.
/// raw-bytes-msb-first: every byte expands to 8 bits, high bit first.
FileBitSource load_bit_file(const std::filesystem::path& path, BitFileFormat format);

/// "seed:N", "os", or "file:PATH:FORMAT".
std::unique_ptr<BitSource> make_bit_source(std::string_view spec);

}  // namespace latshift
