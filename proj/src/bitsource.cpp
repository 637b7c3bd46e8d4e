#include "latshift/bitsource.hpp"

#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iterator>

#include "latshift/error.hpp"

namespace latshift {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& word : s_) word = splitmix64(sm);
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

Bits BitSource::draw(std::size_t n) {
  if (n == 0) throw ValidationError("bit draws must request at least one bit");
  Bits out(n);
  fill(out.data(), n);
  consumed_ += n;
  return out;
}

void WordBitSource::fill(std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (left_ == 0) {
      word_ = next_word();
      left_ = 64;
    }
    --left_;
    out[i] = static_cast<std::uint8_t>((word_ >> left_) & 1U);
  }
}

std::string SeededBitSource::describe() const { return "seed:" + std::to_string(seed_); }

std::uint64_t OsEntropyBitSource::next_word() {
  static_assert(sizeof(std::random_device::result_type) >= 4);
  const std::uint64_t hi = device_() & 0xFFFFFFFFULL;
  const std::uint64_t lo = device_() & 0xFFFFFFFFULL;
  return (hi << 32) | lo;
}

BitFileFormat parse_bit_file_format(std::string_view name) {
  if (name == "ascii01") return BitFileFormat::Ascii01;
  if (name == "raw-bytes-msb-first" || name == "raw") return BitFileFormat::RawMsbFirst;
  throw ValidationError("unknown bit file format '" + std::string(name) +
                        "' (expected ascii01 or raw-bytes-msb-first)");
}

std::string_view to_string(BitFileFormat format) {
  return format == BitFileFormat::Ascii01 ? "ascii01" : "raw-bytes-msb-first";
}

FileBitSource::FileBitSource(Bits bits, std::string origin)
    : bits_(std::move(bits)), origin_(std::move(origin)) {
  if (bits_.empty()) throw ValidationError("bit source '" + origin_ + "' holds no bits");
}

void FileBitSource::fill(std::uint8_t* out, std::size_t n) {
  if (n > remaining()) {
    throw BitsExhausted("bit source '" + origin_ + "' exhausted: requested " + std::to_string(n) +
                        " bits, " + std::to_string(remaining()) + " remaining");
  }
  std::copy_n(bits_.begin() + static_cast<long>(pos_), n, out);
  pos_ += n;
}

FileBitSource load_bit_file(const std::filesystem::path& path, BitFileFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open bit file '" + path.string() + "'");
  const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw ValidationError("error reading bit file '" + path.string() + "'");

  Bits bits;
  if (format == BitFileFormat::Ascii01) {
    bits.reserve(content.size());
    for (std::size_t i = 0; i < content.size(); ++i) {
      const char c = content[i];
      if (c == '0' || c == '1') {
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        throw ValidationError("bit file '" + path.string() + "': invalid character at offset " +
                              std::to_string(i));
      }
    }
  } else {
    bits.reserve(content.size() * 8);
    for (char c : content) {
      const auto byte = static_cast<unsigned char>(c);
      for (int b = 7; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((byte >> b) & 1U));
    }
  }
  if (bits.empty()) throw ValidationError("bit file '" + path.string() + "' is empty");
  return FileBitSource(std::move(bits),
                       "file:" + path.string() + ":" + std::string(to_string(format)));
}

std::unique_ptr<BitSource> make_bit_source(std::string_view spec) {
  if (spec == "os") return std::make_unique<OsEntropyBitSource>();
  if (spec.starts_with("seed:")) {
    const auto digits = spec.substr(5);
    std::uint64_t seed = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
      throw ValidationError("invalid seed in bit source spec '" + std::string(spec) + "'");
    }
    return std::make_unique<SeededBitSource>(seed);
  }
  if (spec.starts_with("file:")) {
    const auto rest = spec.substr(5);
    const auto colon = rest.rfind(':');
    if (colon == std::string_view::npos || colon == 0) {
      throw ValidationError("bit file spec must be file:PATH:FORMAT, got '" + std::string(spec) + "'");
    }
    const auto format = parse_bit_file_format(rest.substr(colon + 1));
    return std::make_unique<FileBitSource>(
        load_bit_file(std::filesystem::path(std::string(rest.substr(0, colon))), format));
  }
  throw ValidationError("unknown bit source spec '" + std::string(spec) +
                        "' (expected seed:N, os, or file:PATH:FORMAT)");
}

}  // namespace latshift
