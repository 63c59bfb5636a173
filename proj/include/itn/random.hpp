#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace itn {

/// SplitMix64 generator. Small state, cheap to seed, so every directed pair
/// can own an independent stream. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1], 53-bit resolution. Platform independent.
  constexpr double uniform_open_closed() { return static_cast<double>((operator()() >> 11) + 1) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  constexpr double uniform_symmetric() {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-52 - 1.0;
  }

 private:
  std::uint64_t state_;
};

/// 64-bit FNV-1a, stable across platforms and runs.
constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

/// Stream purpose tags, so different samplers never share randomness.
enum class StreamKind : std::uint64_t { direct = 0x6469726563740000ull, metropolis = 0x6d68617374000000ull };

/// Seed of the random stream owned by the directed pair exporter -> importer.
///
/// Keyed by country codes rather than indices: the same seed drives the same
/// pair in every year, whatever the country set.
constexpr std::uint64_t pair_stream_seed(std::uint64_t seed, StreamKind kind, std::string_view exporter,
                                         std::string_view importer) {
  SplitMix64 mix(seed ^ static_cast<std::uint64_t>(kind));
  std::uint64_t h = mix();
  h ^= fnv1a(exporter);
  h = SplitMix64(h)();
  h ^= fnv1a(importer) * 0x9E3779B97F4A7C15ull;
  return SplitMix64(h)();
}

}  // namespace itn
