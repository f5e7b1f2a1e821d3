#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace sqd {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123).
///
/// The 64-bit seed is the key. The 128-bit counter is split into a 64-bit
/// block index (low words) and a 64-bit stream index (high words), so distinct
/// stream indices never overlap for fewer than 2^64 blocks per stream.
/// Satisfies UniformRandomBitGenerator with 32-bit output.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32() : Philox4x32(0, 0) {}
  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Skip `n` 32-bit outputs.
  void discard(std::uint64_t n);

  /// Single block function, exposed for known-answer tests.
  static Counter block(Counter ctr, Key key);

  friend bool operator==(const Philox4x32&, const Philox4x32&) = default;

 private:
  void refill();

  Key key_{};
  Counter ctr_{};
  Counter out_{};
  unsigned pos_ = 4;
};

/// Generator for the given (seed, stream index) pair.
inline Philox4x32 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return Philox4x32(seed, stream);
}

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Philox4x32& rng);

/// Uniform integer in [0, n) without modulo bias (Lemire).
std::uint64_t uniform_index(Philox4x32& rng, std::uint64_t n);

}  // namespace sqd
