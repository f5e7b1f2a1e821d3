#include "sqd/random.hpp"

namespace sqd {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{0, 0, static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)} {}

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

void Philox4x32::refill() {
  out_ = block(ctr_, key_);
  if (++ctr_[0] == 0) ++ctr_[1];
  pos_ = 0;
}

Philox4x32::result_type Philox4x32::operator()() {
  if (pos_ == 4) refill();
  return out_[pos_++];
}

void Philox4x32::discard(std::uint64_t n) {
  while (n > 0 && pos_ < 4) {
    ++pos_;
    --n;
  }
  if (n == 0) return;
  const std::uint64_t blocks = n / 4;
  std::uint64_t low = (static_cast<std::uint64_t>(ctr_[1]) << 32 | ctr_[0]) + blocks;
  ctr_[0] = static_cast<std::uint32_t>(low);
  ctr_[1] = static_cast<std::uint32_t>(low >> 32);
  refill();
  pos_ = static_cast<unsigned>(n % 4);
}

double uniform01(Philox4x32& rng) {
  const std::uint64_t hi = rng() >> 5;  // 27 bits
  const std::uint64_t lo = rng() >> 6;  // 26 bits
  return static_cast<double>(hi << 26 | lo) * 0x1.0p-53;
}

std::uint64_t uniform_index(Philox4x32& rng, std::uint64_t n) {
  // 32-bit Lemire for the common case, 64-bit rejection otherwise.
  if (n <= 0xFFFFFFFFull) {
    const auto range = static_cast<std::uint32_t>(n);
    std::uint64_t m = static_cast<std::uint64_t>(rng()) * range;
    auto low = static_cast<std::uint32_t>(m);
    if (low < range) {
      const std::uint32_t threshold = static_cast<std::uint32_t>(-range) % range;
      while (low < threshold) {
        m = static_cast<std::uint64_t>(rng()) * range;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return m >> 32;
  }
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  for (;;) {
    const std::uint64_t r = static_cast<std::uint64_t>(rng()) << 32 | rng();
    if (r < limit) return r % n;
  }
}

}  // namespace sqd
