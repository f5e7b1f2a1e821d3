#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "sqd/random.hpp"

namespace sqd {
namespace {

// Known-answer vectors from the Random123 distribution (kat_vectors).
TEST(Philox4x32, KnownAnswerVectors) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::block(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                              K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                              K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Philox4x32, FirstOutputsAreBlockZero) {
  Philox4x32 rng(0, 0);
  EXPECT_EQ(rng(), 0x6627e8d5u);
  EXPECT_EQ(rng(), 0xe169c58du);
  EXPECT_EQ(rng(), 0xbc57ac4cu);
  EXPECT_EQ(rng(), 0x9b00dbd8u);
}

TEST(Philox4x32, SameSeedAndStreamIsReproducible) {
  Philox4x32 a = make_stream(42, 7), b = make_stream(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Philox4x32, DistinctStreamsDiffer) {
  Philox4x32 a = make_stream(42, 0), b = make_stream(42, 1), c = make_stream(43, 0);
  int same_ab = 0, same_ac = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a(), y = b(), z = c();
    same_ab += x == y;
    same_ac += x == z;
  }
  EXPECT_LT(same_ab, 3);
  EXPECT_LT(same_ac, 3);
}

TEST(Philox4x32, DiscardMatchesStepping) {
  for (std::uint64_t skip : {0ull, 1ull, 3ull, 4ull, 5ull, 17ull, 1000ull}) {
    Philox4x32 a = make_stream(9, 2), b = make_stream(9, 2);
    a(); b();  // mid-block start
    for (std::uint64_t i = 0; i < skip; ++i) a();
    b.discard(skip);
    for (int i = 0; i < 10; ++i) ASSERT_EQ(a(), b()) << "skip=" << skip;
  }
}

TEST(Uniform01, RangeAndMean) {
  Philox4x32 rng = make_stream(5, 0);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / n, 0.5, 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(UniformIndex, CoversRangeUniformly) {
  Philox4x32 rng = make_stream(11, 0);
  const std::uint64_t k = 7;
  std::vector<int> counts(k, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto v = uniform_index(rng, k);
    ASSERT_LT(v, k);
    ++counts[v];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  EXPECT_LT(chi2, 16.81);  // chi-square(6) at 0.01
}

TEST(UniformIndex, LargeRange) {
  Philox4x32 rng = make_stream(1, 0);
  const std::uint64_t n = (1ull << 40) + 3;
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 100; ++i) {
    const auto v = uniform_index(rng, n);
    ASSERT_LT(v, n);
    seen.insert(v);
  }
  EXPECT_GT(seen.size(), 95u);
}

}  // namespace
}  // namespace sqd
