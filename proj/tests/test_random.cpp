#include "itn/random.hpp"

#include <gtest/gtest.h>

#include <set>

namespace itn {
namespace {

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng(), 0xE220A8397B1DCDAFull);
  EXPECT_EQ(rng(), 0x6E789E6AA1B965F4ull);
  EXPECT_EQ(rng(), 0x06C45D188009454Full);
}

TEST(SplitMix64, UniformRanges) {
  SplitMix64 rng(42);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u = rng.uniform_open_closed();
    ASSERT_GT(u, 0.0);
    ASSERT_LE(u, 1.0);
    const double s = rng.uniform_symmetric();
    ASSERT_GE(s, -1.0);
    ASSERT_LT(s, 1.0);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
  EXPECT_LT(lo, -0.999);
  EXPECT_GT(hi, 0.999);
}

TEST(Fnv1a, ReferenceValue) { EXPECT_EQ(fnv1a("USA"), 0x61EEAC19DB28E388ull); }

TEST(PairStreamSeed, DistinctAcrossPairsKindsAndSeeds) {
  std::set<std::uint64_t> seen;
  const char* codes[] = {"USA", "CAN", "MEX", "FRA", "DEU"};
  for (std::uint64_t seed : {0ull, 1ull, 2ull})
    for (auto kind : {StreamKind::direct, StreamKind::metropolis})
      for (const char* a : codes)
        for (const char* b : codes)
          if (std::string_view(a) != b) seen.insert(pair_stream_seed(seed, kind, a, b));
  EXPECT_EQ(seen.size(), 3u * 2u * 20u);
}

TEST(PairStreamSeed, CompileTimeStable) {
  constexpr auto s = pair_stream_seed(7, StreamKind::direct, "USA", "CAN");
  static_assert(s == pair_stream_seed(7, StreamKind::direct, "USA", "CAN"));
  EXPECT_NE(s, pair_stream_seed(7, StreamKind::direct, "CAN", "USA"));
}

}  // namespace
}  // namespace itn
