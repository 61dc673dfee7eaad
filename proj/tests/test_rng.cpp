#include <gtest/gtest.h>

#include <set>

#include "scenesmith/rng.hpp"

using namespace scenesmith;

// Known-answer vectors published with the Random123 Philox reference code.
TEST(Philox, KnownAnswerZero) {
  const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox4x32Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox4x32Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox4x32Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Fnv1a, KnownValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
}

TEST(Rng, SameKeyAndPathReplays) {
  Rng a(42, "layout/proposal/0");
  Rng b(42, "layout/proposal/0");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDoNotDependOnOtherStreams) {
  Rng a(7, "x");
  Rng noise(7, "y");
  for (int i = 0; i < 37; ++i) noise.next_u32();
  Rng b(7, "x");
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(Rng, DistinctPathsDiffer) {
  std::set<std::uint64_t> firsts;
  for (int i = 0; i < 1000; ++i) firsts.insert(derive_seed(1, "scene/" + std::to_string(i)));
  EXPECT_EQ(firsts.size(), 1000u);
}

TEST(Rng, ChildAppendsPath) {
  Rng base(3, "dress");
  Rng c = base.child("lights");
  EXPECT_EQ(c.path(), "dress/lights");
  Rng d(3, "dress/lights");
  EXPECT_EQ(c.next_u64(), d.next_u64());
}

TEST(Rng, DrawsStayInRange) {
  Rng r(9, "range");
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const auto k = r.uniform_int(-3, 5);
    EXPECT_GE(k, -3);
    EXPECT_LE(k, 5);
    const double l = r.log_uniform(50.0, 20000.0);
    EXPECT_GE(l, 50.0);
    EXPECT_LE(l, 20000.0);
    const double t = r.triangular(-5.0, 0.0, 5.0);
    EXPECT_GE(t, -5.0);
    EXPECT_LE(t, 5.0);
  }
}

TEST(Rng, UniformMeanIsCentred) {
  Rng r(11, "mean");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += r.uniform();
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(5, "shuffle");
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[static_cast<std::size_t>(i)] = i;
  auto w = v;
  r.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}
