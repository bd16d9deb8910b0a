#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support/streams.hpp"
#include "zentropy/anomaly.hpp"

namespace zentropy {
namespace {

// H(16,1,1,2)/20 - H(17,1,1,1)/20 with 30-digit arithmetic.
constexpr double kConstantThenBin3 = 0.174343415062788499;

DetectorConfig small_config() {
  DetectorConfig c;
  c.window = 16;
  c.warmup = 16;
  c.bins = 4;
  c.smoothing = 1.0;
  return c;
}

TEST(DetectorConfig, Validation) {
  auto c = small_config();
  c.window = 7;
  EXPECT_THROW(c.validate(), error);
  c = small_config();
  c.warmup = 8;
  EXPECT_THROW(c.validate(), error);
  c = small_config();
  c.kappa = 0;
  EXPECT_THROW(c.validate(), error);
  c = small_config();
  c.smoothing = 0;
  EXPECT_THROW(c.validate(), error);
  c = small_config();
  c.range_hi = c.range_lo;
  EXPECT_THROW(c.validate(), error);
}

TEST(DetectorConfig, BinningClampsToEdges) {
  const auto c = small_config();
  EXPECT_EQ(c.bin_of(-5.0), 0u);
  EXPECT_EQ(c.bin_of(0.0), 0u);
  EXPECT_EQ(c.bin_of(0.26), 1u);
  EXPECT_EQ(c.bin_of(1.0), 3u);
  EXPECT_EQ(c.bin_of(7.0), 3u);
}

TEST(Predictive, Examples) {
  StreamModel empty(small_config());
  const auto e = empty.predictive();
  for (double p : e.probs()) EXPECT_DOUBLE_EQ(p, 0.25);

  StreamModel constant(small_config());
  for (int i = 0; i < 16; ++i) constant.event_potential(0.1);
  const auto pd = constant.predictive();
  const auto& p = pd.probs();
  EXPECT_DOUBLE_EQ(p[0], 17.0 / 20);
  for (int b = 1; b < 4; ++b) EXPECT_DOUBLE_EQ(p[b], 1.0 / 20);

  StreamModel spread(small_config());
  for (int i = 0; i < 16; ++i) spread.event_potential(0.125 + 0.25 * (i % 4));
  const auto sd = spread.predictive();
  for (double q : sd.probs()) EXPECT_DOUBLE_EQ(q, 0.25);
}

TEST(EventPotential, ConstantStreamThenOutlier) {
  StreamModel m(small_config());
  for (int i = 0; i < 16; ++i) m.event_potential(0.1);
  const auto z = m.event_potential(0.9);
  EXPECT_NEAR(z.value, kConstantThenBin3, 1e-12);
  EXPECT_GT(z.value, 0.0);
}

TEST(EventPotential, FullBufferIdentityAndBound) {
  StreamModel m(small_config());
  Rng rng(3);
  std::vector<double> xs;
  for (int i = 0; i < 16; ++i) xs.push_back(rng.uniform());
  for (double x : xs) EXPECT_LE(std::abs(m.event_potential(x).value), 2.0);
  // Replaying the window content evicts exactly the symbol being inserted.
  for (int round = 0; round < 3; ++round)
    for (double x : xs) EXPECT_EQ(m.event_potential(x).value, 0.0);
  for (int i = 0; i < 1000; ++i) EXPECT_LE(std::abs(m.event_potential(rng.uniform() * 3 - 1).value), 2.0);
}

TEST(Ingest, NoFlagsDuringWarmup) {
  auto c = small_config();
  c.warmup = 40;
  Detector d(c);
  // Wild alternation so that z would otherwise spike.
  for (int i = 0; i < 40; ++i) EXPECT_FALSE(d.ingest(i % 7 == 0 ? 0.95 : 0.05).flagged);
}

TEST(Ingest, FlagMatchesThresholdRule) {
  DetectorConfig c;
  const auto values = fixture::regime_shift(17);
  Detector d(c);
  for (double x : values) {
    const auto s = d.ingest(x);
    EXPECT_EQ(s.flagged, s.index >= c.warmup && s.z.value > s.rolling_mean + c.kappa * s.rolling_std);
  }
}

TEST(Ingest, RegimeShiftIsFlaggedQuickly) {
  DetectorConfig c;  // W = 64, B = 4, kappa = 3
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto scores = replay(fixture::regime_shift(seed), c);
    std::optional<std::size_t> first;
    for (std::size_t i = 500; i < scores.size() && !first; ++i)
      if (scores[i].flagged) first = i;
    ASSERT_TRUE(first) << "seed " << seed;
    EXPECT_LE(*first, 510u) << "seed " << seed;
  }
}

// A stricter threshold keeps the pre-shift segment silent, so the first flag
// of the whole stream lands right after the shift.
TEST(Ingest, StrictThresholdFirstFlagAtShift) {
  DetectorConfig c;
  c.kappa = 6.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto scores = replay(fixture::regime_shift(seed), c);
    const auto it = std::find_if(scores.begin(), scores.end(), [](const EventScore& s) { return s.flagged; });
    ASSERT_NE(it, scores.end()) << "seed " << seed;
    EXPECT_GE(it->index, 500u) << "seed " << seed;
    EXPECT_LE(it->index, 510u) << "seed " << seed;
  }
}

TEST(Ingest, StationaryFlagRate) {
  DetectorConfig c;
  const auto scores = replay(fixture::stationary_uniform(5, 10000), c);
  std::size_t flags = 0;
  for (const auto& s : scores) flags += s.flagged;
  EXPECT_LE(static_cast<double>(flags) / scores.size(), 0.02);
}

TEST(Ingest, ConstantInputNeverFlags) {
  DetectorConfig c;
  for (const auto& s : replay(std::vector<double>(2000, 0.3), c)) EXPECT_FALSE(s.flagged);
}

TEST(Replay, EqualsSequentialIngest) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    DetectorConfig c;
    c.window = 8 + seed * 7;
    c.warmup = c.window + seed;
    c.bins = 2 + seed;
    auto values = fixture::regime_shift(seed, 300, 300);
    Rng rng(seed);
    for (auto& v : values) v += rng.uniform() - 0.5;  // some out-of-range
    Detector d(c);
    const auto batch = replay(values, c);
    ASSERT_EQ(batch.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) EXPECT_EQ(d.ingest(values[i]), batch[i]) << "index " << i;
  }
  EXPECT_TRUE(replay(std::vector<double>{}, DetectorConfig{}).empty());
  const auto one = replay(std::vector<double>{0.4}, DetectorConfig{});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_FALSE(one[0].flagged);
}

}  // namespace
}  // namespace zentropy
