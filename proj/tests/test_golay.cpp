#include "golaypq/golay.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace golaypq;

namespace {

// Brute-force oracle: every (i, j) product with i - j == k.
std::int64_t oracle_autocorrelation(const ChipSequence& s, std::int64_t k) {
  std::int64_t acc = 0;
  const auto n = static_cast<std::int64_t>(s.size());
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
      if (i - j == k) acc += s[i] * s[j];
    }
  }
  return acc;
}

}  // namespace

TEST(Golay, BaseCaseLengthOne) {
  const auto g = generate_golay_pair(0);
  EXPECT_EQ(g.x, ChipSequence{1});
  EXPECT_EQ(g.y, ChipSequence{1});
  EXPECT_EQ(autocorrelation(g.x, 0) + autocorrelation(g.y, 0), 2);
}

TEST(Golay, LengthTwo) {
  const auto g = generate_golay_pair(1);
  EXPECT_EQ(g.x, (ChipSequence{1, 1}));
  EXPECT_EQ(g.y, (ChipSequence{1, -1}));
  std::vector<std::int64_t> sum;
  for (int k = -1; k <= 1; ++k) sum.push_back(autocorrelation(g.x, k) + autocorrelation(g.y, k));
  EXPECT_EQ(sum, (std::vector<std::int64_t>{0, 4, 0}));
}

TEST(Golay, Length64AgainstBruteForce) {
  const auto g = generate_golay_pair(6);
  ASSERT_EQ(g.length(), 64u);
  for (std::int64_t k = -63; k <= 63; ++k) {
    const auto s = oracle_autocorrelation(g.x, k) + oracle_autocorrelation(g.y, k);
    EXPECT_EQ(s, k == 0 ? 128 : 0) << "lag " << k;
    EXPECT_EQ(autocorrelation(g.x, k), oracle_autocorrelation(g.x, k));
  }
}

TEST(Golay, RejectsOversizedRequest) {
  EXPECT_THROW(generate_golay_pair(21), std::invalid_argument);
  EXPECT_NO_THROW(generate_golay_pair(12));
}

TEST(Autocorrelation, Examples) {
  EXPECT_EQ(autocorrelation(ChipSequence{1, 1}, 0), 2);
  EXPECT_EQ(autocorrelation(ChipSequence{1, 1, 1, -1}, 1), 1);
  EXPECT_EQ(autocorrelation(ChipSequence{1, -1}, 1), -1);
  EXPECT_EQ(autocorrelation(ChipSequence{1, -1}, 2), 0);
  EXPECT_EQ(autocorrelation(ChipSequence{1, -1}, -7), 0);
}

TEST(Autocorrelation, HermitianSymmetry) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> s(23);
  for (auto& v : s) v = {u(rng), u(rng)};
  for (int k = -22; k <= 22; ++k) {
    const auto a = autocorrelation(std::span<const Complex>(s), k);
    const auto b = std::conj(autocorrelation(std::span<const Complex>(s), -k));
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-12);
  }
}

TEST(VerifyComplementary, Reports) {
  const auto r8 = verify_complementary(generate_golay_pair(3));
  EXPECT_TRUE(r8.ok);
  EXPECT_EQ(r8.max_abs_deviation, 0);

  const auto bad = verify_complementary(GolayPair{{1, 1}, {1, 1}});
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.max_abs_deviation, 2);
  EXPECT_EQ(std::llabs(bad.worst_lag), 1);

  EXPECT_TRUE(verify_complementary(generate_golay_pair(0)).ok);
  EXPECT_THROW(verify_complementary(GolayPair{{1, 1}, {1}}), std::invalid_argument);
}

TEST(VerifyComplementary, DetectsInjectedSignFlip) {
  auto g = generate_golay_pair(5);
  g.y[11] = -g.y[11];
  const auto r = verify_complementary(g);
  EXPECT_FALSE(r.ok);
  EXPECT_GT(r.max_abs_deviation, 0);
}

TEST(VerifyComplementary, DoublingPreservesComplementarity) {
  for (unsigned m = 0; m <= 10; ++m) {
    const auto r = verify_complementary(generate_golay_pair(m));
    EXPECT_TRUE(r.ok) << "log2 length " << m;
  }
}

TEST(SampleWaveform, UnitEnergyChip) {
  const auto s = sample_waveform(ChipSequence{1}, ChipWaveform{1e-6, 4});
  ASSERT_EQ(s.size(), 4u);
  for (const auto& v : s) EXPECT_DOUBLE_EQ(v.real(), 0.5);
  EXPECT_NEAR(energy(s), 1.0, 1e-12);
}

TEST(SampleWaveform, IdentitySampling) {
  const auto s = sample_waveform(ChipSequence{1, -1}, ChipWaveform{1e-6, 1});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0], Complex(1.0, 0.0));
  EXPECT_EQ(s[1], Complex(-1.0, 0.0));
}

TEST(SampleWaveform, EnergyEqualsLength) {
  const auto g = generate_golay_pair(6);
  for (unsigned spc : {1u, 3u, 8u}) {
    const ChipWaveform cfg{2e-7, spc};
    EXPECT_NEAR(energy(sample_waveform(g.x, cfg)), 64.0, 1e-9);
    EXPECT_NEAR(cfg.duration(g.length()), 64 * 2e-7, 1e-18);
  }
}

TEST(SampleWaveform, Errors) {
  EXPECT_THROW(sample_waveform(ChipSequence{}, ChipWaveform{}), std::invalid_argument);
  EXPECT_THROW(sample_waveform(ChipSequence{1}, ChipWaveform{1e-6, 0}), std::invalid_argument);
}
