#include "golaypq/ambiguity.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace golaypq;

namespace {

PulseTrainDesign make(Design d, unsigned log2_len) { return PulseTrainDesign(std::move(d), generate_golay_pair(log2_len)); }

Design ptm4() { return ptm_design(4); }
Design binomial4() { return binomial_design(4); }

Design random_design(std::mt19937& rng, std::size_t n) {
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> weight(1, 9);
  std::vector<std::uint8_t> p(n);
  std::vector<std::int64_t> q(n);
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = static_cast<std::uint8_t>(bit(rng));
    q[i] = weight(rng);
  }
  return {"random", TransmitSequence(p), ReceiveWeights::from_int64(q)};
}

bool close(Complex a, Complex b, double rel) { return std::abs(a - b) <= rel * (1.0 + std::abs(a)); }

}  // namespace

TEST(CrossAmbiguity, PeakEqualsChipsTimesL1) {
  for (auto d : {conventional_design(16), ptm_design(16), binomial_design(16), binomial4()}) {
    const auto design = make(d, 6);
    const double l1 = to_double(d.q.l1());
    EXPECT_NEAR(std::abs(cross_ambiguity(design, 0, 0.0) - Complex(64.0 * l1, 0.0)), 0.0, 1e-9);
  }
}

TEST(CrossAmbiguity, ZeroDopplerCutIsImpulse) {
  for (auto d : {conventional_design(16), ptm_design(16), binomial_design(10)}) {
    const auto design = make(d, 5);
    for (std::int64_t k = -31; k <= 31; ++k) {
      if (k == 0) continue;
      EXPECT_EQ(cross_ambiguity(design, k, 0.0), Complex(0.0, 0.0)) << d.label << " k=" << k;
    }
  }
}

TEST(CrossAmbiguity, PtmMatchesOracleOffAxis) {
  const auto design = make(ptm_design(16), 6);
  const auto closed = cross_ambiguity(design, 1, 0.1);
  const auto oracle = waveform_oracle_ambiguity(design, 1, 0.1);
  EXPECT_LE(std::abs(closed - oracle), 1e-10 * std::abs(closed));
  EXPECT_GT(std::abs(closed), 0.0);
}

TEST(CrossAmbiguity, LagOutOfRange) {
  const auto design = make(ptm_design(4), 3);
  EXPECT_THROW(cross_ambiguity(design, 8, 0.0), std::out_of_range);
  EXPECT_THROW(cross_ambiguity(design, -8, 0.0), std::out_of_range);
  EXPECT_THROW(waveform_oracle_ambiguity(design, 9, 0.0), std::out_of_range);
  EXPECT_NO_THROW(cross_ambiguity(design, 7, 0.0));
}

TEST(PulseTrainDesign, Invariants) {
  EXPECT_THROW(PulseTrainDesign(ptm_design(4), generate_golay_pair(3), 7e-6, 1e-6), std::invalid_argument);
  EXPECT_NO_THROW(PulseTrainDesign(ptm_design(4), generate_golay_pair(3), 8e-6, 1e-6));
  EXPECT_THROW(PulseTrainDesign(ptm_design(4), GolayPair{{1, 1}, {1}}), std::invalid_argument);
}

TEST(Oracle, LengthFourDesigns) {
  const unsigned log2_len = 4;
  const double chips = 16.0;
  EXPECT_NEAR(std::abs(waveform_oracle_ambiguity(make(ptm4(), log2_len), 0, 0.0) - Complex(4 * chips, 0)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(waveform_oracle_ambiguity(make(binomial4(), log2_len), 0, 0.0) - Complex(8 * chips, 0)), 0.0, 1e-9);
}

TEST(Oracle, RandomAgreement) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const unsigned log2_len = std::uniform_int_distribution<unsigned>(0, 4)(rng);
    const auto design = make(random_design(rng, n), log2_len);
    const auto max_lag = design.max_lag();
    const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-max_lag, max_lag)(rng);
    const double theta = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
    const unsigned spc = std::uniform_int_distribution<unsigned>(1, 3)(rng);
    EXPECT_TRUE(close(cross_ambiguity(design, k, theta), waveform_oracle_ambiguity(design, k, theta, spc), 1e-10));
  }
}

TEST(Oracle, GridAgreement) {
  std::mt19937 rng(99);
  for (std::size_t n = 2; n <= 8; n += 3) {
    for (unsigned log2_len : {1u, 3u, 4u}) {
      const auto design = make(random_design(rng, n), log2_len);
      const CrossAmbiguity chi(design);
      const auto lags = linspace(-static_cast<double>(design.max_lag()), static_cast<double>(design.max_lag()), 21);
      for (double kk : lags) {
        const auto k = static_cast<std::int64_t>(std::llround(kk));
        for (double theta : linspace(-std::numbers::pi, std::numbers::pi, 21)) {
          EXPECT_TRUE(close(chi(k, theta), waveform_oracle_ambiguity(design, k, theta), 1e-10));
        }
      }
    }
  }
}

TEST(AmbiguityMap, SinglePointGrid) {
  const auto design = make(binomial_design(6), 3);
  const double grid[] = {0.0};
  const auto map = ambiguity_map(design, grid);
  ASSERT_EQ(map.dopplers.size(), 1u);
  ASSERT_EQ(map.delays.size(), 15u);
  EXPECT_NEAR(std::abs(map.at(7, 0) - Complex(8.0 * 32.0, 0.0)), 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(map.reference, 8.0 * 32.0);
}

TEST(AmbiguityMap, ConjugateSymmetryAndClosedFormAgreement) {
  const auto design = make(ptm_design(8), 4);
  const auto grid = linspace(-2.0, 2.0, 41);
  const auto map = ambiguity_map(design, grid, 3);
  const CrossAmbiguity chi(design);
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    for (std::size_t t = 0; t < grid.size(); ++t) {
      EXPECT_NEAR(std::abs(map.at(d, t) - std::conj(map.at(d, grid.size() - 1 - t))), 0.0, 1e-9);
      EXPECT_NEAR(std::abs(map.at(d, t) - chi(map.delays[d], grid[t])), 0.0, 1e-9);
    }
  }
  EXPECT_THROW(ambiguity_map(design, std::span<const double>{}), std::invalid_argument);
}

TEST(AmbiguityMap, DeterministicAcrossThreadCounts) {
  const auto design = make(binomial_design(16), 6);
  const auto grid = default_doppler_grid();
  const auto a = ambiguity_map(design, grid, 1);
  const auto b = ambiguity_map(design, grid, 8);
  EXPECT_EQ(a.values, b.values);
}

TEST(Spectrum, Examples) {
  EXPECT_NEAR(std::abs(spectrum(SignedProduct::from_int64(std::vector<std::int64_t>{1, -1, -1, 1}), 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(spectrum(SignedProduct::from_int64(std::vector<std::int64_t>{1, -3, 3, -1}), std::numbers::pi) -
                       Complex(8.0, 0.0)),
              0.0, 1e-12);
}

TEST(Spectrum, PtmProductIdentity) {
  const SignedProduct c(ptm_sequence(16), constant_weights(16));
  for (double theta : linspace(-std::numbers::pi, std::numbers::pi, 257)) {
    double product = 1.0;
    for (int i = 0; i <= 3; ++i) product *= 2.0 * std::abs(std::sin(std::ldexp(theta, i - 1)));
    EXPECT_NEAR(std::abs(spectrum(c, theta)), product, 1e-12);
  }
}

TEST(Properties, SidelobeFactorization) {
  std::mt19937 rng(5);
  const auto design = make(random_design(rng, 7), 4);
  const SignedProduct c = design.sequences.product();
  const CrossAmbiguity chi(design);
  for (std::int64_t k = -15; k <= 15; ++k) {
    if (k == 0) continue;
    const double half_diff =
        0.5 * static_cast<double>(autocorrelation(design.pair.x, k) - autocorrelation(design.pair.y, k));
    for (double theta : linspace(-3.0, 3.0, 13)) {
      EXPECT_NEAR(std::abs(chi(k, theta) - half_diff * spectrum(c, theta)), 0.0, 1e-10);
    }
  }
}

TEST(Properties, ZeroDelayCutIgnoresTransmitSchedule) {
  const auto a = make(Design{"a", ptm_sequence(8), binomial_weights(8)}, 4);
  const auto b = make(Design{"b", alternating_sequence(8), binomial_weights(8)}, 4);
  for (double theta : linspace(-3.0, 3.0, 31)) {
    EXPECT_NEAR(std::abs(cross_ambiguity(a, 0, theta) - cross_ambiguity(b, 0, theta)), 0.0, 1e-10);
  }
}

TEST(Properties, HigherNullClearsSmallIntervalBetter) {
  const std::vector<Design> by_order = {conventional_design(16), ptm_design(16), max_snr_exact(16, 8).design,
                                        binomial_design(16)};
  const auto grid = linspace(-0.01, 0.01, 201);
  double previous = 1e9;
  int previous_order = -2;
  for (const auto& d : by_order) {
    const int order = null_order(d.product());
    ASSERT_GT(order, previous_order);
    const double peak = range_sidelobe_peak(ambiguity_map(make(d, 6), grid), -0.01, 0.01);
    EXPECT_LE(peak, previous) << d.label;
    previous = peak;
    previous_order = order;
  }
}

TEST(RangeSidelobePeak, Levels) {
  const double zero[] = {0.0};
  EXPECT_EQ(range_sidelobe_peak(ambiguity_map(make(conventional_design(16), 6), zero), 0.0, 0.0), kDbFloor);

  const auto ptm = ambiguity_map(make(ptm_design(16), 6), linspace(-0.1, 0.1, 401));
  EXPECT_LE(range_sidelobe_peak(ptm, -0.1, 0.1), -78.0);
  const auto binom = ambiguity_map(make(binomial_design(16), 6), linspace(-1.0, 1.0, 401));
  EXPECT_LE(range_sidelobe_peak(binom, -1.0, 1.0), -80.0);

  EXPECT_THROW(range_sidelobe_peak(ptm, 0.5, 0.6), std::invalid_argument);
}
