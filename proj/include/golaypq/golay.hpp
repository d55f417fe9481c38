#pragma once

// Golay complementary pairs and their chip-level waveforms.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace golaypq {

using Chip = std::int32_t;
using ChipSequence = std::vector<Chip>;
using Complex = std::complex<double>;

inline constexpr unsigned kMaxLog2Length = 20;

/// A pair of {+1,-1} sequences whose aperiodic autocorrelations sum to 2L at
/// lag 0 and vanish at every other lag.
struct GolayPair {
  ChipSequence x;
  ChipSequence y;

  std::size_t length() const noexcept { return x.size(); }
};

/// Standard doubling recursion a' = [a b], b' = [a -b] seeded with ([1],[1]).
inline GolayPair generate_golay_pair(unsigned log2_len) {
  if (log2_len > kMaxLog2Length) {
    throw std::invalid_argument("generate_golay_pair: log2 length " + std::to_string(log2_len) +
                                " exceeds the supported maximum of " +
                                std::to_string(kMaxLog2Length));
  }
  GolayPair pair{{1}, {1}};
  for (unsigned step = 0; step < log2_len; ++step) {
    ChipSequence a = pair.x;
    a.insert(a.end(), pair.y.begin(), pair.y.end());
    ChipSequence b = pair.x;
    for (Chip v : pair.y) b.push_back(-v);
    pair.x = std::move(a);
    pair.y = std::move(b);
  }
  return pair;
}

/// Aperiodic autocorrelation C(k) = sum_l s(l) * s(l-k), out-of-range terms zero.
/// |k| >= L returns 0.
inline std::int64_t autocorrelation(std::span<const Chip> seq, std::int64_t k) {
  const auto len = static_cast<std::int64_t>(seq.size());
  if (std::llabs(k) >= len) return 0;
  std::int64_t acc = 0;
  const std::int64_t lo = std::max<std::int64_t>(0, k);
  const std::int64_t hi = std::min<std::int64_t>(len, len + k);
  for (std::int64_t l = lo; l < hi; ++l) acc += std::int64_t{seq[l]} * seq[l - k];
  return acc;
}

/// Complex-valued overload: sum_l s(l) * conj(s(l-k)).
inline Complex autocorrelation(std::span<const Complex> seq, std::int64_t k) {
  const auto len = static_cast<std::int64_t>(seq.size());
  if (std::llabs(k) >= len) return {0.0, 0.0};
  Complex acc{0.0, 0.0};
  const std::int64_t lo = std::max<std::int64_t>(0, k);
  const std::int64_t hi = std::min<std::int64_t>(len, len + k);
  for (std::int64_t l = lo; l < hi; ++l) acc += seq[l] * std::conj(seq[l - k]);
  return acc;
}

/// Full autocorrelation table, index k + (L-1) for k in [-(L-1), L-1].
inline std::vector<std::int64_t> autocorrelation_table(std::span<const Chip> seq) {
  const auto len = static_cast<std::int64_t>(seq.size());
  std::vector<std::int64_t> table;
  if (len == 0) return table;
  table.reserve(static_cast<std::size_t>(2 * len - 1));
  for (std::int64_t k = -(len - 1); k <= len - 1; ++k) table.push_back(autocorrelation(seq, k));
  return table;
}

struct ComplementarityReport {
  bool ok = false;
  std::int64_t max_abs_deviation = 0;
  std::int64_t worst_lag = 0;
};

/// Exact integer check of C_x(k) + C_y(k) = 2L delta(k) over every lag.
inline ComplementarityReport verify_complementary(const GolayPair& pair) {
  if (pair.x.size() != pair.y.size()) {
    throw std::invalid_argument("verify_complementary: sequences have different lengths (" +
                                std::to_string(pair.x.size()) + " vs " +
                                std::to_string(pair.y.size()) + ")");
  }
  if (pair.x.empty()) throw std::invalid_argument("verify_complementary: empty pair");
  const auto len = static_cast<std::int64_t>(pair.length());
  ComplementarityReport report;
  for (std::int64_t k = -(len - 1); k <= len - 1; ++k) {
    const std::int64_t target = (k == 0) ? 2 * len : 0;
    const std::int64_t dev =
        std::llabs(autocorrelation(pair.x, k) + autocorrelation(pair.y, k) - target);
    if (dev > report.max_abs_deviation) {
      report.max_abs_deviation = dev;
      report.worst_lag = k;
    }
  }
  for (std::size_t i = 0; i < pair.x.size(); ++i) {
    if (std::abs(pair.x[i]) != 1 || std::abs(pair.y[i]) != 1) return report;  // not unimodular
  }
  report.ok = report.max_abs_deviation == 0;
  return report;
}

/// Sampling parameters of a phase-coded waveform built from rectangular,
/// unit-energy chips.
struct ChipWaveform {
  double chip_duration = 1e-6;  // seconds
  unsigned samples_per_chip = 1;

  double duration(std::size_t code_length) const {
    return static_cast<double>(code_length) * chip_duration;
  }
};

/// Piecewise-constant samples of sum_l code(l) s(t - l t_c). Each chip carries
/// amplitude 1/sqrt(samples_per_chip) so that a single chip has unit energy.
inline std::vector<Complex> sample_waveform(std::span<const Chip> code, const ChipWaveform& cfg) {
  if (code.empty()) throw std::invalid_argument("sample_waveform: empty code");
  if (cfg.samples_per_chip == 0) throw std::invalid_argument("sample_waveform: samples_per_chip must be >= 1");
  const double amp = 1.0 / std::sqrt(static_cast<double>(cfg.samples_per_chip));
  std::vector<Complex> out;
  out.reserve(code.size() * cfg.samples_per_chip);
  for (Chip c : code) {
    for (unsigned s = 0; s < cfg.samples_per_chip; ++s) out.emplace_back(amp * c, 0.0);
  }
  return out;
}

inline double energy(std::span<const Complex> samples) {
  double e = 0.0;
  for (const auto& v : samples) e += std::norm(v);
  return e;
}

}  // namespace golaypq
