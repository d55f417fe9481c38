#pragma once

// Chip-discretized cross-ambiguity of the P-pulse train (transmit) against the
// Q-pulse train (receive filter):
//
//   chi(k, theta) = 1/2 [C_x(k) + C_y(k)] sum_n q_n e^{j n theta}
//                 + 1/2 [C_x(k) - C_y(k)] sum_n (-1)^{p_n} q_n e^{j n theta}
//
// theta is the Doppler shift accumulated over one PRI. Doppler within a chip
// is neglected.

#include "golaypq/golay.hpp"
#include "golaypq/seqdesign.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace golaypq {

inline constexpr double kDbFloor = -300.0;

/// Component waveform transmitted in a PRI whose schedule bit is p_n:
/// x where (-1)^{p_n} = +1, y otherwise. This is the assignment under which the
/// closed form below holds term by term.
inline const ChipSequence& pulse_code(const GolayPair& pair, std::uint8_t p_bit) {
  return p_bit ? pair.y : pair.x;
}

inline double to_db(double ratio) {
  if (!(ratio > 0.0)) return kDbFloor;
  return std::max(kDbFloor, 20.0 * std::log10(ratio));
}

struct PulseTrainDesign {
  Design sequences;
  GolayPair pair;
  double pri = 1e-4;          // T, seconds
  double chip_duration = 1e-6;  // t_c, seconds

  PulseTrainDesign() = default;
  PulseTrainDesign(Design d, GolayPair g, double pri_s = 0.0, double chip_s = 1e-6)
      : sequences(std::move(d)), pair(std::move(g)), chip_duration(chip_s) {
    if (sequences.p.size() != sequences.q.size()) {
      throw std::invalid_argument("PulseTrainDesign: P and Q lengths differ");
    }
    if (pair.x.size() != pair.y.size() || pair.x.empty()) {
      throw std::invalid_argument("PulseTrainDesign: malformed Golay pair");
    }
    if (!(chip_duration > 0.0)) throw std::invalid_argument("PulseTrainDesign: chip duration must be positive");
    // Default PRI leaves one full code length of listening time.
    pri = pri_s > 0.0 ? pri_s : 2.0 * static_cast<double>(pair.length()) * chip_duration;
    if (pri < static_cast<double>(pair.length()) * chip_duration * (1.0 - 1e-12)) {
      throw std::invalid_argument("PulseTrainDesign: PRI shorter than one waveform (T < L t_c)");
    }
  }

  std::size_t pulses() const noexcept { return sequences.p.size(); }
  std::size_t chips() const noexcept { return pair.length(); }
  std::int64_t max_lag() const noexcept { return static_cast<std::int64_t>(pair.length()) - 1; }
};

/// sum_n c_n e^{j n theta}.
inline Complex spectrum(std::span<const double> c, double theta) {
  Complex acc{0.0, 0.0};
  for (std::size_t n = 0; n < c.size(); ++n) acc += c[n] * std::polar(1.0, static_cast<double>(n) * theta);
  return acc;
}

inline Complex spectrum(const SignedProduct& c, double theta) {
  std::vector<double> v;
  v.reserve(c.size());
  for (const auto& x : c.values()) v.push_back(to_double(x));
  return spectrum(v, theta);
}

/// Closed-form evaluator. Correlation sums/differences are tabulated once.
class CrossAmbiguity {
 public:
  explicit CrossAmbiguity(const PulseTrainDesign& design)
      : chips_(static_cast<std::int64_t>(design.chips())),
        weights_(design.sequences.q.as_double()) {
    const auto cx = autocorrelation_table(design.pair.x);
    const auto cy = autocorrelation_table(design.pair.y);
    half_sum_.resize(cx.size());
    half_diff_.resize(cx.size());
    for (std::size_t i = 0; i < cx.size(); ++i) {
      half_sum_[i] = 0.5 * static_cast<double>(cx[i] + cy[i]);
      half_diff_[i] = 0.5 * static_cast<double>(cx[i] - cy[i]);
    }
    signed_.resize(weights_.size());
    for (std::size_t n = 0; n < weights_.size(); ++n) {
      signed_[n] = design.sequences.p[n] ? -weights_[n] : weights_[n];
    }
  }

  std::int64_t max_lag() const noexcept { return chips_ - 1; }

  Complex operator()(std::int64_t k, double theta) const {
    check_lag(k);
    const auto i = static_cast<std::size_t>(k + chips_ - 1);
    Complex out{0.0, 0.0};
    if (half_sum_[i] != 0.0) out += half_sum_[i] * spectrum(weights_, theta);
    if (half_diff_[i] != 0.0) out += half_diff_[i] * spectrum(signed_, theta);
    return out;
  }

  /// 1/2 [C_x(k) - C_y(k)], the range-sidelobe factor multiplying S(theta).
  double sidelobe_factor(std::int64_t k) const {
    check_lag(k);
    return half_diff_[static_cast<std::size_t>(k + chips_ - 1)];
  }

  /// L * ||q||_1, the value at (0, 0).
  double peak() const {
    double s = 0.0;
    for (double w : weights_) s += w;
    return static_cast<double>(chips_) * s;
  }

  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> signed_weights() const noexcept { return signed_; }

 private:
  void check_lag(std::int64_t k) const {
    if (std::llabs(k) > chips_ - 1) {
      throw std::out_of_range("cross_ambiguity: lag " + std::to_string(k) + " outside [-(L-1), L-1] with L = " +
                              std::to_string(chips_));
    }
  }

  std::int64_t chips_;
  std::vector<double> weights_;
  std::vector<double> signed_;
  std::vector<double> half_sum_;
  std::vector<double> half_diff_;
};

inline Complex cross_ambiguity(const PulseTrainDesign& design, std::int64_t k, double theta) {
  return CrossAmbiguity(design)(k, theta);
}

/// Waveform-level oracle: builds both pulse trains as sampled complex
/// signals, applies the per-PRI Doppler phase e^{j n theta} to the transmit
/// train and cross-correlates against the receive train at a delay of k chips.
/// Shares no code path with CrossAmbiguity.
inline Complex waveform_oracle_ambiguity(const PulseTrainDesign& design, std::int64_t k, double theta,
                                         unsigned samples_per_chip = 2) {
  const auto chips = static_cast<std::int64_t>(design.chips());
  if (std::llabs(k) > chips - 1) {
    throw std::out_of_range("waveform_oracle_ambiguity: lag " + std::to_string(k) + " outside [-(L-1), L-1]");
  }
  const ChipWaveform cfg{design.chip_duration, samples_per_chip};
  const auto xs = sample_waveform(design.pair.x, cfg);
  const auto ys = sample_waveform(design.pair.y, cfg);
  // Pulse spacing in samples; at least 2L-1 chips so neighbouring pulses never
  // overlap within the lag window.
  const auto pri_chips = std::max<std::int64_t>(static_cast<std::int64_t>(std::llround(design.pri / design.chip_duration)),
                                                2 * chips - 1);
  const auto spacing = static_cast<std::size_t>(pri_chips) * samples_per_chip;
  const std::size_t pulses = design.pulses();
  const std::size_t total = spacing * pulses;

  std::vector<Complex> tx(total, Complex{0.0, 0.0});
  std::vector<Complex> rx(total, Complex{0.0, 0.0});
  const auto q = design.sequences.q.as_double();
  for (std::size_t n = 0; n < pulses; ++n) {
    const auto& w = design.sequences.p[n] ? ys : xs;
    const Complex doppler = std::polar(1.0, static_cast<double>(n) * theta);
    for (std::size_t s = 0; s < w.size(); ++s) {
      tx[n * spacing + s] = doppler * w[s];
      rx[n * spacing + s] = q[n] * w[s];
    }
  }
  const std::int64_t shift = k * static_cast<std::int64_t>(samples_per_chip);
  Complex acc{0.0, 0.0};
  for (std::int64_t t = 0; t < static_cast<std::int64_t>(total); ++t) {
    const std::int64_t u = t - shift;
    if (u < 0 || u >= static_cast<std::int64_t>(total)) continue;
    acc += tx[static_cast<std::size_t>(t)] * std::conj(rx[static_cast<std::size_t>(u)]);
  }
  return acc;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("linspace: need at least one point");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

inline std::vector<double> default_doppler_grid() {
  return linspace(-std::numbers::pi, std::numbers::pi, 1024);
}

struct CrossAmbiguityMap {
  std::vector<std::int64_t> delays;
  std::vector<double> dopplers;
  std::vector<Complex> values;  // row-major: delay, then Doppler
  double reference = 0.0;       // |chi(0, 0)|

  const Complex& at(std::size_t di, std::size_t ti) const { return values[di * dopplers.size() + ti]; }
};

/// Dense evaluation over every lag in [-(L-1), L-1] and the given Doppler grid.
inline CrossAmbiguityMap ambiguity_map(const PulseTrainDesign& design, std::span<const double> theta_grid,
                                       unsigned threads = 0) {
  if (theta_grid.empty()) throw std::invalid_argument("ambiguity_map: empty Doppler grid");
  const CrossAmbiguity chi(design);
  CrossAmbiguityMap map;
  map.dopplers.assign(theta_grid.begin(), theta_grid.end());
  for (std::int64_t k = -chi.max_lag(); k <= chi.max_lag(); ++k) map.delays.push_back(k);
  map.values.resize(map.delays.size() * map.dopplers.size());
  map.reference = chi.peak();

  // Only two Doppler profiles exist: sum_n q_n e^{jn theta} and S(theta).
  const std::size_t nt = map.dopplers.size();
  std::vector<Complex> plain(nt), signed_spec(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    plain[t] = spectrum(chi.weights(), map.dopplers[t]);
    signed_spec[t] = spectrum(chi.signed_weights(), map.dopplers[t]);
  }
  const auto peak_row = static_cast<std::size_t>(chi.max_lag());
  auto fill_rows = [&](std::size_t begin, std::size_t end) {
    for (std::size_t d = begin; d < end; ++d) {
      const std::int64_t k = map.delays[d];
      const double diff = chi.sidelobe_factor(k);
      const double sum = (d == peak_row) ? static_cast<double>(design.chips()) : 0.0;
      for (std::size_t t = 0; t < nt; ++t) map.values[d * nt + t] = sum * plain[t] + diff * signed_spec[t];
    }
  };
  const std::size_t rows = map.delays.size();
  const unsigned workers = std::min<unsigned>(thread_budget(threads), static_cast<unsigned>(rows));
  if (workers <= 1 || rows * nt < 4096) {
    fill_rows(0, rows);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (rows + workers - 1) / workers;
    for (std::size_t b = 0; b < rows; b += chunk) pool.emplace_back(fill_rows, b, std::min(rows, b + chunk));
  }
  return map;
}

/// 20 log10 of the worst |chi(k, theta)| / |chi(0, 0)| over k != 0 and grid
/// points with theta in [lo, hi]. Exact zeros report kDbFloor.
inline double range_sidelobe_peak(const CrossAmbiguityMap& map, double lo, double hi) {
  std::vector<std::size_t> cols;
  for (std::size_t t = 0; t < map.dopplers.size(); ++t) {
    if (map.dopplers[t] >= lo && map.dopplers[t] <= hi) cols.push_back(t);
  }
  if (cols.empty() || lo > hi) {
    throw std::invalid_argument("range_sidelobe_peak: no Doppler grid points inside [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
  if (!(map.reference > 0.0)) throw std::domain_error("range_sidelobe_peak: zero reference peak");
  double worst = 0.0;
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    if (map.delays[d] == 0) continue;
    for (auto t : cols) worst = std::max(worst, std::abs(map.at(d, t)));
  }
  return to_db(worst / map.reference);
}

}  // namespace golaypq
