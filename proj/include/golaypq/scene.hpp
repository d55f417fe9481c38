#pragma once

// Point-target simulation over N PRIs: per-pulse correlator outputs, Q-weighted
// Doppler processing and dB-normalized delay-Doppler maps.

#include "golaypq/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace golaypq {

struct PointTarget {
  std::int64_t delay_chips = 0;
  double doppler = 0.0;  // radians per PRI
  Complex amplitude{1.0, 0.0};
};

struct Scene {
  std::vector<PointTarget> targets;
  double noise_power = 0.0;  // N0, per input sample
  std::uint64_t seed = 0;
  std::int64_t window = 64;  // delay axis is [-window, window] chips
};

/// Complex circular Gaussian samples of variance N0, reproducible from
/// (seed, stream). Each pulse draws from its own stream so serial and
/// parallel simulation agree.
inline std::vector<Complex> inject_noise(std::uint64_t seed, double noise_power, std::size_t count,
                                         std::uint64_t stream = 0) {
  if (noise_power < 0.0 || std::isnan(noise_power)) {
    throw std::invalid_argument("inject_noise: noise power must be non-negative");
  }
  std::vector<Complex> out(count, Complex{0.0, 0.0});
  if (noise_power == 0.0) return out;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 engine(seq);
  std::normal_distribution<double> gauss(0.0, std::sqrt(noise_power / 2.0));
  for (auto& v : out) {
    const double re = gauss(engine);
    const double im = gauss(engine);
    v = {re, im};
  }
  return out;
}

struct PulseOutputs {
  std::int64_t window = 0;
  std::size_t pulses = 0;
  std::vector<Complex> values;  // u_n(k), row-major: pulse n, then k + window

  std::size_t lags() const noexcept { return static_cast<std::size_t>(2 * window + 1); }
  const Complex& at(std::size_t n, std::int64_t k) const {
    return values[n * lags() + static_cast<std::size_t>(k + window)];
  }
};

/// Per-pulse correlator outputs. Pulse n carries pulse_code(pair, p_n); each
/// target contributes b e^{j n theta} w_n(t - k_t) to the received chips and
/// u_n(k) = sum_l r_n(k + l) w_n(l).
inline PulseOutputs simulate_returns(const PulseTrainDesign& design, const Scene& scene) {
  if (scene.window < 0) throw std::invalid_argument("simulate_returns: negative delay window");
  for (const auto& t : scene.targets) {
    if (std::llabs(t.delay_chips) > scene.window) {
      throw std::out_of_range("simulate_returns: target delay " + std::to_string(t.delay_chips) +
                              " outside the delay window [-" + std::to_string(scene.window) + ", " +
                              std::to_string(scene.window) + "]");
    }
  }
  const auto chips = static_cast<std::int64_t>(design.chips());
  const std::int64_t w = scene.window;
  // Received chips span t in [-w, w + L - 1].
  const auto span_len = static_cast<std::size_t>(2 * w + chips);
  PulseOutputs out;
  out.window = w;
  out.pulses = design.pulses();
  out.values.assign(out.pulses * out.lags(), Complex{0.0, 0.0});

  for (std::size_t n = 0; n < out.pulses; ++n) {
    const ChipSequence& code = pulse_code(design.pair, design.sequences.p[n]);
    std::vector<Complex> rx = inject_noise(scene.seed, scene.noise_power, span_len, n);
    for (const auto& t : scene.targets) {
      const Complex gain = t.amplitude * std::polar(1.0, static_cast<double>(n) * t.doppler);
      for (std::int64_t l = 0; l < chips; ++l) {
        rx[static_cast<std::size_t>(t.delay_chips + l + w)] += gain * static_cast<double>(code[static_cast<std::size_t>(l)]);
      }
    }
    for (std::int64_t k = -w; k <= w; ++k) {
      Complex acc{0.0, 0.0};
      for (std::int64_t l = 0; l < chips; ++l) {
        acc += rx[static_cast<std::size_t>(k + l + w)] * static_cast<double>(code[static_cast<std::size_t>(l)]);
      }
      out.values[n * out.lags() + static_cast<std::size_t>(k + w)] = acc;
    }
  }
  return out;
}

struct ComplexMap {
  std::vector<std::int64_t> delays;
  std::vector<double> dopplers;
  std::vector<Complex> values;  // row-major: delay, then Doppler

  const Complex& at(std::size_t di, std::size_t ti) const { return values[di * dopplers.size() + ti]; }
};

/// D(k, theta) = sum_n q_n u_n(k) e^{-j n theta}. A target at Doppler
/// theta_t peaks at theta = theta_t; its response is chi(k - k_t, theta_t - theta).
inline ComplexMap doppler_process(const PulseOutputs& outputs, const ReceiveWeights& q,
                                  std::span<const double> theta_grid) {
  if (q.size() != outputs.pulses) {
    throw std::invalid_argument("doppler_process: weights have length " + std::to_string(q.size()) + " but " +
                                std::to_string(outputs.pulses) + " pulses were simulated");
  }
  if (theta_grid.empty()) throw std::invalid_argument("doppler_process: empty Doppler grid");
  const auto weights = q.as_double();
  ComplexMap map;
  map.dopplers.assign(theta_grid.begin(), theta_grid.end());
  for (std::int64_t k = -outputs.window; k <= outputs.window; ++k) map.delays.push_back(k);
  const std::size_t nt = map.dopplers.size();
  map.values.assign(map.delays.size() * nt, Complex{0.0, 0.0});
  std::vector<Complex> steer(outputs.pulses * nt);
  for (std::size_t n = 0; n < outputs.pulses; ++n) {
    for (std::size_t t = 0; t < nt; ++t) {
      steer[n * nt + t] = weights[n] * std::polar(1.0, -static_cast<double>(n) * map.dopplers[t]);
    }
  }
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    for (std::size_t n = 0; n < outputs.pulses; ++n) {
      const Complex u = outputs.at(n, map.delays[d]);
      if (u == Complex{0.0, 0.0}) continue;
      for (std::size_t t = 0; t < nt; ++t) map.values[d * nt + t] += u * steer[n * nt + t];
    }
  }
  return map;
}

struct DelayDopplerMap {
  std::vector<std::int64_t> delays;
  std::vector<double> dopplers;
  std::vector<double> db;  // row-major: delay, then Doppler; peak is 0 dB
  double normalization = 0.0;  // |D| at the peak
  std::int64_t peak_delay = 0;
  double peak_doppler = 0.0;

  double at(std::size_t di, std::size_t ti) const { return db[di * dopplers.size() + ti]; }
};

inline DelayDopplerMap normalize_db(const ComplexMap& map) {
  DelayDopplerMap out;
  out.delays = map.delays;
  out.dopplers = map.dopplers;
  std::size_t peak = 0;
  double peak_mag = 0.0;
  for (std::size_t i = 0; i < map.values.size(); ++i) {
    const double m = std::abs(map.values[i]);
    if (m > peak_mag) {
      peak_mag = m;
      peak = i;
    }
  }
  if (!(peak_mag > 0.0)) throw std::domain_error("delay_doppler_map: outputs carry no energy to normalize");
  out.normalization = peak_mag;
  out.peak_delay = map.delays[peak / map.dopplers.size()];
  out.peak_doppler = map.dopplers[peak % map.dopplers.size()];
  out.db.resize(map.values.size());
  for (std::size_t i = 0; i < map.values.size(); ++i) out.db[i] = to_db(std::abs(map.values[i]) / peak_mag);
  return out;
}

inline DelayDopplerMap delay_doppler_map(const PulseOutputs& outputs, const ReceiveWeights& q,
                                         std::span<const double> theta_grid) {
  return normalize_db(doppler_process(outputs, q, theta_grid));
}

inline Complex map_value(const PulseOutputs& outputs, const ReceiveWeights& q, std::int64_t k, double theta) {
  const double grid[] = {theta};
  const auto m = doppler_process(outputs, q, grid);
  return m.values[static_cast<std::size_t>(k + outputs.window)];
}

/// How far a target stands above the sidelobes of the stronger reflectors in
/// its own delay row.
struct TargetMargin {
  std::size_t target = 0;
  double value_db = 0.0;  // |D(k_t, theta_t)|, full scene, relative to the map peak
  double floor_db = 0.0;  // max |D| over theta_t +- halfwidth, stronger targets only
  double margin_db = 0.0;
};

/// The floor scene keeps every target with a strictly larger amplitude than the
/// one under test and the same noise realization.
inline TargetMargin target_margin(const PulseTrainDesign& design, const Scene& scene, std::size_t index,
                                  double floor_halfwidth = 0.1, std::size_t floor_points = 81) {
  if (index >= scene.targets.size()) throw std::out_of_range("target_margin: no such target");
  const PointTarget& probe = scene.targets[index];
  Scene stronger = scene;
  stronger.targets.clear();
  for (const auto& t : scene.targets) {
    if (std::abs(t.amplitude) > std::abs(probe.amplitude)) stronger.targets.push_back(t);
  }
  const auto full = simulate_returns(design, scene);
  const auto masking = simulate_returns(design, stronger);
  const auto grid = linspace(probe.doppler - floor_halfwidth, probe.doppler + floor_halfwidth, floor_points);
  const auto floor_map = doppler_process(masking, design.sequences.q, grid);
  const auto row = static_cast<std::size_t>(probe.delay_chips + scene.window);
  double floor = 0.0;
  for (std::size_t t = 0; t < grid.size(); ++t) floor = std::max(floor, std::abs(floor_map.at(row, t)));

  double peak = 0.0;
  for (const auto& t : scene.targets) peak = std::max(peak, std::abs(map_value(full, design.sequences.q, t.delay_chips, t.doppler)));
  const double value = std::abs(map_value(full, design.sequences.q, probe.delay_chips, probe.doppler));
  TargetMargin m;
  m.target = index;
  m.value_db = to_db(value / peak);
  m.floor_db = to_db(floor / peak);
  m.margin_db = m.value_db - m.floor_db;
  return m;
}

}  // namespace golaypq
