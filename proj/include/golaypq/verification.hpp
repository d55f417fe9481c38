#pragma once

// Self-checks shared by `golaypq verify` and the acceptance binary. Each check
// recomputes its claim from scratch and reports what it measured.

#include "golaypq/ambiguity.hpp"
#include "golaypq/golay.hpp"
#include "golaypq/io.hpp"
#include "golaypq/scene.hpp"
#include "golaypq/seqdesign.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace golaypq {

struct CheckResult {
  std::string id;
  std::string title;
  bool passed = false;
  std::vector<std::string> details;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0 means unlimited

  std::string summary_line() const {
    std::ostringstream os;
    os << (passed ? "PASS" : "FAIL") << " " << id << ": " << title << " (" << std::fixed;
    os.precision(2);
    os << seconds << " s";
    if (budget_seconds > 0.0) os << ", budget " << budget_seconds << " s";
    os << ")";
    for (const auto& d : details) os << "; " << d;
    return os.str();
  }

  json to_json() const {
    return json{{"id", id}, {"title", title}, {"passed", passed}, {"details", details}, {"seconds", seconds},
                {"budget_seconds", budget_seconds}};
  }
};

namespace detail {

// Runs body(result), then fails the result if it overran its budget or threw.
inline CheckResult timed_check(std::string id, std::string title, double budget,
                               const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.budget_seconds = budget;
  r.passed = true;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.details.push_back(std::string("exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0.0 && r.seconds > budget) {
    r.passed = false;
    r.details.push_back("over time budget");
  }
  return r;
}

inline std::string fmt(double v, int precision = 2) {
  std::ostringstream os;
  os << std::fixed;
  os.precision(precision);
  os << v;
  return os.str();
}

inline std::string describe(const DesignReport& r) {
  return r.label + " M=" + std::to_string(r.null_order) + " SNR=" + to_string(r.snr_ratio) + " (" +
         to_fixed(r.snr_ratio, 2) + ")";
}

// Every sign pattern times every weight vector in [1, qmax]^N.
inline void for_each_signed_product(std::size_t n, int qmax, const std::function<bool(const std::vector<std::int64_t>&)>& fn) {
  const auto base = static_cast<std::uint64_t>(2 * qmax);
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= base;
  std::vector<std::int64_t> c(n);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t r = code;
    for (std::size_t i = 0; i < n; ++i) {
      const auto digit = static_cast<std::int64_t>(r % base);
      r /= base;
      c[i] = digit < qmax ? digit + 1 : -(digit - qmax + 1);
    }
    if (!fn(c)) return;
  }
}

// log2 |S(2h)| / |S(h)|, evaluated in long double.
inline double null_slope(const std::vector<std::int64_t>& c, long double h = 1e-3L) {
  auto mag = [&](long double theta) {
    long double re = 0.0L, im = 0.0L;
    for (std::size_t k = 0; k < c.size(); ++k) {
      re += static_cast<long double>(c[k]) * std::cos(theta * static_cast<long double>(k));
      im += static_cast<long double>(c[k]) * std::sin(theta * static_cast<long double>(k));
    }
    return std::hypot(re, im);
  };
  return static_cast<double>(std::log2(mag(2 * h) / mag(h)));
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CheckResult check_complementarity(unsigned max_log2 = 12, bool inject_sign_flip = false) {
  return detail::timed_check("complementarity", "Golay pairs sum to a delta at every lag", 0.0, [&](CheckResult& r) {
    for (unsigned m = 0; m <= max_log2; ++m) {
      auto pair = generate_golay_pair(m);
      if (inject_sign_flip) pair.x[pair.length() / 2] = -pair.x[pair.length() / 2];
      const auto rep = verify_complementary(pair);
      if (!rep.ok) {
        r.passed = false;
        r.details.push_back("L=" + std::to_string(pair.length()) + " deviates by " +
                            std::to_string(rep.max_abs_deviation) + " at lag " + std::to_string(rep.worst_lag));
      }
    }
    if (r.passed) r.details.push_back("L = 1.." + std::to_string(1u << max_log2));
  });
}

// Conventional, PTM and binomial rows at N = 16, exact.
inline CheckResult check_table_rows() {
  return detail::timed_check("1", "null order and SNR table rows, exact", 1.0, [](CheckResult& r) {
    struct Row {
      Design d;
      int order;
      Rational snr;
      const char* rounded;
    };
    const std::vector<Row> rows = {
        {conventional_design(16), 0, Rational(16), "16.00"},
        {ptm_design(16), 3, Rational(16), "16.00"},
        {binomial_design(16), 14, Rational(BigInt(1) << 30, BigInt(155117520)), "6.92"},
    };
    for (const auto& row : rows) {
      const auto rep = report_for(row.d);
      const bool ok = rep.null_order == row.order && rep.snr_ratio == row.snr && to_fixed(rep.snr_ratio, 2) == row.rounded;
      r.passed = r.passed && ok;
      r.details.push_back(detail::describe(rep) + (ok ? "" : " expected M=" + std::to_string(row.order) + " SNR " + row.rounded));
    }
  });
}

inline CheckResult check_lattice_max_snr(int bound = 5, unsigned threads = 1) {
  return detail::timed_check("2", "lattice max-SNR search N=16 M=8 bound " + std::to_string(bound) + " reaches 13.5", 60.0,
                             [&](CheckResult& r) {
    const auto res = max_snr_search(16, 8, bound, threads);
    const double snr = to_double(res.report.snr_ratio);
    r.passed = res.report.null_order >= 8 && snr >= 13.5;
    r.details.push_back("found " + detail::describe(res.report) + " = " + detail::fmt(snr, 4));
    r.details.push_back(std::string(snr >= 13.76 ? "meets" : "below") + " 13.76");
    r.details.push_back("leaves " + std::to_string(res.leaves_evaluated));
  });
}

// Unbounded-coefficient optimum at the same order, for comparison with the
// bounded search.
inline CheckResult check_exact_max_snr() {
  return detail::timed_check("maxsnr-exact", "max-SNR design at N=16 M=8 rounds to 13.76", 30.0, [](CheckResult& r) {
    const auto res = max_snr_exact(16, 8);
    r.passed = res.report.null_order >= 8 && to_fixed(res.report.snr_ratio, 2) == "13.76" && res.certified_optimal;
    r.details.push_back(detail::describe(res.report) + " = " + detail::fmt(to_double(res.report.snr_ratio), 4));
    r.details.push_back(res.certified_optimal ? "certified optimal" : "not certified");
  });
}

inline CheckResult check_ptm_family() {
  return detail::timed_check("3", "PTM with N = 2^(M+1) has null order exactly M, M = 1..6", 1.0, [](CheckResult& r) {
    for (int m = 1; m <= 6; ++m) {
      const std::size_t n = std::size_t{1} << (m + 1);
      const int got = null_order(ptm_design(n).product());
      if (got != m) {
        r.passed = false;
        r.details.push_back("N=" + std::to_string(n) + " gives " + std::to_string(got));
      }
    }
    if (r.passed) r.details.push_back("N = 4..128");
  });
}

inline CheckResult check_binomial_family() {
  return detail::timed_check("4", "binomial null order N-2 for N = 3..20, order N-1 unreachable for N <= 7", 30.0,
                             [](CheckResult& r) {
    for (std::size_t n = 3; n <= 20; ++n) {
      const int got = null_order(binomial_design(n).product());
      if (got != static_cast<int>(n) - 2) {
        r.passed = false;
        r.details.push_back("binomial N=" + std::to_string(n) + " gives " + std::to_string(got));
      }
    }
    // Direct moments in 128-bit integers up to order N-1.
    std::uint64_t tried = 0;
    for (std::size_t n = 2; n <= 7; ++n) {
      detail::for_each_signed_product(n, 3, [&](const std::vector<std::int64_t>& c) {
        ++tried;
        for (std::size_t m = 0; m + 1 < n + 1; ++m) {
          __int128 acc = 0;
          for (std::size_t i = 0; i < n; ++i) {
            __int128 p = 1;
            for (std::size_t e = 0; e < m; ++e) p *= static_cast<__int128>(i);
            acc += p * c[i];
          }
          if (acc != 0) return true;
        }
        r.passed = false;
        r.details.push_back("N=" + std::to_string(n) + " design reaches order N-1");
        return false;
      });
    }
    r.details.push_back(std::to_string(tried) + " brute-force designs, none reach order N-1");
  });
}

inline CheckResult check_null_equivalence() {
  return detail::timed_check("5", "matrix check, moment check and spectral slope agree, N <= 6, q in {1,2}", 60.0,
                             [](CheckResult& r) {
    std::uint64_t tried = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
      detail::for_each_signed_product(n, 2, [&](const std::vector<std::int64_t>& c) {
        ++tried;
        const auto sp = SignedProduct::from_int64(c);
        const int certified = null_order(sp);
        const double slope = detail::null_slope(c);
        for (int m = 0; m + 1 < static_cast<int>(n); ++m) {
          const bool matrix = vandermonde_check(sp, m);
          const bool moments = certified >= m;
          const bool numeric = slope >= m + 1 - 0.1;
          if (matrix != moments || matrix != numeric) {
            r.passed = false;
            r.details.push_back("disagreement at N=" + std::to_string(n) + " m=" + std::to_string(m) +
                                " slope " + detail::fmt(slope, 3));
            return false;
          }
        }
        return true;
      });
    }
    r.details.push_back(std::to_string(tried) + " designs");
  });
}

inline CheckResult check_oracle(std::size_t cases = 200, std::uint64_t seed = 20240601) {
  return detail::timed_check("6", "closed-form cross-ambiguity matches waveform oracle", 10.0, [&](CheckResult& r) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pulses(2, 8);
    std::uniform_int_distribution<unsigned> log2_len(0, 4);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<std::int64_t> weight(1, 9);
    std::uniform_real_distribution<double> doppler(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0;
    for (std::size_t i = 0; i < cases; ++i) {
      const std::size_t n = pulses(rng);
      std::vector<std::uint8_t> p(n);
      std::vector<std::int64_t> q(n);
      for (std::size_t j = 0; j < n; ++j) {
        p[j] = static_cast<std::uint8_t>(bit(rng));
        q[j] = weight(rng);
      }
      const PulseTrainDesign design(Design{"random", TransmitSequence(p), ReceiveWeights::from_int64(q)},
                                    generate_golay_pair(log2_len(rng)));
      const auto max_lag = static_cast<std::int64_t>(design.chips()) - 1;
      const std::int64_t k = std::uniform_int_distribution<std::int64_t>(-max_lag, max_lag)(rng);
      const double theta = doppler(rng);
      const Complex closed = cross_ambiguity(design, k, theta);
      const Complex oracle = waveform_oracle_ambiguity(design, k, theta);
      // Relative to |oracle|, or absolute when the true value is below 1.
      const double err = std::abs(closed - oracle) / std::max(1.0, std::abs(oracle));
      worst = std::max(worst, err);
    }
    r.passed = worst <= 1e-10;
    std::ostringstream os;
    os << cases << " cases, worst relative error " << worst;
    r.details.push_back(os.str());
  });
}

struct ClearedInterval {
  std::string label;
  Design design;
  double lo;
  double hi;
  double limit_db;
};

inline std::vector<ClearedInterval> cleared_interval_claims() {
  return {
      {"ptm", ptm_design(16), -0.1, 0.1, -78.0},
      {"binomial", binomial_design(16), -1.0, 1.0, -80.0},
      {"maxsnr (exact)", max_snr_exact(16, 8).design, -0.5, 0.5, -80.0},
      {"maxsnr (lattice, bound 5)", max_snr_search(16, 8, 5).design, -0.5, 0.5, -80.0},
  };
}

inline CheckResult check_cleared_intervals() {
  return detail::timed_check("7", "range sidelobes cleared near zero Doppler at N=16, L=64", 10.0, [](CheckResult& r) {
    const auto pair = generate_golay_pair(6);
    for (const auto& claim : cleared_interval_claims()) {
      const PulseTrainDesign design(claim.design, pair);
      const auto map = ambiguity_map(design, linspace(claim.lo, claim.hi, 2001));
      const double level = range_sidelobe_peak(map, claim.lo, claim.hi);
      const bool ok = level <= claim.limit_db;
      r.passed = r.passed && ok;
      r.details.push_back(claim.label + " [" + detail::fmt(claim.lo, 1) + ", " + detail::fmt(claim.hi, 1) +
                          "] " + detail::fmt(level, 1) + " dB (limit " + detail::fmt(claim.limit_db, 0) + ")");
    }
  });
}

inline CheckResult check_default_scene() {
  return detail::timed_check("8", "weak targets beside strong reflectors: masked by conventional, clear otherwise", 10.0,
                             [](CheckResult& r) {
    const auto cfg = default_scene();
    const auto pair = generate_golay_pair(cfg.log2_len);
    std::vector<std::size_t> weak;
    double strongest = 0.0;
    for (const auto& t : cfg.scene.targets) strongest = std::max(strongest, std::abs(t.amplitude));
    for (std::size_t i = 0; i < cfg.scene.targets.size(); ++i) {
      if (std::abs(cfg.scene.targets[i].amplitude) < strongest) weak.push_back(i);
    }
    const std::vector<std::pair<Design, bool>> cases = {
        {conventional_design(cfg.pulses), false},
        {ptm_design(cfg.pulses), true},
        {binomial_design(cfg.pulses), true},
        {max_snr_exact(cfg.pulses, 8).design, true},
    };
    for (const auto& [d, should_clear] : cases) {
      const PulseTrainDesign design(d, pair);
      std::string line = d.label + (should_clear ? "" : " (expect masked)") + " margins";
      for (auto i : weak) {
        const auto m = target_margin(design, cfg.scene, i, cfg.floor_halfwidth);
        const bool ok = should_clear ? m.margin_db >= 20.0 : m.margin_db < 3.0;
        r.passed = r.passed && ok;
        line += " " + detail::fmt(m.margin_db, 1) + " dB";
      }
      r.details.push_back(line);
    }
  });
}

inline CheckResult check_noise_power(std::size_t trials = 10000) {
  return detail::timed_check("9", "empirical output noise power matches N0 L ||q||^2", 30.0, [&](CheckResult& r) {
    const double n0 = 0.5;
    const auto pair = generate_golay_pair(3);
    for (auto d : {ptm_design(16), binomial_design(16)}) {
      const PulseTrainDesign design(d, pair);
      Scene s;
      s.window = 0;
      s.noise_power = n0;
      double acc = 0.0;
      for (std::size_t i = 0; i < trials; ++i) {
        s.seed = 7000 + i;
        acc += std::norm(map_value(simulate_returns(design, s), d.q, 0, 0.25));
      }
      const double got = acc / static_cast<double>(trials);
      const double expect = output_noise_power(d.q, n0, design.chips());
      const double rel = std::abs(got / expect - 1.0);
      r.passed = r.passed && rel <= 0.05;
      r.details.push_back(d.label + " " + detail::fmt(got, 1) + " vs " + detail::fmt(expect, 1) + " (" +
                          detail::fmt(100.0 * rel, 2) + "%)");
    }
  });
}

inline CheckResult check_record_roundtrip() {
  return detail::timed_check("roundtrip", "design records re-read to the same null order and SNR", 0.0, [](CheckResult& r) {
    for (auto d : {conventional_design(16), ptm_design(16), binomial_design(16), max_snr_exact(16, 8).design}) {
      const auto rep = report_for(d);
      const auto rec = parse_design_record(json::parse(design_record(d, rep).dump()));
      const auto again = report_for(rec.design);
      if (again.null_order != rep.null_order || again.snr_ratio != rep.snr_ratio || rec.snr_ratio != rep.snr_ratio) {
        r.passed = false;
        r.details.push_back(d.label + " changed after round trip");
      }
    }
  });
}

/// Acceptance criteria by number, 1..9.
inline CheckResult run_criterion(int id) {
  switch (id) {
    case 1: return check_table_rows();
    case 2: return check_lattice_max_snr();
    case 3: return check_ptm_family();
    case 4: return check_binomial_family();
    case 5: return check_null_equivalence();
    case 6: return check_oracle();
    case 7: return check_cleared_intervals();
    case 8: return check_default_scene();
    case 9: return check_noise_power();
    default: throw std::out_of_range("no acceptance criterion " + std::to_string(id));
  }
}

}  // namespace golaypq
