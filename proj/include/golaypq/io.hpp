#pragma once

// File formats: CSV exports, JSON design records and scene configs.

#include "golaypq/ambiguity.hpp"
#include "golaypq/scene.hpp"
#include "golaypq/seqdesign.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <unistd.h>

namespace golaypq {

using json = nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Writes to a sibling temp file, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// CSV

inline std::string golay_pair_csv(const GolayPair& pair) {
  std::string out = "index,x,y\n";
  for (std::size_t i = 0; i < pair.length(); ++i) {
    out += std::to_string(i) + "," + std::to_string(pair.x[i]) + "," + std::to_string(pair.y[i]) + "\n";
  }
  return out;
}

inline std::string design_csv(const Design& d) {
  std::string out = "n,p,q\n";
  for (std::size_t n = 0; n < d.size(); ++n) {
    out += std::to_string(n) + "," + std::to_string(d.p[n]) + "," + to_string(d.q[n]) + "\n";
  }
  return out;
}

inline std::string ambiguity_csv(const CrossAmbiguityMap& map) {
  std::string out = "k,theta,re,im\n";
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    for (std::size_t t = 0; t < map.dopplers.size(); ++t) {
      const auto& v = map.at(d, t);
      out += std::to_string(map.delays[d]) + "," + format_double(map.dopplers[t]) + "," + format_double(v.real()) +
             "," + format_double(v.imag()) + "\n";
    }
  }
  return out;
}

inline std::string ambiguity_db_csv(const CrossAmbiguityMap& map) {
  std::string out = "k,theta,db\n";
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    for (std::size_t t = 0; t < map.dopplers.size(); ++t) {
      out += std::to_string(map.delays[d]) + "," + format_double(map.dopplers[t]) + "," +
             format_double(to_db(std::abs(map.at(d, t)) / map.reference)) + "\n";
    }
  }
  return out;
}

inline std::string delay_doppler_csv(const DelayDopplerMap& map) {
  std::string out = "k,theta,db\n";
  for (std::size_t d = 0; d < map.delays.size(); ++d) {
    for (std::size_t t = 0; t < map.dopplers.size(); ++t) {
      out += std::to_string(map.delays[d]) + "," + format_double(map.dopplers[t]) + "," + format_double(map.at(d, t)) +
             "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON design records

inline json bigint_to_json(const BigInt& v) {
  if (fits_int64(v)) return v.convert_to<std::int64_t>();
  return v.str();
}

inline BigInt bigint_from_json(const json& j, const std::string& field) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("field " + field + ": expected an integer");
}

inline json design_record(const Design& d, const DesignReport& r) {
  json p = json::array();
  json q = json::array();
  for (std::size_t n = 0; n < d.size(); ++n) {
    p.push_back(static_cast<int>(d.p[n]));
    q.push_back(bigint_to_json(d.q[n]));
  }
  return json{{"label", d.label},
              {"N", d.size()},
              {"M", r.null_order},
              {"p", p},
              {"q", q},
              {"snr_ratio_num", bigint_to_json(numerator_of(r.snr_ratio))},
              {"snr_ratio_den", bigint_to_json(denominator_of(r.snr_ratio))}};
}

struct DesignRecord {
  Design design;
  int null_order = -1;
  Rational snr_ratio;
};

inline DesignRecord parse_design_record(const json& j) {
  if (!j.is_object()) throw ConfigError("design record: expected a JSON object");
  auto need = [&](const char* key) -> const json& {
    if (!j.contains(key)) throw ConfigError(std::string("design record: missing field ") + key);
    return j.at(key);
  };
  DesignRecord rec;
  const auto& pj = need("p");
  const auto& qj = need("q");
  if (!pj.is_array() || !qj.is_array()) throw ConfigError("design record: p and q must be arrays");
  std::vector<std::uint8_t> bits;
  for (std::size_t i = 0; i < pj.size(); ++i) {
    if (!pj[i].is_number_integer()) throw ConfigError("field p[" + std::to_string(i) + "]: expected 0 or 1");
    const auto b = pj[i].get<int>();
    if (b != 0 && b != 1) throw ConfigError("field p[" + std::to_string(i) + "]: expected 0 or 1");
    bits.push_back(static_cast<std::uint8_t>(b));
  }
  std::vector<BigInt> weights;
  for (std::size_t i = 0; i < qj.size(); ++i) weights.push_back(bigint_from_json(qj[i], "q[" + std::to_string(i) + "]"));
  try {
    rec.design = Design{j.value("label", std::string("custom")), TransmitSequence(std::move(bits)),
                        ReceiveWeights(std::move(weights))};
    (void)rec.design.product();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("design record: ") + e.what());
  }
  const auto& nj = need("N");
  const auto& mj = need("M");
  if (!nj.is_number_integer() || !mj.is_number_integer()) throw ConfigError("design record: N and M must be integers");
  if (nj.get<std::int64_t>() != static_cast<std::int64_t>(rec.design.size())) {
    throw ConfigError("field N: does not match length of p");
  }
  rec.null_order = mj.get<int>();
  rec.snr_ratio = Rational(bigint_from_json(need("snr_ratio_num"), "snr_ratio_num"),
                           bigint_from_json(need("snr_ratio_den"), "snr_ratio_den"));
  return rec;
}

// ---------------------------------------------------------------------------
// Scene configuration

struct SceneConfig {
  Scene scene;
  std::size_t pulses = 16;
  unsigned log2_len = 6;
  double floor_halfwidth = 0.1;
};

inline double db_to_amplitude(double db) { return std::pow(10.0, db / 20.0); }
inline double db_to_power(double db) { return std::pow(10.0, db / 10.0); }

// Three equal stationary reflectors plus two slow movers 30 dB down, three
// chips from their neighbours. L = 8: with longer codes the conventional
// sidelobes near zero Doppler never reach -30 dB, so nothing gets masked.
inline SceneConfig default_scene() {
  SceneConfig cfg;
  cfg.pulses = 16;
  cfg.log2_len = 3;
  cfg.floor_halfwidth = 0.1;
  cfg.scene.window = 16;
  cfg.scene.seed = 1;
  cfg.scene.noise_power = db_to_power(-80.0);
  const Complex strong{1.0, 0.0};
  const Complex weak = db_to_amplitude(-30.0);
  cfg.scene.targets = {{-6, 0.0, strong}, {0, 0.0, strong}, {6, 0.0, strong}, {-3, 0.05, weak}, {3, -0.04, weak}};
  return cfg;
}

namespace detail {

inline std::string locate(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

template <class T>
T field(const json& obj, const std::string& key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError("field " + path + key + ": expected an integer");
    if constexpr (std::is_unsigned_v<T>) {
      if (v.get<std::int64_t>() < 0) throw ConfigError("field " + path + key + ": must be non-negative");
    }
  } else {
    if (!v.is_number()) throw ConfigError("field " + path + key + ": expected a number");
  }
  return v.get<T>();
}

}  // namespace detail

inline json scene_to_json(const SceneConfig& cfg) {
  json targets = json::array();
  for (const auto& t : cfg.scene.targets) {
    targets.push_back({{"delay_chips", t.delay_chips},
                       {"doppler", t.doppler},
                       {"amp_db", 20.0 * std::log10(std::abs(t.amplitude))},
                       {"phase", std::arg(t.amplitude)}});
  }
  return json{{"targets", targets},
              {"noise_db", cfg.scene.noise_power > 0.0 ? json(10.0 * std::log10(cfg.scene.noise_power)) : json(nullptr)},
              {"seed", cfg.scene.seed},
              {"window", cfg.scene.window},
              {"pulses", cfg.pulses},
              {"log2len", cfg.log2_len},
              {"floor_halfwidth", cfg.floor_halfwidth}};
}

/// Parses {targets:[{delay_chips, doppler, amp_db, phase}], noise_db, seed}
/// plus optional window, pulses, log2len and floor_halfwidth. noise_db null or
/// absent means a noiseless scene. Errors name the offending line or field.
inline SceneConfig parse_scene(const std::string& text, SceneConfig base = {}) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("scene config: malformed JSON at " + detail::locate(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!j.is_object()) throw ConfigError("scene config: top level must be an object");
  SceneConfig cfg = base;
  if (j.contains("targets")) {
    const auto& arr = j.at("targets");
    if (!arr.is_array()) throw ConfigError("field targets: expected an array");
    cfg.scene.targets.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "targets[" + std::to_string(i) + "].";
      const auto& t = arr[i];
      if (!t.is_object()) throw ConfigError("field targets[" + std::to_string(i) + "]: expected an object");
      if (!t.contains("delay_chips")) throw ConfigError("field " + path + "delay_chips: required");
      PointTarget pt;
      pt.delay_chips = detail::field<std::int64_t>(t, "delay_chips", path, 0);
      pt.doppler = detail::field<double>(t, "doppler", path, 0.0);
      const double amp_db = detail::field<double>(t, "amp_db", path, 0.0);
      const double phase = detail::field<double>(t, "phase", path, 0.0);
      pt.amplitude = std::polar(db_to_amplitude(amp_db), phase);
      cfg.scene.targets.push_back(pt);
    }
  }
  if (j.contains("noise_db")) {
    const auto& nd = j.at("noise_db");
    if (nd.is_null()) {
      cfg.scene.noise_power = 0.0;
    } else if (nd.is_number()) {
      cfg.scene.noise_power = db_to_power(nd.get<double>());
    } else {
      throw ConfigError("field noise_db: expected a number or null");
    }
  }
  cfg.scene.seed = detail::field<std::uint64_t>(j, "seed", "", cfg.scene.seed);
  cfg.scene.window = detail::field<std::int64_t>(j, "window", "", cfg.scene.window);
  cfg.pulses = detail::field<std::size_t>(j, "pulses", "", cfg.pulses);
  cfg.log2_len = detail::field<unsigned>(j, "log2len", "", cfg.log2_len);
  cfg.floor_halfwidth = detail::field<double>(j, "floor_halfwidth", "", cfg.floor_halfwidth);
  if (cfg.scene.window < 0) throw ConfigError("field window: must be non-negative");
  if (cfg.pulses < 2) throw ConfigError("field pulses: must be >= 2");
  if (cfg.log2_len > kMaxLog2Length) throw ConfigError("field log2len: must be <= " + std::to_string(kMaxLog2Length));
  if (!(cfg.floor_halfwidth > 0.0)) throw ConfigError("field floor_halfwidth: must be positive");
  for (std::size_t i = 0; i < cfg.scene.targets.size(); ++i) {
    if (std::llabs(cfg.scene.targets[i].delay_chips) > cfg.scene.window) {
      throw ConfigError("field targets[" + std::to_string(i) + "].delay_chips: outside the delay window +-" +
                        std::to_string(cfg.scene.window));
    }
  }
  return cfg;
}

}  // namespace golaypq
