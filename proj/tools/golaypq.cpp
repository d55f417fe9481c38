// golaypq: design P/Q Golay pulse trains, export ambiguity and delay-Doppler
// maps, run the self-check suite.
//
// Exit codes: 0 ok, 1 check failure or I/O error, 2 infeasible search,
// 3 bad configuration.

#include "golaypq/ambiguity.hpp"
#include "golaypq/io.hpp"
#include "golaypq/scene.hpp"
#include "golaypq/seqdesign.hpp"
#include "golaypq/verification.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>

using namespace golaypq;
namespace fs = std::filesystem;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;

struct DesignSpec {
  std::string kind = "ptm";
  std::size_t n = 16;
  int m = -1;  // only maxsnr needs it; -1 means 8
  int bound = 5;
  std::string strategy = "lattice";
};

struct GridSpec {
  double theta_min = -std::numbers::pi;
  double theta_max = std::numbers::pi;
  std::size_t points = 1024;
};

struct BuiltDesign {
  Design design;
  DesignReport report;
  std::optional<SearchResult> search;
};

void add_design_options(CLI::App* cmd, DesignSpec& spec) {
  cmd->add_option("--kind", spec.kind, "conventional | ptm | binomial | maxsnr")
      ->check(CLI::IsMember({"conventional", "ptm", "binomial", "maxsnr"}))
      ->capture_default_str();
  cmd->add_option("--n", spec.n, "number of pulses N")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  cmd->add_option("--m", spec.m, "required null order M (maxsnr: default 8)");
  cmd->add_option("--bound", spec.bound, "maxsnr lattice coefficient bound")->check(CLI::Range(1, 1000))->capture_default_str();
  cmd->add_option("--strategy", spec.strategy, "maxsnr solver: lattice (bounded search) or exact (N <= 26)")
      ->check(CLI::IsMember({"lattice", "exact"}))
      ->capture_default_str();
}

void add_grid_options(CLI::App* cmd, GridSpec& grid, std::size_t default_points) {
  grid.points = default_points;
  cmd->add_option("--theta-min", grid.theta_min, "lowest Doppler, rad per PRI")->capture_default_str();
  cmd->add_option("--theta-max", grid.theta_max, "highest Doppler, rad per PRI")->capture_default_str();
  cmd->add_option("--theta-points", grid.points, "Doppler grid points")->check(CLI::Range(1, 1 << 20))->capture_default_str();
}

std::vector<double> make_grid(const GridSpec& g) {
  if (!(g.theta_min <= g.theta_max)) throw ConfigError("--theta-min must not exceed --theta-max");
  return linspace(g.theta_min, g.theta_max, g.points);
}

void reject_unreachable_order(std::size_t n, int m) {
  if (m >= 0 && static_cast<std::size_t>(m) + 1 >= n) {
    throw ConfigError("null order M=" + std::to_string(m) + " is unreachable with N=" + std::to_string(n) +
                      " pulses: a nonzero length-N design has order at most N-2 = " + std::to_string(n - 2) +
                      ", attained by the binomial design");
  }
}

BuiltDesign build_design(const DesignSpec& spec) {
  reject_unreachable_order(spec.n, spec.m);
  BuiltDesign out;
  try {
    if (spec.kind == "conventional") {
      out.design = conventional_design(spec.n);
    } else if (spec.kind == "ptm") {
      out.design = ptm_design(spec.n);
    } else if (spec.kind == "binomial") {
      out.design = binomial_design(spec.n);
    } else {
      const int m = spec.m < 0 ? 8 : spec.m;
      reject_unreachable_order(spec.n, m);
      out.search = spec.strategy == "exact" ? max_snr_exact(spec.n, m) : max_snr_search(spec.n, m, spec.bound);
      out.design = out.search->design;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  out.report = report_for(out.design);
  if (spec.m >= 0 && out.report.null_order < spec.m) {
    throw InfeasibleError(spec.kind + " design of length " + std::to_string(spec.n) + " has null order " +
                          std::to_string(out.report.null_order) + ", below the requested " + std::to_string(spec.m));
  }
  return out;
}

json design_config(const DesignSpec& spec) {
  json j{{"kind", spec.kind}, {"n", spec.n}, {"m", spec.m < 0 ? json(nullptr) : json(spec.m)}};
  if (spec.kind == "maxsnr") {
    j["m"] = spec.m < 0 ? 8 : spec.m;
    j["strategy"] = spec.strategy;
    if (spec.strategy == "lattice") j["bound"] = spec.bound;
  }
  return j;
}

json grid_config(const GridSpec& g) {
  return json{{"theta_min", g.theta_min}, {"theta_max", g.theta_max}, {"theta_points", g.points}};
}

json search_json(const SearchResult& s) {
  return json{{"strategy", s.strategy},
              {"coeff_bound", s.coeff_bound},
              {"certified_optimal", s.certified_optimal},
              {"leaves_evaluated", s.leaves_evaluated},
              {"nodes_visited", s.nodes_visited}};
}

json design_json(const BuiltDesign& b) {
  json j = design_record(b.design, b.report);
  j["snr_ratio"] = to_string(b.report.snr_ratio);
  j["snr_ratio_2dp"] = to_fixed(b.report.snr_ratio, 2);
  if (b.search) j["search"] = search_json(*b.search);
  return j;
}

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_atomic(out, text);
  }
}

fs::path with_suffix(const fs::path& prefix, const std::string& suffix) {
  fs::path p = prefix;
  p += suffix;
  return p;
}

// ---------------------------------------------------------------------------

int cmd_golay(unsigned log2_len, const std::string& out) {
  const std::string csv = golay_pair_csv(generate_golay_pair(log2_len));
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_atomic(out, csv);
  }
  return 0;
}

int cmd_design(const DesignSpec& spec, const std::string& out, const std::string& csv) {
  const auto built = build_design(spec);
  json j{{"config", {{"command", "design"}, {"design", design_config(spec)}}}, {"design", design_json(built)}};
  if (!csv.empty()) write_atomic(csv, design_csv(built.design));
  emit(j, out);
  return 0;
}

int cmd_table1(int bound, bool as_json) {
  struct Row {
    std::string name;
    BuiltDesign built;
  };
  std::vector<Row> rows;
  rows.push_back({"Conventional", build_design({"conventional", 16, -1, bound, "lattice"})});
  rows.push_back({"PTM", build_design({"ptm", 16, -1, bound, "lattice"})});
  rows.push_back({"Binomial", build_design({"binomial", 16, -1, bound, "lattice"})});
  rows.push_back({"Max-SNR", build_design({"maxsnr", 16, 8, bound, "exact"})});
  rows.push_back({"Max-SNR (lattice, bound " + std::to_string(bound) + ")", build_design({"maxsnr", 16, 8, bound, "lattice"})});

  if (as_json) {
    json arr = json::array();
    for (const auto& r : rows) {
      json row = design_json(r.built);
      row["row"] = r.name;
      arr.push_back(row);
    }
    emit(json{{"config", {{"command", "table1"}, {"n", 16}, {"maxsnr_m", 8}, {"bound", bound}}}, {"rows", arr}}, "");
    return 0;
  }
  std::printf("%-30s %4s %8s  %s\n", "design", "M", "SNR", "exact");
  for (const auto& r : rows) {
    std::printf("%-30s %4d %8s  %s\n", r.name.c_str(), r.built.report.null_order, to_fixed(r.built.report.snr_ratio, 2).c_str(),
                to_string(r.built.report.snr_ratio).c_str());
  }
  return 0;
}

int cmd_ambiguity(const DesignSpec& spec, unsigned log2_len, const GridSpec& grid, const std::string& out) {
  const auto built = build_design(spec);
  const PulseTrainDesign design(built.design, generate_golay_pair(log2_len));
  const auto thetas = make_grid(grid);
  const auto map = ambiguity_map(design, thetas);

  json sidelobes = json::array();
  for (double half : {0.1, 0.5, 1.0}) {
    const double lo = std::max(-half, grid.theta_min);
    const double hi = std::min(half, grid.theta_max);
    if (lo > hi) continue;
    try {
      sidelobes.push_back({{"theta_lo", lo}, {"theta_hi", hi}, {"peak_db", range_sidelobe_peak(map, lo, hi)}});
    } catch (const std::invalid_argument&) {
      // grid too coarse to land inside the interval
    }
  }
  json sidecar{{"config",
                {{"command", "ambiguity"}, {"design", design_config(spec)}, {"log2len", log2_len}, {"grid", grid_config(grid)}}},
               {"design", design_json(built)},
               {"chips", design.chips()},
               {"peak", map.reference},
               {"range_sidelobes", sidelobes},
               {"files", {with_suffix(out, ".csv").string(), with_suffix(out, "_db.csv").string()}}};
  write_atomic(with_suffix(out, ".csv"), ambiguity_csv(map));
  write_atomic(with_suffix(out, "_db.csv"), ambiguity_db_csv(map));
  write_atomic(with_suffix(out, ".json"), sidecar.dump(2) + "\n");
  std::cout << sidecar.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const std::string& scene_path, std::optional<std::uint64_t> seed, const std::vector<std::string>& kinds,
                 int bound, const std::string& strategy, const GridSpec& grid, const std::string& out) {
  SceneConfig cfg = default_scene();
  if (!scene_path.empty()) {
    try {
      cfg = parse_scene(read_file(scene_path), cfg);
    } catch (const ConfigError& e) {
      throw ConfigError(scene_path + ": " + e.what());
    }
  }
  if (seed) cfg.scene.seed = *seed;
  const auto pair = generate_golay_pair(cfg.log2_len);
  const auto thetas = make_grid(grid);
  fs::create_directories(out);

  json designs = json::array();
  for (const auto& kind : kinds) {
    const auto built = build_design({kind, cfg.pulses, -1, bound, strategy});
    const PulseTrainDesign design(built.design, pair);
    const auto outputs = simulate_returns(design, cfg.scene);
    const auto map = delay_doppler_map(outputs, built.design.q, thetas);
    const fs::path file = fs::path(out) / (kind + ".csv");
    write_atomic(file, delay_doppler_csv(map));

    json targets = json::array();
    for (std::size_t i = 0; i < cfg.scene.targets.size(); ++i) {
      const auto m = target_margin(design, cfg.scene, i, cfg.floor_halfwidth);
      targets.push_back({{"index", i},
                         {"delay_chips", cfg.scene.targets[i].delay_chips},
                         {"doppler", cfg.scene.targets[i].doppler},
                         {"value_db", m.value_db},
                         {"floor_db", m.floor_db},
                         {"margin_db", m.margin_db}});
    }
    designs.push_back({{"kind", kind},
                       {"design", design_json(built)},
                       {"map", file.string()},
                       {"peak", {{"delay_chips", map.peak_delay}, {"doppler", map.peak_doppler}, {"magnitude", map.normalization}}},
                       {"targets", targets}});
  }
  json cfg_json = scene_to_json(cfg);
  cfg_json["command"] = "simulate";
  cfg_json["scene_file"] = scene_path.empty() ? json(nullptr) : json(scene_path);
  cfg_json["grid"] = grid_config(grid);
  cfg_json["maxsnr"] = {{"m", 8}, {"strategy", strategy}, {"bound", bound}};
  const json summary{{"config", cfg_json}, {"designs", designs}};
  write_atomic(fs::path(out) / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& fault, std::optional<std::size_t> n, std::optional<int> m, const std::string& out) {
  std::optional<std::pair<std::size_t, int>> requested;
  if (n || m) {
    const std::size_t nn = n.value_or(16);
    const int mm = m.value_or(8);
    reject_unreachable_order(nn, mm);
    requested = {nn, mm};
  }

  std::vector<CheckResult> checks;
  checks.push_back(check_complementarity(12, fault == "sign-flip"));
  checks.push_back(check_table_rows());
  checks.push_back(check_exact_max_snr());
  for (int id : {3, 4, 5, 6, 7, 8, 9}) checks.push_back(run_criterion(id));
  checks.push_back(check_record_roundtrip());
  if (requested) {
    const auto [nn, mm] = *requested;
    checks.push_back(detail::timed_check("requested", "max-SNR design at N=" + std::to_string(nn) + " M=" + std::to_string(mm), 0.0,
                                         [&](CheckResult& r) {
      const auto res = nn <= 26 ? max_snr_exact(nn, mm) : max_snr_search(nn, mm, 5);
      r.passed = res.report.null_order >= mm;
      r.details.push_back(detail::describe(res.report));
    }));
  }
  // Bounded search at the default bound, reported but not counted.
  const CheckResult lattice = check_lattice_max_snr();

  bool ok = true;
  json arr = json::array();
  for (const auto& c : checks) {
    ok = ok && c.passed;
    arr.push_back(c.to_json());
    std::cerr << c.summary_line() << "\n";
  }
  json config{{"command", "verify"}, {"inject_fault", fault.empty() ? json(nullptr) : json(fault)}};
  if (requested) config["requested"] = {{"n", requested->first}, {"m", requested->second}};
  const json summary{{"config", config}, {"passed", ok}, {"checks", arr}, {"info", json::array({lattice.to_json()})}};
  emit(summary, out);
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Golay complementary P/Q pulse trains with Doppler-resilient range sidelobes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "golaypq 0.1.0");

  DesignSpec spec;
  GridSpec grid;
  unsigned log2_len = 6;
  std::string out;
  std::string csv;

  auto* golay = app.add_subcommand("golay", "export a Golay complementary pair as CSV");
  golay->add_option("--log2len", log2_len, "code length L = 2^log2len")->check(CLI::Range(0u, kMaxLog2Length))->capture_default_str();
  golay->add_option("--out", out, "output file (default stdout)");

  auto* design = app.add_subcommand("design", "build a P/Q design and report null order and SNR");
  add_design_options(design, spec);
  design->add_option("--out", out, "JSON output file (default stdout)");
  design->add_option("--csv", csv, "also write n,p,q as CSV");

  int table_bound = 5;
  bool table_json = false;
  auto* table = app.add_subcommand("table1", "null order and SNR of the four N=16 designs");
  table->add_option("--bound", table_bound, "lattice coefficient bound for the max-SNR search")->check(CLI::Range(1, 1000))->capture_default_str();
  table->add_flag("--json", table_json, "emit JSON instead of a text table");

  auto* ambiguity = app.add_subcommand("ambiguity", "export the cross-ambiguity map over delay and Doppler");
  add_design_options(ambiguity, spec);
  add_grid_options(ambiguity, grid, 1024);
  ambiguity->add_option("--log2len", log2_len, "code length L = 2^log2len")->check(CLI::Range(0u, kMaxLog2Length))->capture_default_str();
  ambiguity->add_option("--out", out, "output prefix: <prefix>.csv, <prefix>_db.csv, <prefix>.json")->required();

  std::string scene_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> kinds = {"conventional", "ptm", "binomial", "maxsnr"};
  std::string sim_strategy = "exact";
  int sim_bound = 5;
  auto* simulate = app.add_subcommand("simulate", "simulate a scene and write one delay-Doppler map per design");
  simulate->add_option("--scene", scene_path, "scene JSON (default: built-in three-reflector scene)")->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "override the scene's noise seed");
  simulate->add_option("--kinds", kinds, "designs to run")
      ->check(CLI::IsMember({"conventional", "ptm", "binomial", "maxsnr"}))
      ->delimiter(',')
      ->capture_default_str();
  simulate->add_option("--strategy", sim_strategy, "maxsnr solver")->check(CLI::IsMember({"lattice", "exact"}))->capture_default_str();
  simulate->add_option("--bound", sim_bound, "maxsnr lattice coefficient bound")->check(CLI::Range(1, 1000))->capture_default_str();
  add_grid_options(simulate, grid, 512);
  simulate->add_option("--out", out, "output directory")->required();

  std::string fault;
  std::optional<std::size_t> verify_n;
  std::optional<int> verify_m;
  auto* verify = app.add_subcommand("verify", "run the self-check suite; JSON summary on stdout");
  verify->add_option("--inject-fault", fault, "deliberately break an input (sign-flip)")->check(CLI::IsMember({"sign-flip"}));
  verify->add_option("--n", verify_n, "also certify a max-SNR design of this length");
  verify->add_option("--m", verify_m, "null order for --n (default 8)");
  verify->add_option("--out", out, "write the JSON summary here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*golay) return cmd_golay(log2_len, out);
    if (*design) return cmd_design(spec, out, csv);
    if (*table) return cmd_table1(table_bound, table_json);
    if (*ambiguity) return cmd_ambiguity(spec, log2_len, grid, out);
    if (*simulate) return cmd_simulate(scene_path, seed, kinds, sim_bound, sim_strategy, grid, out);
    if (*verify) return cmd_verify(fault, verify_n, verify_m, out);
  } catch (const ConfigError& e) {
    std::cerr << "golaypq: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasibleError& e) {
    std::cerr << "golaypq: infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::invalid_argument& e) {
    std::cerr << "golaypq: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "golaypq: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "golaypq: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}
