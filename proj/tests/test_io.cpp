#include "golaypq/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace golaypq;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string config_error(const std::string& text) {
  try {
    parse_scene(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("golaypq_io_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Csv, GolayPair) {
  const auto rows = lines(golay_pair_csv(generate_golay_pair(2)));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "index,x,y");
  EXPECT_EQ(rows[1], "0,1,1");
  EXPECT_EQ(rows[2], "1,1,1");
  EXPECT_EQ(rows[3], "2,1,-1");
  EXPECT_EQ(rows[4], "3,-1,1");
}

TEST(Csv, Design) {
  const auto rows = lines(design_csv(binomial_design(4)));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "n,p,q");
  EXPECT_EQ(rows[1], "0,1,1");
  EXPECT_EQ(rows[2], "1,0,3");
  EXPECT_EQ(rows[3], "2,1,3");
  EXPECT_EQ(rows[4], "3,0,1");
}

TEST(Csv, AmbiguityShapeAndPeak) {
  const PulseTrainDesign design(ptm_design(4), generate_golay_pair(2));
  const auto map = ambiguity_map(design, linspace(-1.0, 1.0, 3), 1);
  const auto rows = lines(ambiguity_csv(map));
  ASSERT_EQ(rows.size(), 1u + 7u * 3u);
  EXPECT_EQ(rows[0], "k,theta,re,im");
  // k = 0, theta = 0 sits in the middle: 4 chips times l1 = 4.
  EXPECT_EQ(rows[1 + 3 * 3 + 1], "0,0,16,0");
  const auto db = lines(ambiguity_db_csv(map));
  EXPECT_EQ(db[0], "k,theta,db");
  EXPECT_EQ(db[1 + 3 * 3 + 1], "0,0,0");
}

TEST(Csv, FormatDoubleRoundTrips) {
  for (double v : {0.1, -2.5e-300, 1.0 / 3.0, 12345678.9, -0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(-300.0), "-300");
}

TEST(DesignRecord, RoundTripPreservesNullOrderAndSnr) {
  for (auto d : {conventional_design(8), ptm_design(16), binomial_design(12), max_snr_exact(16, 8).design}) {
    const auto report = report_for(d);
    const auto text = design_record(d, report).dump();
    const auto rec = parse_design_record(json::parse(text));
    EXPECT_EQ(rec.design.p.bits(), d.p.bits());
    EXPECT_EQ(rec.design.q.weights(), d.q.weights());
    EXPECT_EQ(rec.null_order, report.null_order);
    EXPECT_EQ(rec.snr_ratio, report.snr_ratio);
    const auto again = report_for(rec.design);
    EXPECT_EQ(again.null_order, report.null_order);
    EXPECT_EQ(again.snr_ratio, report.snr_ratio);
  }
}

TEST(DesignRecord, HugeWeightsSerializeAsStrings) {
  const auto d = binomial_design(80);
  const auto j = design_record(d, report_for(d));
  EXPECT_TRUE(j.at("q")[40].is_string());
  EXPECT_TRUE(j.at("q")[0].is_number_integer());
  const auto rec = parse_design_record(j);
  EXPECT_EQ(rec.design.q.weights(), d.q.weights());
}

TEST(DesignRecord, Rejections) {
  auto base = design_record(ptm_design(4), report_for(ptm_design(4)));
  auto broken = base;
  broken["p"][1] = 2;
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken["q"][0] = 0;
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken["q"][0] = "abc";
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken["N"] = 5;
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken["N"] = "4";
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken.erase("snr_ratio_den");
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  broken = base;
  broken["q"].push_back(1);
  EXPECT_THROW(parse_design_record(broken), ConfigError);
  EXPECT_THROW(parse_design_record(json::array()), ConfigError);
}

TEST(SceneConfigParse, FullDocument) {
  const auto cfg = parse_scene(R"({
    "targets": [{"delay_chips": -2, "doppler": 0.25, "amp_db": -20, "phase": 1.5},
                {"delay_chips": 4}],
    "noise_db": -30, "seed": 9, "window": 10, "pulses": 8, "log2len": 4, "floor_halfwidth": 0.2
  })");
  ASSERT_EQ(cfg.scene.targets.size(), 2u);
  EXPECT_EQ(cfg.scene.targets[0].delay_chips, -2);
  EXPECT_DOUBLE_EQ(cfg.scene.targets[0].doppler, 0.25);
  EXPECT_NEAR(std::abs(cfg.scene.targets[0].amplitude), 0.1, 1e-15);
  EXPECT_NEAR(std::arg(cfg.scene.targets[0].amplitude), 1.5, 1e-12);
  EXPECT_EQ(cfg.scene.targets[1].amplitude, Complex(1.0, 0.0));
  EXPECT_NEAR(cfg.scene.noise_power, 1e-3, 1e-18);
  EXPECT_EQ(cfg.scene.seed, 9u);
  EXPECT_EQ(cfg.scene.window, 10);
  EXPECT_EQ(cfg.pulses, 8u);
  EXPECT_EQ(cfg.log2_len, 4u);
  EXPECT_DOUBLE_EQ(cfg.floor_halfwidth, 0.2);
}

TEST(SceneConfigParse, NullNoiseIsNoiseless) {
  SceneConfig base;
  base.scene.noise_power = 5.0;
  EXPECT_EQ(parse_scene(R"({"noise_db": null})", base).scene.noise_power, 0.0);
}

TEST(SceneConfigParse, DefaultSceneRoundTrips) {
  const auto cfg = default_scene();
  const auto back = parse_scene(scene_to_json(cfg).dump());
  ASSERT_EQ(back.scene.targets.size(), cfg.scene.targets.size());
  for (std::size_t i = 0; i < cfg.scene.targets.size(); ++i) {
    EXPECT_EQ(back.scene.targets[i].delay_chips, cfg.scene.targets[i].delay_chips);
    EXPECT_DOUBLE_EQ(back.scene.targets[i].doppler, cfg.scene.targets[i].doppler);
    EXPECT_NEAR(std::abs(back.scene.targets[i].amplitude - cfg.scene.targets[i].amplitude), 0.0, 1e-14);
  }
  EXPECT_NEAR(back.scene.noise_power / cfg.scene.noise_power, 1.0, 1e-12);
  EXPECT_EQ(back.scene.seed, cfg.scene.seed);
  EXPECT_EQ(back.scene.window, cfg.scene.window);
  EXPECT_EQ(back.pulses, cfg.pulses);
  EXPECT_EQ(back.log2_len, cfg.log2_len);
}

TEST(SceneConfigParse, DiagnosticsNameTheProblem) {
  EXPECT_NE(config_error("{\n  \"seed\": 1,\n  oops\n}").find("line 3"), std::string::npos);
  EXPECT_NE(config_error(R"({"targets": [{"doppler": 0.1}]})").find("targets[0].delay_chips"), std::string::npos);
  EXPECT_NE(config_error(R"({"targets": [{"delay_chips": 1}, {"delay_chips": "x"}]})").find("targets[1].delay_chips"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"seed": -1})").find("seed"), std::string::npos);
  EXPECT_NE(config_error(R"({"noise_db": "loud"})").find("noise_db"), std::string::npos);
  EXPECT_NE(config_error(R"({"window": 2, "targets": [{"delay_chips": 3}]})").find("targets[0].delay_chips"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"pulses": 1})").find("pulses"), std::string::npos);
  EXPECT_NE(config_error(R"({"log2len": 30})").find("log2len"), std::string::npos);
  EXPECT_NE(config_error(R"({"targets": 3})").find("targets"), std::string::npos);
  EXPECT_NE(config_error("[1, 2]").find("top level"), std::string::npos);
}

TEST(Files, AtomicWriteReplacesContentAndLeavesNoTemp) {
  const auto dir = scratch_dir();
  const auto path = dir / "out.csv";
  write_atomic(path, "first\n");
  write_atomic(path, "second\n");
  EXPECT_EQ(read_file(path), "second\n");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
  EXPECT_EQ(entries, 1u);
  std::filesystem::remove_all(dir);
}

TEST(Files, Errors) {
  EXPECT_THROW(read_file("/nonexistent/golaypq/file.json"), ConfigError);
  EXPECT_THROW(write_atomic("/nonexistent/golaypq/out.csv", "x"), std::runtime_error);
}
