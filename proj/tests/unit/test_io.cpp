#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oamspec/csv.hpp"
#include "oamspec/pipeline.hpp"
#include "oamspec/serialization.hpp"

using namespace oamspec;
namespace fs = std::filesystem;

namespace {

class ScratchDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("oamspec_io_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

}  // namespace

TEST(Csv, QuotingRoundTrip) {
  CsvTable t;
  t.header = {"name", "note", "value"};
  t.rows = {{"plain", "has,comma", "1.5"}, {"quote\"d", "line\nbreak", ""}, {" padded ", "x", "-2e-9"}};
  const auto text = format_csv(t);
  EXPECT_NE(text.find("\"has,comma\""), std::string::npos);
  EXPECT_NE(text.find("\"quote\"\"d\""), std::string::npos);
  EXPECT_NE(text.find("\r\n"), std::string::npos);
  const auto back = parse_csv(text);
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_TRUE(back.has_column("note"));
  EXPECT_FALSE(back.has_column("missing"));
}

TEST(Csv, AcceptsLfAndRejectsRaggedRows) {
  const auto t = parse_csv("a,b\n1,2\n3,4\n");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][0], "3");
  EXPECT_THROW(parse_csv("a,b\n1,2,3\n"), std::invalid_argument);
  EXPECT_THROW(parse_csv("a,b\n\"open,2\n"), std::invalid_argument);
}

TEST(Csv, ParseDouble) {
  EXPECT_DOUBLE_EQ(parse_double("1.25"), 1.25);
  EXPECT_DOUBLE_EQ(parse_double("-3e-4"), -3e-4);
  EXPECT_THROW(parse_double("abc"), std::invalid_argument);
  EXPECT_THROW(parse_double("1.5x"), std::invalid_argument);
  EXPECT_THROW(parse_double("nan"), std::invalid_argument);
  EXPECT_THROW(parse_double(""), std::invalid_argument);
}

TEST(Serialization, FormatNumberRoundTrips) {
  gen::Rng rng(2);
  for (int trial = 0; trial < 1000; ++trial) {
    const double v = gen::uniform_real(rng, -1.0, 1.0) * std::pow(10.0, gen::uniform_int(rng, -300, 300));
    EXPECT_EQ(parse_double(format_number(v)), v);
  }
}

TEST(Serialization, SpectrumJsonRoundTrip) {
  gen::Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = gen::random_spectrum(rng, gen::uniform_int(rng, 1, 40), trial % 2 == 0);
    const auto back = spectrum_from_json(Json::parse(spectrum_to_json(s).dump()));
    ASSERT_EQ(back.truncation(), s.truncation());
    for (int l = -s.truncation(); l <= s.truncation(); ++l) EXPECT_EQ(back.at(l), s.at(l));
  }
  const auto obj = spectrum_from_json(Json::parse(R"({"N": 1, "values": [0.25, 0.5, 0.25]})"));
  EXPECT_EQ(obj.at(0), 0.5);
  EXPECT_THROW(spectrum_from_json(Json::parse(R"({"N": 1, "values": [0.5, 0.5]})")), std::invalid_argument);
  EXPECT_THROW(spectrum_from_json(Json::parse(R"([{"l": 0, "s": 0.5}])")), std::invalid_argument);
}

TEST(Serialization, StateJsonRoundTrip) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto st = gen::random_state(rng, gen::uniform_int(rng, 1, 6), gen::uniform_int(rng, 1, 3));
    const auto back = state_from_json(Json::parse(state_to_json(st).dump()));
    ASSERT_EQ(back.dimension(), st.dimension());
    EXPECT_EQ(back.density_matrix(), st.density_matrix());
  }
}

TEST_F(ScratchDir, TraceFileRoundTrip) {
  InterferometerConfig cfg;
  cfg.noise.background = 0.5;
  cfg.noise.drift = 0.01;
  cfg.noise.shot_noise = true;
  cfg.noise.seed = 99;
  const auto s = spectrum_of(gaussian_pure_state(4.0, 20));
  const auto trace = simulate_trace(s, cfg, uniform_grid(41, -0.3), std::numbers::pi, 1);
  const auto path = dir_ / "trace.csv";
  write_trace(path, trace);
  EXPECT_TRUE(fs::exists(sidecar_path(path)));
  const auto back = read_trace(path);
  EXPECT_EQ(back.delta, trace.delta);
  ASSERT_EQ(back.samples.size(), trace.samples.size());
  for (std::size_t k = 0; k < trace.samples.size(); ++k) {
    EXPECT_EQ(back.samples[k].theta, trace.samples[k].theta);
    EXPECT_EQ(back.samples[k].value, trace.samples[k].value);
  }
  EXPECT_EQ(back.meta.config_hash, trace.meta.config_hash);
  EXPECT_EQ(back.meta.seed, trace.meta.seed);
  EXPECT_EQ(back.meta.shot_index, 1);
  EXPECT_EQ(back.meta.background, 0.5);
  EXPECT_EQ(back.meta.drift, 0.01);
}

TEST_F(ScratchDir, TraceWithoutSidecarIsRejected) {
  std::ofstream(dir_ / "bare.csv") << "theta_rad,value\n0,1\n";
  EXPECT_ANY_THROW(read_trace(dir_ / "bare.csv"));
}

TEST_F(ScratchDir, FilePipelineMatchesInMemory) {
  const auto config = dir_ / "run.json";
  std::ofstream(config) << R"({
    "state": {"kind": "gaussian", "sigma": 4, "N": 20},
    "interferometer": {"k1": 0.5, "k2": 0.5, "polarization": {"kind": "analytic", "a": 0.3}},
    "noise": {"background": 2.0, "shot_noise": true, "photons_per_unit": 100000},
    "grid": {"plan_sampling": true, "oversample": 2},
    "protocol": "four_shot",
    "seed": 11
  })";
  const auto sim = dir_ / "sim";
  run_simulate(config, sim);
  run_reconstruct(sim / "reconstruct.json", dir_ / "rec");
  const Json result = read_json(dir_ / "rec" / "result.json");
  const auto from_files = spectrum_from_json(result["spectrum"]);

  const Json run = read_json(config);
  const auto state = state_from_config(run["state"], dir_);
  const auto cfg = interferometer_from_config(run, dir_);
  const auto grid = grid_from_config(run["grid"], 20);
  const auto input = spectrum_of(state);
  const auto shots = simulate_shots(input, cfg, grid, Protocol::four_shot);
  ReconstructOptions opts;
  const auto memory = reconstruct_shots(shots, cfg.polarization, 20, Protocol::four_shot, opts);
  for (int l = -20; l <= 20; ++l) EXPECT_EQ(from_files.at(l), memory.spectrum.at(l)) << "l=" << l;
  EXPECT_EQ(result["r_squared"].get<double>(), *r_squared(memory.spectrum, input));
}
