#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "oamspec/error.hpp"
#include "oamspec/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitSampling = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotating-interferometer OAM spectrometer simulator"};
  app.set_version_flag("--version", std::string(OAMSPEC_VERSION));
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string protocol;
  bool plot = false;

  auto add_common = [&](CLI::App* cmd, bool seeded, bool with_protocol) {
    cmd->add_option("--config", config, "Run configuration (JSON)")->required();
    cmd->add_option("--out-dir", out_dir, "Output directory");
    cmd->add_flag("--plot", plot, "Also write SVG plots");
    if (seeded) cmd->add_option("--seed", seed, "Override the noise seed");
    if (with_protocol)
      cmd->add_option("--protocol", protocol, "Override the protocol")
          ->check(CLI::IsMember({"two-shot", "four-shot", "two_shot", "four_shot"}));
  };
  auto* simulate = app.add_subcommand("simulate", "Simulate intensity traces for every δ shot");
  add_common(simulate, true, true);
  auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a spectrum from trace files");
  add_common(reconstruct, false, true);
  auto* smf = app.add_subcommand("smf-compare", "Apparent spectrum of an SLM + single-mode-fibre detector");
  add_common(smf, false, false);
  auto* deviation = app.add_subcommand("deviation-scan", "Beam-overlap sweeps for image-rotator deviation");
  add_common(deviation, false, false);
  auto* calibrate = app.add_subcommand("calibrate", "Fit the half-wave-plate phase calibration");
  add_common(calibrate, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  oamspec::RunOverrides overrides;
  overrides.seed = seed;
  overrides.plot = plot;
  try {
    if (!protocol.empty()) overrides.protocol = oamspec::parse_protocol(protocol);
    std::vector<std::filesystem::path> written;
    if (simulate->parsed())
      written = oamspec::run_simulate(config, out_dir, overrides);
    else if (reconstruct->parsed())
      written = oamspec::run_reconstruct(config, out_dir, overrides);
    else if (smf->parsed())
      written = oamspec::run_smf_compare(config, out_dir, overrides);
    else if (deviation->parsed())
      written = oamspec::run_deviation_scan(config, out_dir, overrides);
    else
      written = oamspec::run_calibrate(config, out_dir, overrides);
    for (const auto& p : written) std::cout << p.string() << '\n';
    return kExitOk;
  } catch (const oamspec::SamplingError& e) {
    std::cerr << "sampling error: " << e.what() << '\n';
    return kExitSampling;
  } catch (const oamspec::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
