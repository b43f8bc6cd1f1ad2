#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "oamspec/deviation.hpp"
#include "oamspec/interferometer.hpp"
#include "oamspec/reconstruct.hpp"
#include "oamspec/serialization.hpp"
#include "oamspec/smf.hpp"
#include "oamspec/states.hpp"

namespace oamspec {

/// Nominal δ of each shot, in shot order.
std::vector<double> protocol_deltas(Protocol protocol);
Protocol parse_protocol(std::string_view name);
std::string protocol_name(Protocol protocol);

/// Shots of one protocol run; shot i is taken at protocol_deltas()[i] + delta_error.
std::vector<IntensityTrace> simulate_shots(const Spectrum& spectrum, const InterferometerConfig& cfg,
                                           std::span<const double> thetas, Protocol protocol);

/// Reconstruction from raw shots in protocol order.
ReconstructionResult reconstruct_shots(std::span<const IntensityTrace> shots, const PolarizationCurve& curve, int N,
                                       Protocol protocol, const ReconstructOptions& options = {});

// Run-config fragments. Relative paths resolve against base_dir.
OamState state_from_config(const Json& j, const std::filesystem::path& base_dir);
PolarizationCurve polarization_from_config(const Json& j, const std::filesystem::path& base_dir);
InterferometerConfig interferometer_from_config(const Json& run, const std::filesystem::path& base_dir);
std::vector<double> grid_from_config(const Json& j, int N);
ReconstructOptions options_from_config(const Json& j);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<Protocol> protocol;
  bool plot = false;
};

/// Each command reads a JSON config (calibrate also accepts a measurement CSV),
/// writes into out_dir and returns the files written.
std::vector<std::filesystem::path> run_simulate(const std::filesystem::path& config, const std::filesystem::path& out_dir,
                                                const RunOverrides& overrides = {});
std::vector<std::filesystem::path> run_reconstruct(const std::filesystem::path& config,
                                                   const std::filesystem::path& out_dir,
                                                   const RunOverrides& overrides = {});
std::vector<std::filesystem::path> run_smf_compare(const std::filesystem::path& config,
                                                   const std::filesystem::path& out_dir,
                                                   const RunOverrides& overrides = {});
std::vector<std::filesystem::path> run_deviation_scan(const std::filesystem::path& config,
                                                      const std::filesystem::path& out_dir,
                                                      const RunOverrides& overrides = {});
std::vector<std::filesystem::path> run_calibrate(const std::filesystem::path& config,
                                                 const std::filesystem::path& out_dir,
                                                 const RunOverrides& overrides = {});

}  // namespace oamspec
