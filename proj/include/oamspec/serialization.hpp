#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "oamspec/csv.hpp"
#include "oamspec/interferometer.hpp"
#include "oamspec/reconstruct.hpp"
#include "oamspec/states.hpp"

namespace oamspec {

using Json = nlohmann::ordered_json;

/// Shortest decimal text that round-trips to the same double.
std::string format_number(double value);

/// [{"l": l, "s": S_l}, ...] ordered by l.
Json spectrum_to_json(const Spectrum& spectrum);
/// Accepts the array form above (contiguous l = -N..N) or {"N": N, "values": [...]}.
Spectrum spectrum_from_json(const Json& j);

/// {"N": N, "P": P, "entries": [[re, im], ...]} in row-major basis order.
Json state_to_json(const OamState& state);
OamState state_from_json(const Json& j);

Json values_to_json(const OamValues& values);

/// CSV (theta_rad, value) plus a JSON sidecar with the same stem.
void write_trace(const std::filesystem::path& csv_path, const IntensityTrace& trace);
IntensityTrace read_trace(const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

Json result_to_json(const ReconstructionResult& result);

/// Bar-plot data (l, S_in, S_ob).
CsvTable bar_table(const Spectrum& input, const Spectrum& observed);

/// Tabulated cos ψ(θ): columns theta_rad plus cos_psi or inv_cos_psi, optional chi.
PolarizationCurve read_polarization_csv(const std::filesystem::path& path);

void write_json_atomic(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

}  // namespace oamspec
