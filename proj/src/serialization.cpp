#include "oamspec/serialization.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace oamspec {

std::string format_number(double value) { return fmt::format("{}", value); }

Json spectrum_to_json(const Spectrum& spectrum) {
  Json arr = Json::array();
  const int N = spectrum.truncation();
  for (int l = -N; l <= N; ++l) arr.push_back({{"l", l}, {"s", spectrum.at(l)}});
  return arr;
}

Spectrum spectrum_from_json(const Json& j) {
  if (j.is_object()) return Spectrum(j.at("N").get<int>(), j.at("values").get<std::vector<double>>());
  if (!j.is_array() || j.empty() || j.size() % 2 == 0)
    throw std::invalid_argument("spectrum JSON must be an array of 2N+1 {l, s} entries");
  const int N = static_cast<int>(j.size() / 2);
  std::vector<double> values(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const int l = j[i].at("l").get<int>();
    if (l != static_cast<int>(i) - N) throw std::invalid_argument("spectrum JSON entries must run l = -N..N in order");
    values[i] = j[i].at("s").get<double>();
  }
  return Spectrum(N, std::move(values));
}

Json state_to_json(const OamState& state) {
  Json entries = Json::array();
  const auto& rho = state.density_matrix();
  for (Eigen::Index r = 0; r < rho.rows(); ++r)
    for (Eigen::Index c = 0; c < rho.cols(); ++c) entries.push_back({rho(r, c).real(), rho(r, c).imag()});
  return {{"N", state.oam_truncation()}, {"P", state.radial_count()}, {"entries", entries}};
}

OamState state_from_json(const Json& j) {
  const int N = j.at("N").get<int>();
  const int P = j.at("P").get<int>();
  if (N < 0 || P < 1) throw std::invalid_argument("state JSON needs N >= 0 and P >= 1");
  const Eigen::Index D = static_cast<Eigen::Index>(2 * N + 1) * P;
  const auto& entries = j.at("entries");
  if (!entries.is_array() || entries.size() != static_cast<std::size_t>(D * D))
    throw std::invalid_argument("state JSON needs D*D entries");
  Eigen::MatrixXcd rho(D, D);
  for (Eigen::Index r = 0; r < D; ++r)
    for (Eigen::Index c = 0; c < D; ++c) {
      const auto& e = entries[static_cast<std::size_t>(r * D + c)];
      rho(r, c) = {e.at(0).get<double>(), e.at(1).get<double>()};
    }
  return OamState::from_density_matrix(N, P, std::move(rho));
}

Json values_to_json(const OamValues& values) {
  Json arr = Json::array();
  for (int l = -values.N; l <= values.N; ++l) arr.push_back({{"l", l}, {"value", values.at(l)}});
  return arr;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".json");
  return p;
}

void write_trace(const std::filesystem::path& csv_path, const IntensityTrace& trace) {
  CsvTable table;
  table.header = {"theta_rad", "value"};
  for (const auto& s : trace.samples) table.rows.push_back({format_number(s.theta), format_number(s.value)});
  const auto& m = trace.meta;
  const Json side = {{"delta", trace.delta},
                     {"label", m.label},
                     {"config_hash", fmt::format("{:016x}", m.config_hash)},
                     {"seed", m.seed},
                     {"shot_index", m.shot_index},
                     {"tool_version", OAMSPEC_VERSION},
                     {"clamped", m.clamped},
                     {"k1", m.k1_mag},
                     {"k2", m.k2_mag},
                     {"background", m.background},
                     {"drift", m.drift},
                     {"samples", trace.samples.size()}};
  write_file_atomic(csv_path, format_csv(table));
  write_json_atomic(sidecar_path(csv_path), side);
}

IntensityTrace read_trace(const std::filesystem::path& csv_path) {
  const CsvTable table = read_csv(csv_path);
  const Json side = read_json(sidecar_path(csv_path));
  IntensityTrace trace;
  trace.delta = side.at("delta").get<double>();
  auto& m = trace.meta;
  m.label = side.value("label", std::string("shot"));
  m.config_hash = std::stoull(side.at("config_hash").get<std::string>(), nullptr, 16);
  m.seed = side.value("seed", std::uint64_t{0});
  m.shot_index = side.value("shot_index", 0);
  m.clamped = side.value("clamped", false);
  m.k1_mag = side.value("k1", 0.5);
  m.k2_mag = side.value("k2", 0.5);
  m.background = side.value("background", 0.0);
  m.drift = side.value("drift", 0.0);
  const auto ct = table.column("theta_rad");
  const auto cv = table.column("value");
  for (const auto& row : table.rows) trace.samples.push_back({parse_double(row[ct]), parse_double(row[cv])});
  trace.validate();
  return trace;
}

Json result_to_json(const ReconstructionResult& result) {
  const auto& d = result.diagnostics;
  Json diag = {{"clipped_mass", d.clipped_mass},
               {"clipped_modes", d.clipped_modes},
               {"imaginary_residue", d.imaginary_residue},
               {"residual_rms", d.residual_rms},
               {"max_step_rad", d.max_step}};
  Json j = {{"protocol", result.protocol == Protocol::two_shot ? "two_shot" : "four_shot"},
            {"N", result.spectrum.truncation()},
            {"spectrum", spectrum_to_json(result.spectrum)},
            {"raw_sbar", values_to_json(result.raw_sbar)}};
  j["r_squared"] = result.r_squared ? Json(*result.r_squared) : Json(nullptr);
  j["diagnostics"] = diag;
  j["tool_version"] = OAMSPEC_VERSION;
  return j;
}

CsvTable bar_table(const Spectrum& input, const Spectrum& observed) {
  if (input.truncation() != observed.truncation())
    throw std::invalid_argument("bar data needs spectra with the same truncation");
  CsvTable table;
  table.header = {"l", "S_in", "S_ob"};
  const int N = input.truncation();
  for (int l = -N; l <= N; ++l)
    table.rows.push_back({std::to_string(l), format_number(input.at(l)), format_number(observed.at(l))});
  return table;
}

PolarizationCurve read_polarization_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const auto ct = table.column("theta_rad");
  const bool inverse = !table.has_column("cos_psi");
  const auto cv = inverse ? table.column("inv_cos_psi") : table.column("cos_psi");
  const bool has_chi = table.has_column("chi");
  std::vector<double> thetas, cos_psi, chi;
  for (const auto& row : table.rows) {
    thetas.push_back(parse_double(row[ct]));
    const double v = parse_double(row[cv]);
    if (inverse && !(v > 0.0)) throw std::invalid_argument("inv_cos_psi must be positive");
    cos_psi.push_back(inverse ? 1.0 / v : v);
    if (has_chi) chi.push_back(parse_double(row[table.column("chi")]));
  }
  return PolarizationCurve::tabulated(std::move(thetas), std::move(cos_psi), std::move(chi));
}

void write_json_atomic(const std::filesystem::path& path, const Json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

}  // namespace oamspec
