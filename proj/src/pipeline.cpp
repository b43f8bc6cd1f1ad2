#include "oamspec/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "oamspec/svg.hpp"

namespace oamspec {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;
constexpr double kMicroRad = 1e-6;

const std::vector<std::string>& shot_keys(Protocol protocol) {
  static const std::vector<std::string> two{"delta_0", "delta_pi"};
  static const std::vector<std::string> four{"delta_0", "delta_pi", "delta_3pi_2", "delta_pi_2"};
  return protocol == Protocol::two_shot ? two : four;
}

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw std::invalid_argument(fmt::format("{}: expected an object", where));
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument(fmt::format("{}: unknown key '{}'", where, key));
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

Json member_or_empty(const Json& j, const char* key) {
  return j.contains(key) ? j.at(key) : Json::object();
}

std::vector<double> read_number_list(const Json& j, std::string_view where) {
  if (!j.is_array()) throw std::invalid_argument(fmt::format("{}: expected an array of numbers", where));
  return j.get<std::vector<double>>();
}

Spectrum spectrum_from_any(const Json& j, const fs::path& base) {
  if (j.is_string()) {
    const Json file = read_json(resolve(base, j.get<std::string>()));
    return spectrum_from_json(file.is_object() && file.contains("spectrum") ? file.at("spectrum") : file);
  }
  if (j.is_array() && !j.empty() && j.front().is_number()) {
    auto values = j.get<std::vector<double>>();
    if (values.size() % 2 == 0) throw std::invalid_argument("spectrum list must have 2N+1 entries");
    const int N = static_cast<int>(values.size() / 2);
    return Spectrum::from_weights(N, std::move(values));
  }
  return spectrum_from_json(j);
}

void write_csv_file(const fs::path& path, const CsvTable& table, std::vector<fs::path>& written) {
  write_file_atomic(path, format_csv(table));
  written.push_back(path);
}

void write_json_file(const fs::path& path, const Json& j, std::vector<fs::path>& written) {
  write_json_atomic(path, j);
  written.push_back(path);
}

void write_text(const fs::path& path, const std::string& text, std::vector<fs::path>& written) {
  write_file_atomic(path, text);
  written.push_back(path);
}

std::vector<int> l_labels(int N) {
  std::vector<int> ls;
  for (int l = -N; l <= N; ++l) ls.push_back(l);
  return ls;
}

std::vector<double> values_of(const Spectrum& s) { return {s.values().begin(), s.values().end()}; }

RSquaredForm r_squared_form(const Json& options) {
  const std::string form = options.value("r_squared_form", std::string("standard"));
  if (form == "standard") return RSquaredForm::standard;
  if (form == "sse_ratio") return RSquaredForm::sse_ratio;
  throw std::invalid_argument("r_squared_form must be 'standard' or 'sse_ratio'");
}

}  // namespace

std::vector<double> protocol_deltas(Protocol protocol) {
  if (protocol == Protocol::two_shot) return {kDeltaConstructive, kDeltaDestructive};
  return {kDeltaConstructive, kDeltaDestructive, kDeltaThreeHalfPi, kDeltaHalfPi};
}

Protocol parse_protocol(std::string_view name) {
  if (name == "two_shot" || name == "two-shot") return Protocol::two_shot;
  if (name == "four_shot" || name == "four-shot") return Protocol::four_shot;
  throw std::invalid_argument(fmt::format("unknown protocol '{}'", name));
}

std::string protocol_name(Protocol protocol) { return protocol == Protocol::two_shot ? "two_shot" : "four_shot"; }

std::vector<IntensityTrace> simulate_shots(const Spectrum& spectrum, const InterferometerConfig& cfg,
                                           std::span<const double> thetas, Protocol protocol) {
  std::vector<IntensityTrace> shots;
  const auto deltas = protocol_deltas(protocol);
  for (std::size_t i = 0; i < deltas.size(); ++i)
    shots.push_back(simulate_trace(spectrum, cfg, thetas, deltas[i] + cfg.delta_error, static_cast<int>(i)));
  return shots;
}

ReconstructionResult reconstruct_shots(std::span<const IntensityTrace> shots, const PolarizationCurve& curve, int N,
                                       Protocol protocol, const ReconstructOptions& options) {
  if (protocol == Protocol::two_shot) {
    if (shots.size() != 2) throw std::invalid_argument("two-shot reconstruction needs 2 traces");
    return two_shot_spectrum(polarization_correct(difference_trace(shots[0], shots[1]), curve), N, options);
  }
  if (shots.size() != 4) throw std::invalid_argument("four-shot reconstruction needs 4 traces");
  return four_shot_spectrum({shots[0], shots[1], shots[2], shots[3]}, curve, N, options);
}

OamState state_from_config(const Json& j, const fs::path& base_dir) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") {
    check_keys(j, {"kind", "sigma", "N"}, "state");
    return gaussian_pure_state(j.at("sigma").get<double>(), j.at("N").get<int>());
  }
  if (kind == "mixture") {
    check_keys(j, {"kind", "N", "components"}, "state");
    const int N = j.at("N").get<int>();
    std::vector<WeightedState> parts;
    for (const auto& c : j.at("components")) {
      check_keys(c, {"weight", "sigma", "state"}, "state.components[]");
      const double w = c.at("weight").get<double>();
      if (c.contains("state"))
        parts.push_back({state_from_config(c.at("state"), base_dir), w});
      else
        parts.push_back({gaussian_pure_state(c.at("sigma").get<double>(), N), w});
    }
    return mix_states(parts);
  }
  if (kind == "comb") {
    check_keys(j, {"kind", "N", "ls"}, "state");
    const auto ls = j.at("ls").get<std::vector<int>>();
    return comb_state(ls, j.at("N").get<int>());
  }
  if (kind == "diagonal") {
    check_keys(j, {"kind", "spectrum", "radial_weights"}, "state");
    const Spectrum s = spectrum_from_any(j.at("spectrum"), base_dir);
    const auto w = j.contains("radial_weights") ? read_number_list(j.at("radial_weights"), "state.radial_weights")
                                                 : std::vector<double>{1.0};
    return diagonal_state(s, w);
  }
  if (kind == "file") {
    check_keys(j, {"kind", "path"}, "state");
    return state_from_json(read_json(resolve(base_dir, j.at("path").get<std::string>())));
  }
  throw std::invalid_argument(fmt::format("unknown state kind '{}'", kind));
}

PolarizationCurve polarization_from_config(const Json& j, const fs::path& base_dir) {
  if (j.is_null()) return PolarizationCurve::ideal();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ideal") {
    check_keys(j, {"kind"}, "polarization");
    return PolarizationCurve::ideal();
  }
  if (kind == "analytic") {
    check_keys(j, {"kind", "a"}, "polarization");
    return PolarizationCurve::analytic(j.at("a").get<double>());
  }
  if (kind == "tabulated") {
    check_keys(j, {"kind", "file"}, "polarization");
    return read_polarization_csv(resolve(base_dir, j.at("file").get<std::string>()));
  }
  throw std::invalid_argument(fmt::format("unknown polarization kind '{}'", kind));
}

InterferometerConfig interferometer_from_config(const Json& run, const fs::path& base_dir) {
  InterferometerConfig cfg;
  const Json ij = member_or_empty(run, "interferometer");
  check_keys(ij, {"k1", "k2", "delta_error", "polarization"}, "interferometer");
  cfg.k1_mag = ij.value("k1", cfg.k1_mag);
  cfg.k2_mag = ij.value("k2", cfg.k2_mag);
  cfg.delta_error = ij.value("delta_error", 0.0);
  cfg.polarization = polarization_from_config(ij.contains("polarization") ? ij.at("polarization") : Json(),
                                              base_dir);
  const Json nj = member_or_empty(run, "noise");
  check_keys(nj, {"background", "shot_noise", "photons_per_unit", "drift"}, "noise");
  cfg.noise.background = nj.value("background", 0.0);
  cfg.noise.shot_noise = nj.value("shot_noise", false);
  cfg.noise.photons_per_unit = nj.value("photons_per_unit", cfg.noise.photons_per_unit);
  cfg.noise.drift = nj.value("drift", 0.0);
  cfg.noise.seed = run.value("seed", std::uint64_t{0});
  cfg.validate();
  return cfg;
}

std::vector<double> grid_from_config(const Json& j, int N) {
  if (j.is_null()) return uniform_grid(plan_sampling(N).min_samples);
  check_keys(j, {"plan_sampling", "oversample", "step_deg", "thetas_deg", "start_deg"}, "grid");
  const double start = j.value("start_deg", 0.0) * kDeg;
  const int modes = j.contains("plan_sampling") + j.contains("step_deg") + j.contains("thetas_deg");
  if (modes != 1) throw std::invalid_argument("grid: give exactly one of plan_sampling, step_deg, thetas_deg");
  if (j.contains("thetas_deg")) {
    auto thetas = read_number_list(j.at("thetas_deg"), "grid.thetas_deg");
    if (thetas.empty()) throw std::invalid_argument("grid: empty θ grid");
    for (double& t : thetas) t *= kDeg;
    return thetas;
  }
  if (j.contains("step_deg")) {
    const double step = j.at("step_deg").get<double>();
    if (!(step > 0.0)) throw std::invalid_argument("grid: step_deg must be positive");
    const double count = 180.0 / step;
    if (std::abs(count - std::round(count)) > 1e-9 * count)
      throw std::invalid_argument("grid: step_deg must divide 180");
    return uniform_grid(static_cast<int>(std::round(count)), start);
  }
  if (!j.at("plan_sampling").get<bool>()) throw std::invalid_argument("grid: plan_sampling must be true");
  const int oversample = j.value("oversample", 1);
  if (oversample < 1) throw std::invalid_argument("grid: oversample must be >= 1");
  return uniform_grid(plan_sampling(N).min_samples * oversample, start);
}

ReconstructOptions options_from_config(const Json& j) {
  ReconstructOptions options;
  if (j.is_null()) return options;
  check_keys(j, {"N", "enforce_nyquist", "scale", "r_squared_form"}, "reconstruct");
  options.enforce_nyquist = j.value("enforce_nyquist", true);
  const std::string scale = j.value("scale", std::string("literal"));
  if (scale == "literal")
    options.scale = ProjectionScale::literal;
  else if (scale == "orthogonality")
    options.scale = ProjectionScale::orthogonality;
  else
    throw std::invalid_argument("reconstruct.scale must be 'literal' or 'orthogonality'");
  r_squared_form(j);
  return options;
}

std::vector<fs::path> run_simulate(const fs::path& config, const fs::path& out_dir, const RunOverrides& overrides) {
  const Json run = read_json(config);
  const fs::path base = config.parent_path();
  check_keys(run, {"state", "interferometer", "noise", "grid", "protocol", "reconstruct", "seed", "description"},
             "run config");
  const OamState state = state_from_config(run.at("state"), base);
  const Spectrum spectrum = spectrum_of(state);
  InterferometerConfig cfg = interferometer_from_config(run, base);
  if (overrides.seed) cfg.noise.seed = *overrides.seed;
  const Protocol protocol =
      overrides.protocol.value_or(parse_protocol(run.value("protocol", std::string("two_shot"))));
  const Json rc = run.contains("reconstruct") ? run.at("reconstruct") : Json();
  options_from_config(rc);
  const int N = rc.is_object() && rc.contains("N") ? rc.at("N").get<int>() : state.oam_truncation();
  const auto thetas = grid_from_config(run.contains("grid") ? run.at("grid") : Json(), N);

  const auto shots = simulate_shots(spectrum, cfg, thetas, protocol);
  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  Json traces = Json::object();
  const auto& keys = shot_keys(protocol);
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const std::string name = "trace_" + keys[i] + ".csv";
    write_trace(out_dir / name, shots[i]);
    written.push_back(out_dir / name);
    written.push_back(sidecar_path(out_dir / name));
    traces[keys[i]] = name;
  }
  write_json_file(out_dir / "input_spectrum.json", spectrum_to_json(spectrum), written);

  Json pol;
  const auto& curve = cfg.polarization;
  if (curve.kind() == PolarizationCurve::Kind::ideal) {
    pol = {{"kind", "ideal"}};
  } else if (curve.kind() == PolarizationCurve::Kind::analytic) {
    pol = {{"kind", "analytic"}, {"a", curve.parameter()}};
  } else {
    CsvTable table;
    table.header = {"theta_rad", "cos_psi"};
    for (std::size_t i = 0; i < curve.table_thetas().size(); ++i)
      table.rows.push_back({format_number(curve.table_thetas()[i]), format_number(curve.table_cos_psi()[i])});
    write_csv_file(out_dir / "polarization.csv", table, written);
    pol = {{"kind", "tabulated"}, {"file", "polarization.csv"}};
  }
  Json next = {{"protocol", protocol_name(protocol)},
               {"N", N},
               {"traces", traces},
               {"polarization", pol},
               {"input_spectrum", "input_spectrum.json"}};
  if (rc.is_object()) {
    Json options = rc;
    options.erase("N");
    next["options"] = options;
  }
  write_json_file(out_dir / "reconstruct.json", next, written);
  return written;
}

std::vector<fs::path> run_reconstruct(const fs::path& config, const fs::path& out_dir,
                                      const RunOverrides& overrides) {
  const Json rc = read_json(config);
  const fs::path base = config.parent_path();
  check_keys(rc, {"protocol", "N", "traces", "polarization", "input_spectrum", "options"}, "reconstruct config");
  const Protocol protocol =
      overrides.protocol.value_or(parse_protocol(rc.value("protocol", std::string("two_shot"))));
  const int N = rc.at("N").get<int>();
  const Json& tj = rc.at("traces");
  std::vector<IntensityTrace> shots;
  for (const auto& key : shot_keys(protocol)) {
    if (!tj.contains(key))
      throw std::invalid_argument(fmt::format("{} protocol needs trace '{}'", protocol_name(protocol), key));
    shots.push_back(read_trace(resolve(base, tj.at(key).get<std::string>())));
  }
  const auto curve = polarization_from_config(rc.contains("polarization") ? rc.at("polarization") : Json(), base);
  const Json opts = rc.contains("options") ? rc.at("options") : Json();
  auto result = reconstruct_shots(shots, curve, N, protocol, options_from_config(opts));

  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  std::optional<Spectrum> input;
  if (rc.contains("input_spectrum")) {
    input = spectrum_from_any(rc.at("input_spectrum"), base);
    result.r_squared = r_squared(result.spectrum, *input, opts.is_object() ? r_squared_form(opts) : RSquaredForm::standard);
  }
  write_json_file(out_dir / "result.json", result_to_json(result), written);
  if (input) {
    write_csv_file(out_dir / "bars.csv", bar_table(*input, result.spectrum), written);
  } else {
    CsvTable table;
    table.header = {"l", "S_ob"};
    for (int l = -N; l <= N; ++l) table.rows.push_back({std::to_string(l), format_number(result.spectrum.at(l))});
    write_csv_file(out_dir / "bars.csv", table, written);
  }
  if (overrides.plot) {
    const auto ls = l_labels(N);
    std::vector<PlotSeries> series;
    if (input) series.push_back({"input", "#4a6fa5", values_of(*input)});
    series.push_back({"reconstructed", "#e0a030", values_of(result.spectrum)});
    write_text(out_dir / "bars.svg", render_bar_svg(ls, series, "OAM spectrum"), written);
    std::vector<double> thetas_deg;
    for (const auto& s : shots.front().samples) thetas_deg.push_back(s.theta / kDeg);
    std::vector<PlotSeries> lines;
    const char* colors[] = {"#4a6fa5", "#c04040", "#40a040", "#a040a0"};
    for (std::size_t i = 0; i < shots.size(); ++i)
      lines.push_back({shot_keys(protocol)[i], colors[i], shots[i].values()});
    write_text(out_dir / "traces.svg", render_line_svg(thetas_deg, lines, "Detection probability", "θ (deg)"),
               written);
  }
  return written;
}

std::vector<fs::path> run_smf_compare(const fs::path& config, const fs::path& out_dir,
                                      const RunOverrides& overrides) {
  const Json run = read_json(config);
  const fs::path base = config.parent_path();
  check_keys(run, {"spectrum", "state", "radial_weights", "smf", "observed", "description"}, "smf config");
  const Json sj = member_or_empty(run, "smf");
  check_keys(sj, {"sigma_over_w0", "kappa", "diffraction_efficiency"}, "smf");
  SmfConfig cfg;
  cfg.sigma_over_w0 = sj.value("sigma_over_w0", cfg.sigma_over_w0);
  cfg.kappa = sj.value("kappa", cfg.kappa);
  cfg.diffraction_efficiency = sj.value("diffraction_efficiency", cfg.diffraction_efficiency);
  cfg.validate();

  if (run.contains("spectrum") == run.contains("state"))
    throw std::invalid_argument("smf config: give exactly one of spectrum, state");
  std::optional<Spectrum> input;
  OamValues apparent;
  if (run.contains("state")) {
    if (run.contains("radial_weights"))
      throw std::invalid_argument("smf config: radial weights come from the state");
    const OamState state = state_from_config(run.at("state"), base);
    input = spectrum_of(state);
    const int N = state.oam_truncation();
    std::vector<double> values(2 * N + 1, 0.0);
    for (int l = -N; l <= N; ++l)
      for (int p = 0; p < state.radial_count(); ++p) {
        const double pop = state.coefficient({l, p}, {l, p}).real();
        if (pop > 0.0) values[l + N] += cfg.diffraction_efficiency * pop * detection_efficiency_closed({l, p}, cfg);
      }
    apparent = OamValues(N, std::move(values));
  } else {
    input = spectrum_from_any(run.at("spectrum"), base);
    const auto w = run.contains("radial_weights") ? read_number_list(run.at("radial_weights"), "radial_weights")
                                                   : std::vector<double>{1.0};
    apparent = smf_spectrum_response(*input, w, cfg);
  }
  std::optional<Spectrum> observed;
  if (run.contains("observed")) observed = spectrum_from_any(run.at("observed"), base);
  const int N = input->truncation();
  if (observed && observed->truncation() != N) throw std::invalid_argument("observed spectrum has a different N");

  double total = 0.0;
  for (double v : apparent.values) total += v;
  CsvTable table;
  table.header = {"l", "S_in", "smf_apparent", "smf_normalized"};
  if (observed) table.header.push_back("S_ob");
  for (int l = -N; l <= N; ++l) {
    std::vector<std::string> row{std::to_string(l), format_number(input->at(l)), format_number(apparent.at(l)),
                                 format_number(total > 0.0 ? apparent.at(l) / total : 0.0)};
    if (observed) row.push_back(format_number(observed->at(l)));
    table.rows.push_back(std::move(row));
  }
  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  write_csv_file(out_dir / "smf_compare.csv", table, written);
  if (overrides.plot) {
    std::vector<PlotSeries> series{{"input", "#4a6fa5", values_of(*input)}};
    if (observed) series.push_back({"interferometer", "#e0a030", values_of(*observed)});
    std::vector<double> norm(apparent.values);
    for (double& v : norm) v = total > 0.0 ? v / total : 0.0;
    series.push_back({"SMF (normalised)", "#c04040", norm});
    write_text(out_dir / "smf_compare.svg", render_bar_svg(l_labels(N), series, "SMF baseline"), written);
  }
  return written;
}

std::vector<fs::path> run_deviation_scan(const fs::path& config, const fs::path& out_dir,
                                         const RunOverrides& overrides) {
  const Json run = read_json(config);
  check_keys(run, {"z_m", "waist_m", "fit", "overlap_omega0_urad", "theta_step_deg", "F_omega0_urad", "theta_samples",
                   "description"},
             "deviation config");
  const double z = run.value("z_m", 0.25);
  Json summary = {{"z_m", z}};
  double waist = 0.0;
  if (run.contains("fit") == run.contains("waist_m"))
    throw std::invalid_argument("deviation config: give exactly one of waist_m, fit");
  if (run.contains("fit")) {
    const Json& fit = run.at("fit");
    check_keys(fit, {"target_F", "omega0_urad"}, "deviation.fit");
    waist = fit_detection_waist(fit.at("target_F").get<double>(), fit.at("omega0_urad").get<double>() * kMicroRad, z);
    summary["fit"] = fit;
  } else {
    waist = run.at("waist_m").get<double>();
  }
  summary["waist_m"] = waist;
  const int theta_samples = run.value("theta_samples", 720);

  std::vector<double> omegas;
  if (run.contains("F_omega0_urad")) {
    const Json& fj = run.at("F_omega0_urad");
    if (fj.is_array()) {
      omegas = fj.get<std::vector<double>>();
    } else {
      check_keys(fj, {"start", "stop", "count"}, "F_omega0_urad");
      const int count = fj.at("count").get<int>();
      if (count < 2) throw std::invalid_argument("F_omega0_urad.count must be >= 2");
      const double a = fj.at("start").get<double>();
      const double b = fj.at("stop").get<double>();
      for (int i = 0; i < count; ++i) omegas.push_back(a + (b - a) * i / (count - 1));
    }
  }
  CsvTable ftable;
  ftable.header = {"omega0_urad", "F"};
  Json fvalues = Json::array();
  for (double o : omegas) {
    const double F = average_fractional_overlap({o * kMicroRad, z, waist}, theta_samples);
    ftable.rows.push_back({format_number(o), format_number(F)});
    fvalues.push_back({{"omega0_urad", o}, {"F", F}});
  }
  summary["F"] = fvalues;

  const double step = run.value("theta_step_deg", 0.5);
  if (!(step > 0.0)) throw std::invalid_argument("theta_step_deg must be positive");
  const auto overlap_omegas = run.contains("overlap_omega0_urad")
                                  ? run.at("overlap_omega0_urad").get<std::vector<double>>()
                                  : std::vector<double>{};
  CsvTable atable;
  atable.header = {"theta_deg", "omega0_urad", "overlap_percent"};
  std::vector<double> theta_axis;
  for (double t = -90.0; t < 90.0 - 1e-9; t += step) theta_axis.push_back(t);
  std::vector<PlotSeries> lines;
  const char* colors[] = {"#4a6fa5", "#c04040", "#40a040", "#a040a0", "#e0a030"};
  for (std::size_t i = 0; i < overlap_omegas.size(); ++i) {
    const DeviationConfig cfg{overlap_omegas[i] * kMicroRad, z, waist};
    PlotSeries s{fmt::format("{} µrad", overlap_omegas[i]), colors[i % 5], {}};
    for (double t : theta_axis) {
      const double a = overlap_percentage(t * kDeg, cfg);
      atable.rows.push_back({format_number(t), format_number(overlap_omegas[i]), format_number(a)});
      s.values.push_back(a);
    }
    lines.push_back(std::move(s));
  }

  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  if (!omegas.empty()) write_csv_file(out_dir / "F_vs_omega0.csv", ftable, written);
  if (!overlap_omegas.empty()) write_csv_file(out_dir / "overlap_vs_theta.csv", atable, written);
  write_json_file(out_dir / "deviation.json", summary, written);
  if (overrides.plot && !lines.empty())
    write_text(out_dir / "overlap_vs_theta.svg",
               render_line_svg(theta_axis, lines, "Percentage overlap", "θ (deg)"), written);
  return written;
}

std::vector<fs::path> run_calibrate(const fs::path& config, const fs::path& out_dir, const RunOverrides&) {
  CsvTable table;
  if (config.extension() == ".csv") {
    table = read_csv(config);
  } else {
    const Json run = read_json(config);
    check_keys(run, {"measurements", "description"}, "calibrate config");
    table = read_csv(resolve(config.parent_path(), run.at("measurements").get<std::string>()));
  }
  const bool degrees = table.has_column("beta_deg");
  const auto cb = degrees ? table.column("beta_deg") : table.column("beta_rad");
  const auto ci = table.column("intensity");
  std::vector<CalibrationPoint> points;
  for (const auto& row : table.rows)
    points.push_back({parse_double(row[cb]) * (degrees ? kDeg : 1.0), parse_double(row[ci])});
  const auto fit = fit_phase_calibration(points);
  const Json out = {{"a", fit.offset},
                    {"b", fit.amplitude},
                    {"c_rad", fit.phase},
                    {"c_deg", fit.phase / kDeg},
                    {"beta_constructive_deg", fit.beta_constructive / kDeg},
                    {"beta_destructive_deg", fit.beta_destructive / kDeg},
                    {"measurements", points.size()}};
  std::vector<fs::path> written;
  fs::create_directories(out_dir);
  write_json_file(out_dir / "calibration.json", out, written);
  return written;
}

}  // namespace oamspec
