#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "oamspec/deviation.hpp"
#include "oamspec/error.hpp"
#include "oamspec/interferometer.hpp"
#include "oamspec/modes.hpp"
#include "oamspec/pipeline.hpp"
#include "oamspec/reconstruct.hpp"
#include "oamspec/smf.hpp"
#include "oamspec/states.hpp"

namespace py = pybind11;
using namespace oamspec;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rotating-interferometer OAM spectrometer core";
  m.attr("__version__") = OAMSPEC_VERSION;

  py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
  py::register_exception<SamplingError>(m, "SamplingError", PyExc_ValueError);

  py::class_<ModeIndex>(m, "ModeIndex")
      .def(py::init<int, int>(), py::arg("l"), py::arg("p") = 0)
      .def_readwrite("l", &ModeIndex::l)
      .def_readwrite("p", &ModeIndex::p)
      .def("__repr__", [](const ModeIndex& x) {
        return "ModeIndex(l=" + std::to_string(x.l) + ", p=" + std::to_string(x.p) + ")";
      });
  m.def("assoc_laguerre", &assoc_laguerre, py::arg("p"), py::arg("l"), py::arg("x"));
  m.def("lg_radial", &lg_radial, py::arg("mode"), py::arg("w0"), py::arg("rho"));
  m.def(
      "mode_overlap",
      [](ModeIndex a, ModeIndex b, double w0) {
        const auto r = mode_overlap(a, b, w0);
        return py::make_tuple(r.value, r.error_estimate);
      },
      py::arg("a"), py::arg("b"), py::arg("w0") = 1.0, "Returns (value, error_estimate).");

  py::class_<Spectrum>(m, "Spectrum")
      .def(py::init<int, std::vector<double>>(), py::arg("N"), py::arg("values"))
      .def_static("from_weights", &Spectrum::from_weights, py::arg("N"), py::arg("weights"))
      .def_property_readonly("N", &Spectrum::truncation)
      .def("at", &Spectrum::at, py::arg("l"))
      .def_property_readonly("values",
                             [](const Spectrum& s) { return std::vector<double>(s.values().begin(), s.values().end()); });

  py::class_<OamState>(m, "OamState")
      .def_static("from_density_matrix", &OamState::from_density_matrix, py::arg("N"), py::arg("P"), py::arg("rho"))
      .def_property_readonly("N", &OamState::oam_truncation)
      .def_property_readonly("P", &OamState::radial_count)
      .def_property_readonly("density_matrix", &OamState::density_matrix);
  m.def("gaussian_pure_state", &gaussian_pure_state, py::arg("sigma"), py::arg("N"));
  m.def("comb_state", [](const std::vector<int>& ls, int N) { return comb_state(ls, N); }, py::arg("ls"),
        py::arg("N"));
  m.def(
      "diagonal_state",
      [](const Spectrum& s, const std::vector<double>& w) { return diagonal_state(s, w); }, py::arg("spectrum"),
      py::arg("radial_weights") = std::vector<double>{1.0});
  m.def(
      "mix_states",
      [](const std::vector<std::pair<OamState, double>>& parts) {
        std::vector<WeightedState> ws;
        for (const auto& [s, w] : parts) ws.push_back({s, w});
        return mix_states(ws);
      },
      py::arg("parts"), "parts: list of (state, weight).");
  m.def("spectrum_of", &spectrum_of, py::arg("state"));
  m.def("purity", &purity, py::arg("state"));

  py::class_<PolarizationCurve>(m, "PolarizationCurve")
      .def_static("ideal", &PolarizationCurve::ideal)
      .def_static("analytic", &PolarizationCurve::analytic, py::arg("a"))
      .def_static("tabulated", &PolarizationCurve::tabulated, py::arg("thetas"), py::arg("cos_psi"),
                  py::arg("chi") = std::vector<double>{})
      .def("cos_psi", &PolarizationCurve::cos_psi, py::arg("theta"));

  py::class_<NoiseModel>(m, "NoiseModel")
      .def(py::init<>())
      .def_readwrite("background", &NoiseModel::background)
      .def_readwrite("shot_noise", &NoiseModel::shot_noise)
      .def_readwrite("photons_per_unit", &NoiseModel::photons_per_unit)
      .def_readwrite("drift", &NoiseModel::drift)
      .def_readwrite("seed", &NoiseModel::seed);

  py::class_<InterferometerConfig>(m, "InterferometerConfig")
      .def(py::init<>())
      .def_readwrite("k1_mag", &InterferometerConfig::k1_mag)
      .def_readwrite("k2_mag", &InterferometerConfig::k2_mag)
      .def_readwrite("delta_error", &InterferometerConfig::delta_error)
      .def_readwrite("polarization", &InterferometerConfig::polarization)
      .def_readwrite("noise", &InterferometerConfig::noise);

  py::class_<IntensityTrace>(m, "IntensityTrace")
      .def_readonly("delta", &IntensityTrace::delta)
      .def_property_readonly("thetas", &IntensityTrace::thetas)
      .def_property_readonly("values", &IntensityTrace::values);

  m.def("intensity_closed_form", &intensity_closed_form, py::arg("spectrum"), py::arg("cfg"), py::arg("theta"),
        py::arg("delta"));
  m.def(
      "intensity_operator_oracle",
      [](const OamState& s, const InterferometerConfig& c, double theta, double delta) {
        return intensity_operator_oracle(s, c, theta, delta).intensity;
      },
      py::arg("state"), py::arg("cfg"), py::arg("theta"), py::arg("delta"));

  py::enum_<Protocol>(m, "Protocol").value("two_shot", Protocol::two_shot).value("four_shot", Protocol::four_shot);

  py::class_<SamplingPlan>(m, "SamplingPlan")
      .def_readonly("max_step", &SamplingPlan::max_step)
      .def_readonly("min_samples", &SamplingPlan::min_samples)
      .def_readonly("even_min_samples", &SamplingPlan::even_min_samples);
  m.def("plan_sampling", &plan_sampling, py::arg("l_max"));
  m.def("uniform_grid", &uniform_grid, py::arg("samples"), py::arg("start") = 0.0);

  py::class_<ReconstructionDiagnostics>(m, "ReconstructionDiagnostics")
      .def_readonly("clipped_mass", &ReconstructionDiagnostics::clipped_mass)
      .def_readonly("clipped_modes", &ReconstructionDiagnostics::clipped_modes)
      .def_readonly("imaginary_residue", &ReconstructionDiagnostics::imaginary_residue)
      .def_readonly("residual_rms", &ReconstructionDiagnostics::residual_rms);
  py::class_<ReconstructionResult>(m, "ReconstructionResult")
      .def_readonly("spectrum", &ReconstructionResult::spectrum)
      .def_readonly("diagnostics", &ReconstructionResult::diagnostics);

  m.def(
      "simulate_shots",
      [](const Spectrum& s, const InterferometerConfig& c, const std::vector<double>& thetas, Protocol p) {
        return simulate_shots(s, c, thetas, p);
      },
      py::arg("spectrum"), py::arg("cfg"), py::arg("thetas"), py::arg("protocol") = Protocol::two_shot);
  m.def(
      "reconstruct_shots",
      [](const std::vector<IntensityTrace>& shots, const PolarizationCurve& curve, int N, Protocol p,
         bool enforce_nyquist) {
        ReconstructOptions o;
        o.enforce_nyquist = enforce_nyquist;
        return reconstruct_shots(shots, curve, N, p, o);
      },
      py::arg("shots"), py::arg("curve"), py::arg("N"), py::arg("protocol") = Protocol::two_shot,
      py::arg("enforce_nyquist") = true);
  m.def(
      "r_squared",
      [](const Spectrum& ob, const Spectrum& in, bool sse_ratio) {
        return r_squared(ob, in, sse_ratio ? RSquaredForm::sse_ratio : RSquaredForm::standard);
      },
      py::arg("observed"), py::arg("input"), py::arg("sse_ratio") = false);
  m.def(
      "detection_efficiency",
      [](const Spectrum& ob, const Spectrum& in, double kappa) { return detection_efficiency(ob, in, kappa).eta_percent; },
      py::arg("observed"), py::arg("input"), py::arg("kappa"));
  m.def(
      "fit_phase_calibration",
      [](const std::vector<std::pair<double, double>>& pts) {
        std::vector<CalibrationPoint> cp;
        for (const auto& [b, i] : pts) cp.push_back({b, i});
        const auto f = fit_phase_calibration(cp);
        return py::make_tuple(f.offset, f.amplitude, f.phase);
      },
      py::arg("measurements"), "measurements: list of (beta_rad, intensity). Returns (a, b, c).");

  py::class_<SmfConfig>(m, "SmfConfig")
      .def(py::init<>())
      .def_readwrite("sigma_over_w0", &SmfConfig::sigma_over_w0)
      .def_readwrite("kappa", &SmfConfig::kappa)
      .def_readwrite("diffraction_efficiency", &SmfConfig::diffraction_efficiency);
  m.def("detection_efficiency_closed", &detection_efficiency_closed, py::arg("mode"), py::arg("cfg"));
  m.def(
      "coupling_coefficient_numeric",
      [](ModeIndex mode, const SmfConfig& cfg) { return coupling_coefficient_numeric(mode, cfg); }, py::arg("mode"),
      py::arg("cfg"));

  py::class_<DeviationConfig>(m, "DeviationConfig")
      .def(py::init<double, double, double>(), py::arg("omega0") = 0.0, py::arg("z") = 0.25,
           py::arg("waist") = 0.4e-3)
      .def_readwrite("omega0", &DeviationConfig::omega0)
      .def_readwrite("z", &DeviationConfig::z)
      .def_readwrite("waist", &DeviationConfig::waist);
  m.def(
      "beam_center",
      [](double theta, const DeviationConfig& c) {
        const auto b = beam_center(theta, c);
        return py::make_tuple(b.x, b.y);
      },
      py::arg("theta"), py::arg("cfg"));
  m.def("overlap_percentage", &overlap_percentage, py::arg("theta"), py::arg("cfg"));
  m.def("average_fractional_overlap", &average_fractional_overlap, py::arg("cfg"), py::arg("theta_samples") = 720);
  m.def("fit_detection_waist", &fit_detection_waist, py::arg("target_F"), py::arg("omega0"), py::arg("z"));

  py::class_<RunOverrides>(m, "RunOverrides")
      .def(py::init<>())
      .def_readwrite("seed", &RunOverrides::seed)
      .def_readwrite("protocol", &RunOverrides::protocol)
      .def_readwrite("plot", &RunOverrides::plot);
  m.def("run_simulate", &run_simulate, py::arg("config"), py::arg("out_dir"), py::arg("overrides") = RunOverrides{});
  m.def("run_reconstruct", &run_reconstruct, py::arg("config"), py::arg("out_dir"),
        py::arg("overrides") = RunOverrides{});
}
