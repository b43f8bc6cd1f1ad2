#include "oamspec/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "oamspec/error.hpp"

namespace oamspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kGridTolerance = 1e-12;

void check_same_grid(const IntensityTrace& a, const IntensityTrace& b) {
  if (a.samples.size() != b.samples.size())
    throw SamplingError(fmt::format("θ grids differ in length ({} vs {})", a.samples.size(), b.samples.size()));
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    if (std::abs(a.samples[k].theta - b.samples[k].theta) > kGridTolerance)
      throw SamplingError(fmt::format("θ grids differ at sample {} ({:.12g} vs {:.12g} rad)", k,
                                      a.samples[k].theta, b.samples[k].theta));
  }
}

double max_gap(std::span<const double> thetas) {
  double gap = thetas.front() + kPi - thetas.back();
  for (std::size_t k = 1; k < thetas.size(); ++k) gap = std::max(gap, thetas[k] - thetas[k - 1]);
  return gap;
}

double check_sampling(std::span<const double> thetas, int N, const ReconstructOptions& options) {
  if (N < 1) throw std::invalid_argument("reconstruction needs N >= 1");
  if (thetas.empty()) throw SamplingError("empty θ grid");
  if (thetas.back() - thetas.front() >= kPi) throw SamplingError("θ grid must span less than π");
  const double gap = max_gap(thetas);
  if (!options.enforce_nyquist) return gap;
  const SamplingPlan plan = plan_sampling(N);
  if (static_cast<int>(thetas.size()) < plan.min_samples || gap > plan.max_step * (1.0 + 1e-9)) {
    throw SamplingError(fmt::format(
        "θ grid undersampled for l_max={}: largest step {:.6g} deg with {} samples, but plan_sampling "
        "requires step <= 180/(2*{}+1) = {:.6g} deg and >= {} samples",
        N, gap * 180.0 / kPi, thetas.size(), N, plan.max_step * 180.0 / kPi, plan.min_samples));
  }
  return gap;
}

double scale_factor(ProjectionScale scale) { return scale == ProjectionScale::literal ? 1.0 : 1.0 / kPi; }

// Clip negatives, normalise, and fill diagnostics. `sbar` is indexed l + N.
ReconstructionResult finish(int N, std::vector<double> sbar, Protocol protocol, ReconstructionDiagnostics diag) {
  double abs_total = 0.0;
  for (double v : sbar) abs_total += std::abs(v);
  std::vector<double> clipped = sbar;
  double negative = 0.0;
  for (int l = -N; l <= N; ++l) {
    double& v = clipped[l + N];
    if (v < 0.0) {
      negative += -v;
      diag.clipped_modes.push_back(l);
      v = 0.0;
    }
  }
  double total = 0.0;
  for (double v : clipped) total += v;
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericError("reconstruction has no positive spectral mass to normalise");
  for (double& v : clipped) v /= total;
  diag.clipped_mass = abs_total > 0.0 ? negative / abs_total : 0.0;

  return ReconstructionResult{Spectrum::from_weights(N, std::move(clipped)), OamValues(N, std::move(sbar)),
                              std::nullopt, protocol, std::move(diag)};
}

}  // namespace

IntensityTrace difference_trace(const IntensityTrace& trace_c, const IntensityTrace& trace_d) {
  trace_c.validate();
  trace_d.validate();
  check_same_grid(trace_c, trace_d);
  if (std::abs(trace_c.delta - trace_d.delta) < 1e-12)
    throw std::invalid_argument("difference needs shots at distinct δ");
  IntensityTrace out;
  out.delta = trace_c.delta;
  out.meta = trace_c.meta;
  out.meta.label = "difference";
  out.meta.clamped = trace_c.meta.clamped || trace_d.meta.clamped;
  out.samples.reserve(trace_c.samples.size());
  for (std::size_t k = 0; k < trace_c.samples.size(); ++k)
    out.samples.push_back({trace_c.samples[k].theta, trace_c.samples[k].value - trace_d.samples[k].value});
  return out;
}

IntensityTrace polarization_correct(const IntensityTrace& diff, const PolarizationCurve& curve,
                                    double min_cos_psi) {
  IntensityTrace out = diff;
  out.meta.label = "corrected";
  for (auto& s : out.samples) {
    const double c = curve.cos_psi(s.theta);
    if (!(c > min_cos_psi))
      throw NumericError(fmt::format("cos ψ({:.12g} rad) = {:.3g} is below {:.3g}; polarisation correction "
                                     "would blow up",
                                     s.theta, c, min_cos_psi));
    s.value /= c;
  }
  return out;
}

SamplingPlan plan_sampling(int l_max) {
  if (l_max < 1) throw std::invalid_argument("plan_sampling needs l_max >= 1");
  return {kPi / (2 * l_max + 1), 2 * l_max + 1, 2 * l_max};
}

std::vector<double> uniform_grid(int samples, double start) {
  if (samples < 1) throw std::invalid_argument("uniform grid needs at least one sample");
  std::vector<double> grid(samples);
  for (int k = 0; k < samples; ++k) grid[k] = start + k * kPi / samples;
  return grid;
}

std::vector<double> projection_weights(std::span<const double> thetas) {
  const std::size_t m = thetas.size();
  if (m == 0) throw std::invalid_argument("projection weights need a non-empty grid");
  if (m == 1) return {kPi};
  std::vector<double> w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double prev = k == 0 ? thetas[m - 1] - kPi : thetas[k - 1];
    const double next = k + 1 == m ? thetas[0] + kPi : thetas[k + 1];
    w[k] = 0.5 * (next - prev);
  }
  return w;
}

ReconstructionResult two_shot_spectrum(const IntensityTrace& diff_corrected, int N,
                                       const ReconstructOptions& options) {
  diff_corrected.validate();
  const auto thetas = diff_corrected.thetas();
  const auto values = diff_corrected.values();
  ReconstructionDiagnostics diag;
  diag.max_step = check_sampling(thetas, N, options);

  const auto w = projection_weights(thetas);
  const double scale = scale_factor(options.scale);
  std::vector<double> half(N + 1, 0.0);
  for (int l = 0; l <= N; ++l) {
    double acc = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) acc += w[k] * values[k] * std::cos(2.0 * l * thetas[k]);
    half[l] = scale * acc;
  }

  double sq = 0.0;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    double model = 0.0;
    for (int l = -N; l <= N; ++l) model += half[std::abs(l)] * std::cos(2.0 * l * thetas[k]);
    model /= scale * kPi;
    sq += (values[k] - model) * (values[k] - model);
  }
  diag.residual_rms = std::sqrt(sq / thetas.size());

  std::vector<double> sbar(2 * N + 1);
  for (int l = -N; l <= N; ++l) sbar[l + N] = half[std::abs(l)];
  return finish(N, std::move(sbar), Protocol::two_shot, std::move(diag));
}

ReconstructionResult four_shot_spectrum(const FourShotTraces& traces, const PolarizationCurve& curve, int N,
                                        const ReconstructOptions& options) {
  auto near = [](double delta, double nominal) {
    const double d = std::remainder(delta - nominal, 2.0 * kPi);
    return std::abs(d) < 0.25;
  };
  if (!near(traces.delta_0.delta, kDeltaConstructive) || !near(traces.delta_pi.delta, kDeltaDestructive) ||
      !near(traces.delta_3pi_2.delta, kDeltaThreeHalfPi) || !near(traces.delta_pi_2.delta, kDeltaHalfPi))
    throw std::invalid_argument("four-shot traces must be taken at δ ≈ 0, π, 3π/2, π/2");
  check_same_grid(traces.delta_0, traces.delta_3pi_2);

  const auto cos_part = polarization_correct(difference_trace(traces.delta_0, traces.delta_pi), curve);
  const auto sin_part = polarization_correct(difference_trace(traces.delta_3pi_2, traces.delta_pi_2), curve);
  const auto thetas = cos_part.thetas();
  ReconstructionDiagnostics diag;
  diag.max_step = check_sampling(thetas, N, options);

  const auto w = projection_weights(thetas);
  const double scale = scale_factor(options.scale);
  std::vector<std::complex<double>> data(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k)
    data[k] = {cos_part.samples[k].value, sin_part.samples[k].value};

  std::vector<std::complex<double>> sbar(2 * N + 1);
  for (int l = -N; l <= N; ++l) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < thetas.size(); ++k) acc += w[k] * data[k] * std::polar(1.0, -2.0 * l * thetas[k]);
    sbar[l + N] = scale * acc;
  }

  double sq = 0.0;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    std::complex<double> model = 0.0;
    for (int l = -N; l <= N; ++l) model += sbar[l + N] * std::polar(1.0, 2.0 * l * thetas[k]);
    model /= scale * kPi;
    sq += std::norm(data[k] - model);
  }
  diag.residual_rms = std::sqrt(sq / thetas.size());

  std::vector<double> real(2 * N + 1);
  double abs_total = 0.0;
  double max_imag = 0.0;
  for (int l = -N; l <= N; ++l) {
    real[l + N] = sbar[l + N].real();
    abs_total += std::abs(sbar[l + N]);
    max_imag = std::max(max_imag, std::abs(sbar[l + N].imag()));
  }
  diag.imaginary_residue = abs_total > 0.0 ? max_imag / abs_total : 0.0;
  return finish(N, std::move(real), Protocol::four_shot, std::move(diag));
}

std::optional<double> r_squared(const Spectrum& observed, const Spectrum& input, RSquaredForm form) {
  if (observed.truncation() != input.truncation())
    throw std::invalid_argument("R² needs spectra with the same truncation");
  const auto in = input.values();
  const auto ob = observed.values();
  double mean = 0.0;
  for (double v : in) mean += v;
  mean /= static_cast<double>(in.size());
  double sse = 0.0;
  double sstot = 0.0;
  for (std::size_t i = 0; i < in.size(); ++i) {
    sse += (ob[i] - in[i]) * (ob[i] - in[i]);
    sstot += (in[i] - mean) * (in[i] - mean);
  }
  if (sstot < 1e-28) return std::nullopt;
  return form == RSquaredForm::standard ? 100.0 * (1.0 - sse / sstot) : 100.0 * sse / sstot;
}

EfficiencyReport detection_efficiency(const Spectrum& observed, const Spectrum& input, double kappa,
                                      double threshold) {
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("κ must lie in (0, 1]");
  if (observed.truncation() != input.truncation())
    throw std::invalid_argument("efficiency needs spectra with the same truncation");
  EfficiencyReport report;
  const int N = input.truncation();
  for (int l = -N; l <= N; ++l) {
    if (input.at(l) > threshold)
      report.eta_percent[l] = 100.0 * kappa * observed.at(l) / input.at(l);
    else
      report.skipped.push_back(l);
  }
  return report;
}

PhaseCalibration fit_phase_calibration(std::span<const CalibrationPoint> measurements) {
  if (measurements.size() < 3) throw std::invalid_argument("phase calibration needs at least 3 measurements");
  std::vector<double> wrapped;
  for (const auto& m : measurements) {
    if (!std::isfinite(m.beta) || !std::isfinite(m.intensity))
      throw std::invalid_argument("calibration measurements must be finite");
    double b = std::fmod(m.beta, kPi);
    if (b < 0.0) b += kPi;
    wrapped.push_back(b);
  }
  std::sort(wrapped.begin(), wrapped.end());
  int distinct = 1;
  for (std::size_t i = 1; i < wrapped.size(); ++i)
    if (wrapped[i] - wrapped[i - 1] > 1e-9) ++distinct;
  if (distinct > 1 && wrapped.front() + kPi - wrapped.back() <= 1e-9) --distinct;
  if (distinct < 3) throw std::invalid_argument("phase calibration needs >= 3 distinct β (mod 180°)");

  // I = a + p cos 2β + q sin 2β
  const auto n = static_cast<Eigen::Index>(measurements.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double b = measurements[i].beta;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(2.0 * b);
    design(i, 2) = std::sin(2.0 * b);
    rhs(i) = measurements[i].intensity;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(rhs);
  const double a = coef(0);
  const double amplitude = std::hypot(coef(1), coef(2));
  if (amplitude <= 1e-9 * std::max(1.0, std::abs(a)))
    throw NumericError("calibration fringe amplitude is zero; the phase c is undefined");
  double c = 0.5 * std::atan2(coef(2), coef(1));
  if (c < 0.0) c += kPi;
  return {a, amplitude, c, c, c + 0.5 * kPi};
}

}  // namespace oamspec
