#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "oamspec/interferometer.hpp"
#include "oamspec/states.hpp"

namespace oamspec {

/// ΔĪ(θ) = Ī^{δc}(θ) - Ī^{δd}(θ). Throws SamplingError on mismatched grids.
IntensityTrace difference_trace(const IntensityTrace& trace_c, const IntensityTrace& trace_d);

/// ΔI(θ) = ΔĪ(θ) / cos ψ(θ). Throws NumericError naming the offending θ when
/// cos ψ(θ) <= min_cos_psi.
IntensityTrace polarization_correct(const IntensityTrace& diff, const PolarizationCurve& curve,
                                    double min_cos_psi = 1e-3);

/// Sampling requirement for recovering OAM indices up to l_max.
struct SamplingPlan {
  double max_step;       // π / (2 l_max + 1)
  int min_samples;       // 2 l_max + 1 over [0, π)
  int even_min_samples;  // 2 l_max, the looser count quoted alongside the step bound
};

SamplingPlan plan_sampling(int l_max);

/// Uniform grid θ_k = start + kπ/samples, k = 0..samples-1.
std::vector<double> uniform_grid(int samples, double start = 0.0);

/// Periodic trapezoidal weights for a θ grid spanning less than one period π.
/// Reduces to π/M on a uniform grid.
std::vector<double> projection_weights(std::span<const double> thetas);

enum class Protocol { two_shot, four_shot };

/// Constant in front of the projection integral. Both choices give the same
/// normalised spectrum.
enum class ProjectionScale {
  literal,       // S̄_l = ∫ ΔI cos 2lθ dθ
  orthogonality  // divided by the orthogonality constant π
};

struct ReconstructOptions {
  bool enforce_nyquist = true;
  ProjectionScale scale = ProjectionScale::literal;
};

struct ReconstructionDiagnostics {
  /// Mass of negative S̄_l removed before normalisation, relative to Σ|S̄_l|.
  double clipped_mass = 0.0;
  std::vector<int> clipped_modes;
  /// max_l |Im S̄_l| / Σ|S̄_l| (four-shot only).
  double imaginary_residue = 0.0;
  /// RMS misfit between the corrected difference data and the fitted harmonic model.
  double residual_rms = 0.0;
  double max_step = 0.0;
};

struct ReconstructionResult {
  Spectrum spectrum;
  OamValues raw_sbar;
  std::optional<double> r_squared;
  Protocol protocol = Protocol::two_shot;
  ReconstructionDiagnostics diagnostics;
};

/// Symmetric-spectrum reconstruction from a polarisation-corrected difference
/// trace. S̄_l for l = 0..N is mirrored to -l, negatives are clipped and the
/// result normalised. An asymmetric input folds onto (S_l + S_{-l}) / 2.
ReconstructionResult two_shot_spectrum(const IntensityTrace& diff_corrected, int N,
                                       const ReconstructOptions& options = {});

/// Raw shots at δ = 0, π, 3π/2 and π/2 on a common θ grid.
struct FourShotTraces {
  IntensityTrace delta_0;
  IntensityTrace delta_pi;
  IntensityTrace delta_3pi_2;
  IntensityTrace delta_pi_2;
};

/// Complex projection S̄_l = ∫ [ΔI^{(0,π)} + iΔI^{(3π/2,π/2)}] e^{-2ilθ} dθ;
/// recovers asymmetric spectra.
ReconstructionResult four_shot_spectrum(const FourShotTraces& traces, const PolarizationCurve& curve, int N,
                                        const ReconstructOptions& options = {});

enum class RSquaredForm { standard, sse_ratio };

/// Coefficient of determination in percent. standard: 100 (1 - SSE/SStot);
/// sse_ratio: 100 SSE/SStot. Empty when the input has zero variance.
std::optional<double> r_squared(const Spectrum& observed, const Spectrum& input,
                                RSquaredForm form = RSquaredForm::standard);

struct EfficiencyReport {
  std::map<int, double> eta_percent;
  std::vector<int> skipped;
};

/// η_l = κ S^ob_l / S^in_l × 100 for every l with S^in_l > threshold.
EfficiencyReport detection_efficiency(const Spectrum& observed, const Spectrum& input, double kappa,
                                      double threshold = 1e-4);

struct CalibrationPoint {
  double beta;  // half-wave-plate orientation, radians
  double intensity;
};

/// Fit of I = a + b cos 2(β - c).
struct PhaseCalibration {
  double offset;     // a
  double amplitude;  // b >= 0
  double phase;      // c in [0, π)
  double beta_constructive;  // orientation giving δ ≈ 0 (= c)
  double beta_destructive;   // orientation giving δ ≈ π (= c + π/2)
};

PhaseCalibration fit_phase_calibration(std::span<const CalibrationPoint> measurements);

}  // namespace oamspec
