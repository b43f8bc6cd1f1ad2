#pragma once

#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oamspec/states.hpp"

namespace oamspec {

/// Nominal geometric phases of the two-shot and four-shot protocols.
inline constexpr double kDeltaConstructive = 0.0;
inline constexpr double kDeltaDestructive = std::numbers::pi;
inline constexpr double kDeltaHalfPi = 0.5 * std::numbers::pi;
inline constexpr double kDeltaThreeHalfPi = 1.5 * std::numbers::pi;

/// Polarisation state behind the image rotator for x-polarised input:
/// ε(θ) = cos ψ(θ) x + sin ψ(θ) e^{iχ(θ)} y. Only cos ψ enters the detected
/// intensity; χ is carried along for the operator-level model.
class PolarizationCurve {
 public:
  enum class Kind { ideal, analytic, tabulated };

  /// ψ ≡ 0.
  static PolarizationCurve ideal();
  /// cos ψ(θ) = sqrt(1 - a sin²θ), a ∈ [0, 0.5].
  static PolarizationCurve analytic(double a);
  /// Samples of cos ψ on θ ∈ [θ_0, θ_0 + π), interpolated linearly and
  /// periodically (period π). Values must lie in (0, 1].
  static PolarizationCurve tabulated(std::vector<double> thetas, std::vector<double> cos_psi,
                                     std::vector<double> chi = {});

  double cos_psi(double theta) const;
  double chi(double theta) const;

  Kind kind() const { return kind_; }
  double parameter() const { return a_; }
  std::span<const double> table_thetas() const { return thetas_; }
  std::span<const double> table_cos_psi() const { return cos_psi_; }
  std::string describe() const;

 private:
  PolarizationCurve() = default;
  double interpolate(std::span<const double> values, double theta) const;

  Kind kind_ = Kind::ideal;
  double a_ = 0.0;
  std::vector<double> thetas_;
  std::vector<double> cos_psi_;
  std::vector<double> chi_;
};

/// Constant background plus optional drift and Poisson counting noise.
struct NoiseModel {
  double background = 0.0;
  bool shot_noise = false;
  double photons_per_unit = 1e6;
  /// Background increase per full θ sweep; accumulates across consecutive shots.
  double drift = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct InterferometerConfig {
  double k1_mag = 0.5;
  double k2_mag = 0.5;
  /// Calibration error added to the nominal δ of every shot.
  double delta_error = 0.0;
  PolarizationCurve polarization = PolarizationCurve::ideal();
  NoiseModel noise;

  void validate() const;
  std::uint64_t fingerprint() const;
};

struct TraceSample {
  double theta;
  double value;
};

struct TraceMeta {
  /// shot | difference | corrected | degraded
  std::string label = "shot";
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  int shot_index = 0;
  /// Set when a noisy sample went negative and was clamped at zero.
  bool clamped = false;
  double k1_mag = 0.5;
  double k2_mag = 0.5;
  double background = 0.0;
  double drift = 0.0;
};

/// Detection probability sampled against the rotator angle θ.
struct IntensityTrace {
  double delta = 0.0;
  std::vector<TraceSample> samples;
  TraceMeta meta;

  std::vector<double> thetas() const;
  std::vector<double> values() const;
  /// θ strictly increasing over a span shorter than π; shot values non-negative.
  void validate() const;
};

/// M = Σ e^{-ilπ} |-l,p⟩⟨l,p| on the truncated basis.
Eigen::MatrixXcd mirror_operator(int N, int P);
/// IR(θ) = Σ e^{-il(π+2θ)} |-l,p⟩⟨l,p|.
Eigen::MatrixXcd rotator_operator(int N, int P, double theta);

OamState mirror_apply(const OamState& state);
OamState rotator_apply(const OamState& state, double theta);

/// |k1|² + |k2|² + 2|k1||k2| cos ψ(θ) Σ_l S_l cos(δ + 2lθ).
double intensity_closed_form(const Spectrum& spectrum, const InterferometerConfig& cfg,
                             double theta, double delta);

/// Two-arm interferometer operator: a 2D x D matrix whose upper block is the
/// x-polarised output and lower block the y-polarised output (D = (2N+1)P).
Eigen::MatrixXcd projection_operator(int N, int P, const InterferometerConfig& cfg,
                                     double theta, double delta);

/// G(b, a) = ∫∫ conj(LG_b) LG_a ρ dρ dφ over the truncated basis, by quadrature.
Eigen::MatrixXcd mode_gram_matrix(int N, int P, double w0 = 1.0);

struct OracleResult {
  double intensity = 0.0;
  /// The state has population at |l| = N.
  bool edge_support = false;
};

/// Tr over space and polarisation of P ρ P†, with the spatial trace taken
/// against the numerically integrated mode Gram matrix.
OracleResult intensity_operator_oracle(const OamState& state, const InterferometerConfig& cfg,
                                       double theta, double delta, const Eigen::MatrixXcd& gram);
OracleResult intensity_operator_oracle(const OamState& state, const InterferometerConfig& cfg,
                                       double theta, double delta);

/// Noisy detection-probability trace. Each sample draws from its own RNG
/// stream derived from (seed, shot_index, sample index), so results do not
/// depend on evaluation order.
IntensityTrace simulate_trace(const Spectrum& spectrum, const InterferometerConfig& cfg,
                              std::span<const double> thetas, double delta, int shot_index = 0);
IntensityTrace simulate_trace(const OamState& state, const InterferometerConfig& cfg,
                              std::span<const double> thetas, double delta, int shot_index = 0);

/// Background (including drift) of a simulated shot at θ.
double background_at(const TraceMeta& meta, double theta, double theta_start);

}  // namespace oamspec
