#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "oamspec/modes.hpp"

namespace oamspec {

/// Values indexed by OAM index l ∈ [-N, N] with no normalisation constraint
/// (unnormalised projections, apparent count rates).
struct OamValues {
  int N = 0;
  std::vector<double> values;  // values[l + N]

  OamValues() = default;
  OamValues(int n, std::vector<double> v);
  double at(int l) const;
};

/// OAM spectrum S_l over l ∈ [-N, N]: non-negative, sums to 1 within 1e-10.
class Spectrum {
 public:
  static constexpr double kSumTolerance = 1e-10;

  Spectrum(int N, std::vector<double> values);

  /// Normalises non-negative weights to unit sum.
  static Spectrum from_weights(int N, std::vector<double> weights);

  int truncation() const { return N_; }
  double at(int l) const;
  std::span<const double> values() const { return values_; }

 private:
  int N_;
  std::vector<double> values_;
};

/// Truncated density matrix C^{p1,p2}_{l1,l2} over l ∈ [-N, N], p ∈ [0, P-1].
/// Basis index of (l, p) is (l + N) * P + p. Immutable once constructed.
class OamState {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates Hermiticity, unit trace and positive semidefiniteness.
  static OamState from_density_matrix(int N, int P, Eigen::MatrixXcd rho);

  int oam_truncation() const { return N_; }
  int radial_count() const { return P_; }
  Eigen::Index dimension() const { return rho_.rows(); }
  Eigen::Index index(int l, int p) const;
  ModeIndex mode_at(Eigen::Index i) const;

  const Eigen::MatrixXcd& density_matrix() const { return rho_; }
  std::complex<double> coefficient(ModeIndex row, ModeIndex col) const;

 private:
  OamState(int N, int P, Eigen::MatrixXcd rho);

  friend OamState mirror_apply(const OamState&);
  friend OamState rotator_apply(const OamState&, double);

  int N_;
  int P_;
  Eigen::MatrixXcd rho_;
};

/// Rank-1 state |ψ⟩⟨ψ| from (unnormalised) amplitudes in the state basis.
OamState pure_state(int N, int P, const Eigen::VectorXcd& amplitudes);

/// Pure p = 0 state with a_l ∝ exp(-l²/(4σ²)), so S_l ∝ exp(-l²/(2σ²)).
/// Rejects N for which the Gaussian mass beyond ±N exceeds 1e-6.
OamState gaussian_pure_state(double sigma, int N);

struct WeightedState {
  OamState state;
  double weight;
};

/// Convex combination Σ w_i ρ_i. Weights must sum to 1 within 1e-10.
OamState mix_states(std::span<const WeightedState> parts);

/// Equal-amplitude p = 0 superposition of the listed OAM modes.
OamState comb_state(std::span<const int> ls, int N);

/// State diagonal in (l, p) with C^{p,p}_{l,l} = S_l w_p.
OamState diagonal_state(const Spectrum& spectrum, std::span<const double> radial_weights);

/// S_l = Σ_p C^{p,p}_{l,l}.
Spectrum spectrum_of(const OamState& state);

/// Tr ρ².
double purity(const OamState& state);

/// SPDC source parameters of the reference experiment; recorded as metadata only.
struct SpdcProvenance {
  static constexpr double phase_matching_angle_deg = 28.668;
  static constexpr double crystal_length_mm = 15.0;
  static constexpr double pump_waist_um = 388.0;
};

}  // namespace oamspec
