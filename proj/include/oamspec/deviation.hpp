#pragma once

#include "oamspec/interferometer.hpp"

namespace oamspec {

/// Image-rotator misalignment. Lengths in metres, angles in radians.
struct DeviationConfig {
  /// Maximum angular deviation Ω0, reached at θ = 90°.
  double omega0 = 0.0;
  /// Distance from the image rotator to the detection plane.
  double z = 0.25;
  /// Gaussian beam radius w at the detection plane.
  double waist = 0.4e-3;

  void validate() const;
};

struct BeamCenter {
  double x;
  double y;
};

/// Centre of the rotated beam: x = z tanΩ0 (cos 2θ - 1), y = z tanΩ0 sin 2θ.
BeamCenter beam_center(double theta, const DeviationConfig& cfg);

struct OverlapResult2d {
  double percent;
  /// Grid spacing coarser than w/4.
  bool under_resolved;
};

/// Percentage overlap |∫∫E1 E2*|² / (∫∫|E1|² ∫∫|E2|²) × 100 of two equal
/// Gaussian beams exp(-r²/w²) separated by d, on an n × n midpoint grid of
/// half-width 6w + d/2 centred between the beams.
OverlapResult2d overlap_percentage_numeric(double d, double waist, int n = 512);
/// A = 100 exp(-d²/w²).
double overlap_percentage_closed(double d, double waist);
/// Overlap at rotator angle θ, evaluated on the default transverse grid.
double overlap_percentage(double theta, const DeviationConfig& cfg);

/// Mean of A(θ)/100 over a uniform θ grid on [0, π), normalised by the
/// Ω0 = 0 value.
double average_fractional_overlap(const DeviationConfig& cfg, int theta_samples = 720);

/// Detection-plane waist w for which average_fractional_overlap equals target_F.
double fit_detection_waist(double target_F, double omega0, double z);

/// Scales the θ-dependent interference term of every sample by sqrt(A(θ)/100),
/// keeping the background and |k1|² + |k2|² baseline.
IntensityTrace degraded_trace(const IntensityTrace& trace, const DeviationConfig& cfg);

}  // namespace oamspec
