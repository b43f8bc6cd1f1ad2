#pragma once

#include <complex>
#include <span>

#include "oamspec/modes.hpp"
#include "oamspec/states.hpp"

namespace oamspec {

/// Single-mode-fibre detector behind a matched SLM hologram. Lengths are in
/// units of the LG waist w0.
struct SmfConfig {
  /// Fibre mode radius σ / w0.
  double sigma_over_w0 = 0.6;
  /// Overall quantum efficiency κ.
  double kappa = 1.0;
  /// First-order SLM diffraction efficiency applied to apparent count rates.
  double diffraction_efficiency = 0.5;

  void validate() const;
};

/// Documented range of the closed-form efficiency.
inline constexpr int kSmfMaxRadial = 16;
inline constexpr int kSmfMaxOam = 60;

/// C^p_l = 2π ∫ LG^{|l|}_p(ρ) G(ρ) ρ dρ with G the fibre mode
/// sqrt(2/(πσ²)) exp(-ρ²/σ²). The hologram cancels e^{-ilφ} exactly.
std::complex<double> coupling_coefficient_numeric(ModeIndex mode, const SmfConfig& cfg, const RadialGrid& grid);
/// Same on a default grid covering both the mode and the fibre Gaussian.
std::complex<double> coupling_coefficient_numeric(ModeIndex mode, const SmfConfig& cfg);

/// ₂F₁(-n, b; c; z) as its (n+1)-term finite sum.
double hypergeometric_2f1_terminating(int n, double b, double c, double z);

/// η^p_l = κ |C^p_l|² in closed form. Requires p <= 16 and |l| <= 60.
double detection_efficiency_closed(ModeIndex mode, const SmfConfig& cfg);

/// Apparent count rate per l reported by an SLM + SMF scan:
/// diffraction_efficiency · Σ_p w_p η^p_l S_l. radial_weights[p] = w_p.
OamValues smf_spectrum_response(const Spectrum& input, std::span<const double> radial_weights,
                                const SmfConfig& cfg);

}  // namespace oamspec
