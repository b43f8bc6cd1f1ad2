#include "oamspec/smf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

namespace oamspec {

void SmfConfig::validate() const {
  if (!(sigma_over_w0 > 0.0) || !std::isfinite(sigma_over_w0))
    throw std::invalid_argument("sigma_over_w0 must be positive");
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("kappa must lie in (0, 1]");
  if (!(diffraction_efficiency > 0.0 && diffraction_efficiency <= 1.0))
    throw std::invalid_argument("diffraction_efficiency must lie in (0, 1]");
}

std::complex<double> coupling_coefficient_numeric(ModeIndex mode, const SmfConfig& cfg, const RadialGrid& grid) {
  cfg.validate();
  if (mode.p < 0) throw std::invalid_argument("radial index must be non-negative");
  if (!grid.resolves(mode, 1.0) || grid.max_radius() < 5.0 * cfg.sigma_over_w0)
    throw std::invalid_argument("radial grid does not resolve the coupling integrand");
  const double s = cfg.sigma_over_w0;
  const double g0 = std::sqrt(2.0 / (std::numbers::pi * s * s));
  const auto nodes = grid.nodes();
  const auto weights = grid.weights();
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double rho = nodes[k];
    sum += weights[k] * lg_radial(mode, 1.0, rho) * g0 * std::exp(-rho * rho / (s * s)) * rho;
  }
  return {2.0 * std::numbers::pi * sum, 0.0};
}

std::complex<double> coupling_coefficient_numeric(ModeIndex mode, const SmfConfig& cfg) {
  const std::array modes{mode};
  const auto base = RadialGrid::for_modes(modes, 1.0);
  const double radius = std::max(base.max_radius(), 8.0 * cfg.sigma_over_w0);
  return coupling_coefficient_numeric(mode, cfg, RadialGrid(radius, RadialGrid::kDefaultNodes));
}

double hypergeometric_2f1_terminating(int n, double b, double c, double z) {
  if (n < 0) throw std::invalid_argument("terminating 2F1 needs a non-positive integer first argument");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < n; ++k) {
    if (c + k == 0.0) throw std::invalid_argument("2F1: c is a non-positive integer within the series");
    term *= (k - n) * (b + k) / ((c + k) * (k + 1)) * z;
    sum += term;
  }
  return sum;
}

double detection_efficiency_closed(ModeIndex mode, const SmfConfig& cfg) {
  cfg.validate();
  const int al = std::abs(mode.l);
  const int p = mode.p;
  if (p < 0 || p > kSmfMaxRadial || al > kSmfMaxOam)
    throw std::invalid_argument(fmt::format("closed-form SMF efficiency supports p <= {} and |l| <= {}, got (l={}, p={})",
                                            kSmfMaxRadial, kSmfMaxOam, mode.l, p));
  const double r = 1.0 / (cfg.sigma_over_w0 * cfg.sigma_over_w0);  // (w0/σ)²
  const double t = 1.0 + r;
  const double f = hypergeometric_2f1_terminating(p, 1.0 + 0.5 * al, 1.0 + al, 2.0 / t);
  const double log_prefactor = std::log(4.0 * std::numbers::pi * r) + std::lgamma(p + al + 1.0) -
                               std::lgamma(p + 1.0) - al * std::numbers::ln2;
  const double log_amp = -(1.0 + 0.5 * al) * std::log(t) - std::lgamma(0.5 * (al + 1.0));
  return cfg.kappa * std::exp(log_prefactor + 2.0 * log_amp) * f * f;
}

OamValues smf_spectrum_response(const Spectrum& input, std::span<const double> radial_weights,
                                const SmfConfig& cfg) {
  cfg.validate();
  if (radial_weights.empty()) throw std::invalid_argument("radial weights must not be empty");
  double total = 0.0;
  for (double w : radial_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("radial weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > Spectrum::kSumTolerance) throw std::invalid_argument("radial weights must sum to 1");
  const int N = input.truncation();
  std::vector<double> out(2 * N + 1, 0.0);
  for (int l = -N; l <= N; ++l) {
    double eta = 0.0;
    for (std::size_t p = 0; p < radial_weights.size(); ++p)
      if (radial_weights[p] > 0.0)
        eta += radial_weights[p] * detection_efficiency_closed({l, static_cast<int>(p)}, cfg);
    out[l + N] = cfg.diffraction_efficiency * eta * input.at(l);
  }
  return OamValues(N, std::move(out));
}

}  // namespace oamspec
