#include "oamspec/deviation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "oamspec/error.hpp"

namespace oamspec {

namespace {

struct AxisSums {
  double cross;
  double self_a;
  double self_b;
};

// Midpoint sums along one axis for beams centred at a and b.
AxisSums axis_sums(double a, double b, double centre, double half_width, int n, double waist) {
  const double h = 2.0 * half_width / n;
  const double inv_w2 = 1.0 / (waist * waist);
  AxisSums s{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) {
    const double x = centre - half_width + (i + 0.5) * h;
    const double ea = std::exp(-(x - a) * (x - a) * inv_w2);
    const double eb = std::exp(-(x - b) * (x - b) * inv_w2);
    s.cross += ea * eb * h;
    s.self_a += ea * ea * h;
    s.self_b += eb * eb * h;
  }
  return s;
}

}  // namespace

void DeviationConfig::validate() const {
  if (!(omega0 >= 0.0) || omega0 >= 0.5 * std::numbers::pi) throw std::invalid_argument("omega0 must lie in [0, π/2)");
  if (!(z > 0.0) || !std::isfinite(z)) throw std::invalid_argument("z must be positive");
  if (!(waist > 0.0) || !std::isfinite(waist)) throw std::invalid_argument("waist must be positive");
}

BeamCenter beam_center(double theta, const DeviationConfig& cfg) {
  cfg.validate();
  const double r = cfg.z * std::tan(cfg.omega0);
  return {r * (std::cos(2.0 * theta) - 1.0), r * std::sin(2.0 * theta)};
}

OverlapResult2d overlap_percentage_numeric(double d, double waist, int n) {
  if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("separation must be non-negative");
  if (!(waist > 0.0)) throw std::invalid_argument("waist must be positive");
  if (n < 2) throw std::invalid_argument("overlap grid needs at least 2 points per axis");
  const double half = 6.0 * waist + 0.5 * d;
  // Beams sit at ±d/2 along x; the integrand separates into x and y sums.
  const AxisSums sx = axis_sums(-0.5 * d, 0.5 * d, 0.0, half, n, waist);
  const AxisSums sy = axis_sums(0.0, 0.0, 0.0, half, n, waist);
  const double cross = sx.cross * sy.cross;
  const double norm = sx.self_a * sy.self_a * sx.self_b * sy.self_b;
  if (!(norm > 0.0)) throw NumericError("overlap normalisation vanished");
  return {100.0 * cross * cross / norm, 2.0 * half / n > 0.25 * waist};
}

double overlap_percentage_closed(double d, double waist) {
  if (!(waist > 0.0)) throw std::invalid_argument("waist must be positive");
  return 100.0 * std::exp(-d * d / (waist * waist));
}

double overlap_percentage(double theta, const DeviationConfig& cfg) {
  const auto c = beam_center(theta, cfg);
  const auto r = overlap_percentage_numeric(std::hypot(c.x, c.y), cfg.waist);
  if (r.under_resolved)
    throw NumericError(fmt::format("overlap grid under-resolved at θ = {:.6g} rad", theta));
  return r.percent;
}

double average_fractional_overlap(const DeviationConfig& cfg, int theta_samples) {
  cfg.validate();
  if (theta_samples < 1) throw std::invalid_argument("need at least one θ sample");
  auto mean_overlap = [&](const DeviationConfig& c) {
    double sum = 0.0;
    for (int k = 0; k < theta_samples; ++k) sum += overlap_percentage(k * std::numbers::pi / theta_samples, c);
    return sum / (100.0 * theta_samples);
  };
  DeviationConfig aligned = cfg;
  aligned.omega0 = 0.0;
  return mean_overlap(cfg) / mean_overlap(aligned);
}

double fit_detection_waist(double target_F, double omega0, double z) {
  if (!(target_F > 0.0 && target_F < 1.0)) throw std::invalid_argument("target F must lie in (0, 1)");
  if (!(omega0 > 0.0)) throw std::invalid_argument("waist fit needs omega0 > 0");
  DeviationConfig cfg{omega0, z, 1.0};
  cfg.validate();
  const double max_shift = 2.0 * z * std::tan(omega0);
  // F rises monotonically with w. The lower end keeps the transverse grid resolved.
  double lo = std::log(max_shift * 1e-2);
  double hi = std::log(max_shift * 1e2);
  auto f_at = [&](double log_w) {
    cfg.waist = std::exp(log_w);
    return average_fractional_overlap(cfg);
  };
  if (f_at(lo) > target_F || f_at(hi) < target_F) throw NumericError("waist fit failed to bracket the target F");
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f_at(mid) < target_F ? lo : hi) = mid;
  }
  return std::exp(0.5 * (lo + hi));
}

IntensityTrace degraded_trace(const IntensityTrace& trace, const DeviationConfig& cfg) {
  cfg.validate();
  IntensityTrace out = trace;
  out.meta.label = "degraded";
  if (trace.samples.empty()) return out;
  const double theta0 = trace.samples.front().theta;
  const double interference_free = trace.meta.k1_mag * trace.meta.k1_mag + trace.meta.k2_mag * trace.meta.k2_mag;
  for (auto& s : out.samples) {
    const double baseline = background_at(trace.meta, s.theta, theta0) + interference_free;
    s.value = baseline + (s.value - baseline) * std::sqrt(overlap_percentage(s.theta, cfg) / 100.0);
  }
  return out;
}

}  // namespace oamspec
