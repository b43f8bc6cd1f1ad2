#include "oamspec/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

#include "oamspec/error.hpp"

namespace oamspec {

namespace {

constexpr double kPi = std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Phase e^{-ilπ} = (-1)^l, kept exactly real.
double parity(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

void check_thetas(std::span<const double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("θ grid is empty");
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (!std::isfinite(thetas[k])) throw std::invalid_argument("θ grid has non-finite values");
    if (k > 0 && !(thetas[k] > thetas[k - 1]))
      throw std::invalid_argument("θ grid must be strictly increasing");
  }
  if (thetas.back() - thetas.front() >= kPi) throw std::invalid_argument("θ grid must span less than π");
}

}  // namespace

PolarizationCurve PolarizationCurve::ideal() { return PolarizationCurve{}; }

PolarizationCurve PolarizationCurve::analytic(double a) {
  if (!(a >= 0.0 && a <= 0.5)) throw std::invalid_argument("analytic polarisation needs a in [0, 0.5]");
  PolarizationCurve c;
  c.kind_ = Kind::analytic;
  c.a_ = a;
  return c;
}

PolarizationCurve PolarizationCurve::tabulated(std::vector<double> thetas, std::vector<double> cos_psi,
                                               std::vector<double> chi) {
  if (thetas.size() < 2 || thetas.size() != cos_psi.size())
    throw std::invalid_argument("tabulated polarisation needs >= 2 matching (θ, cos ψ) samples");
  if (!chi.empty() && chi.size() != thetas.size())
    throw std::invalid_argument("tabulated χ must match the θ samples");
  check_thetas(thetas);
  if (thetas.back() - thetas.front() >= kPi)
    throw std::invalid_argument("tabulated polarisation must span less than π");
  for (double c : cos_psi) {
    if (!(c > 0.0 && c <= 1.0)) throw std::invalid_argument("tabulated cos ψ must lie in (0, 1]");
  }
  PolarizationCurve c;
  c.kind_ = Kind::tabulated;
  c.thetas_ = std::move(thetas);
  c.cos_psi_ = std::move(cos_psi);
  c.chi_ = chi.empty() ? std::vector<double>(c.thetas_.size(), 0.0) : std::move(chi);
  return c;
}

double PolarizationCurve::interpolate(std::span<const double> values, double theta) const {
  const double t0 = thetas_.front();
  // Wrap into [t0, t0 + π).
  double t = std::fmod(theta - t0, kPi);
  if (t < 0.0) t += kPi;
  t += t0;
  const auto it = std::upper_bound(thetas_.begin(), thetas_.end(), t);
  if (it == thetas_.begin()) return values.front();
  const std::size_t hi = static_cast<std::size_t>(it - thetas_.begin());
  const std::size_t lo = hi - 1;
  double x1, v1;
  if (hi == thetas_.size()) {
    // Segment from the last sample back round to the first (period π).
    x1 = thetas_.front() + kPi;
    v1 = values.front();
  } else {
    x1 = thetas_[hi];
    v1 = values[hi];
  }
  const double x0 = thetas_[lo];
  const double frac = (t - x0) / (x1 - x0);
  return values[lo] + frac * (v1 - values[lo]);
}

double PolarizationCurve::cos_psi(double theta) const {
  switch (kind_) {
    case Kind::ideal:
      return 1.0;
    case Kind::analytic: {
      const double s = std::sin(theta);
      return std::sqrt(1.0 - a_ * s * s);
    }
    case Kind::tabulated:
      return interpolate(cos_psi_, theta);
  }
  return 1.0;
}

double PolarizationCurve::chi(double theta) const {
  if (kind_ == Kind::tabulated) return interpolate(chi_, theta);
  return 0.0;
}

std::string PolarizationCurve::describe() const {
  switch (kind_) {
    case Kind::ideal:
      return "ideal";
    case Kind::analytic:
      return fmt::format("analytic(a={:.17g})", a_);
    case Kind::tabulated: {
      std::string text = "tabulated(";
      for (std::size_t i = 0; i < thetas_.size(); ++i)
        text += fmt::format("{:.17g}:{:.17g}:{:.17g};", thetas_[i], cos_psi_[i], chi_[i]);
      return text + ")";
    }
  }
  return "unknown";
}

void NoiseModel::validate() const {
  if (!(background >= 0.0) || !std::isfinite(background))
    throw std::invalid_argument("noise background must be non-negative");
  if (!(drift >= 0.0) || !std::isfinite(drift)) throw std::invalid_argument("noise drift must be non-negative");
  if (shot_noise && !(photons_per_unit > 0.0))
    throw std::invalid_argument("shot noise needs photons_per_unit > 0");
}

void InterferometerConfig::validate() const {
  if (!(k1_mag > 0.0 && k1_mag <= 1.0) || !(k2_mag >= 0.0 && k2_mag <= 1.0))
    throw std::invalid_argument("arm amplitudes must satisfy 0 < |k1| <= 1 and 0 <= |k2| <= 1");
  if (!std::isfinite(delta_error)) throw std::invalid_argument("delta_error must be finite");
  noise.validate();
}

std::uint64_t InterferometerConfig::fingerprint() const {
  return fnv1a(fmt::format("k1={:.17g};k2={:.17g};de={:.17g};pol={};bg={:.17g};shot={};ppu={:.17g};drift={:.17g}",
                           k1_mag, k2_mag, delta_error, polarization.describe(), noise.background,
                           noise.shot_noise, noise.photons_per_unit, noise.drift));
}

std::vector<double> IntensityTrace::thetas() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.theta);
  return out;
}

std::vector<double> IntensityTrace::values() const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.value);
  return out;
}

void IntensityTrace::validate() const {
  if (!std::isfinite(delta)) throw std::invalid_argument("trace δ must be finite");
  const auto th = thetas();
  check_thetas(th);
  for (const auto& s : samples) {
    if (!std::isfinite(s.value)) throw std::invalid_argument("trace values must be finite");
    if (meta.label == "shot" && s.value < 0.0) throw std::invalid_argument("shot values must be non-negative");
  }
}

Eigen::MatrixXcd mirror_operator(int N, int P) {
  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int l = -N; l <= N; ++l)
    for (int p = 0; p < P; ++p) m((-l + N) * P + p, (l + N) * P + p) = parity(l);
  return m;
}

Eigen::MatrixXcd rotator_operator(int N, int P, double theta) {
  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int l = -N; l <= N; ++l)
    for (int p = 0; p < P; ++p)
      m((-l + N) * P + p, (l + N) * P + p) = parity(l) * std::polar(1.0, -2.0 * l * theta);
  return m;
}

namespace {

// ρ'(-l1 p1, -l2 p2) = u(l1) ρ(l1 p1, l2 p2) conj(u(l2)) for a reflection-type
// operator with per-l phase u(l).
template <typename PhaseFn>
Eigen::MatrixXcd reflect(const OamState& state, PhaseFn phase) {
  const int N = state.oam_truncation();
  const int P = state.radial_count();
  const auto& rho = state.density_matrix();
  Eigen::MatrixXcd out(rho.rows(), rho.cols());
  for (int l1 = -N; l1 <= N; ++l1) {
    const std::complex<double> u1 = phase(l1);
    for (int p1 = 0; p1 < P; ++p1) {
      const Eigen::Index src_r = state.index(l1, p1);
      const Eigen::Index dst_r = state.index(-l1, p1);
      for (int l2 = -N; l2 <= N; ++l2) {
        const std::complex<double> u2 = std::conj(phase(l2));
        for (int p2 = 0; p2 < P; ++p2)
          out(dst_r, state.index(-l2, p2)) = u1 * rho(src_r, state.index(l2, p2)) * u2;
      }
    }
  }
  return out;
}

}  // namespace

OamState mirror_apply(const OamState& state) {
  return OamState(state.oam_truncation(), state.radial_count(),
                  reflect(state, [](int l) { return std::complex<double>(parity(l), 0.0); }));
}

OamState rotator_apply(const OamState& state, double theta) {
  return OamState(state.oam_truncation(), state.radial_count(), reflect(state, [theta](int l) {
                    return parity(l) * std::polar(1.0, -2.0 * l * theta);
                  }));
}

double intensity_closed_form(const Spectrum& spectrum, const InterferometerConfig& cfg, double theta,
                             double delta) {
  const int N = spectrum.truncation();
  double fringe = 0.0;
  for (int l = -N; l <= N; ++l) {
    const double s = spectrum.at(l);
    if (s != 0.0) fringe += s * std::cos(delta + 2.0 * l * theta);
  }
  return cfg.k1_mag * cfg.k1_mag + cfg.k2_mag * cfg.k2_mag +
         2.0 * cfg.k1_mag * cfg.k2_mag * cfg.polarization.cos_psi(theta) * fringe;
}

Eigen::MatrixXcd projection_operator(int N, int P, const InterferometerConfig& cfg, double theta,
                                     double delta) {
  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  const double c = cfg.polarization.cos_psi(theta);
  const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
  const std::complex<double> y_phase = std::polar(1.0, cfg.polarization.chi(theta));
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(2 * d, d);
  for (int l = -N; l <= N; ++l) {
    const double mirror = parity(l);
    const std::complex<double> arm2 = cfg.k2_mag * std::polar(1.0, -(delta + 2.0 * l * theta));
    for (int p = 0; p < P; ++p) {
      const Eigen::Index in = static_cast<Eigen::Index>(l + N) * P + p;
      const Eigen::Index out = static_cast<Eigen::Index>(-l + N) * P + p;
      op(out, in) = mirror * (cfg.k1_mag + arm2 * c);
      op(d + out, in) = mirror * arm2 * s * y_phase;
    }
  }
  return op;
}

Eigen::MatrixXcd mode_gram_matrix(int N, int P, double w0) {
  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    const ModeIndex mb{static_cast<int>(b / P) - N, static_cast<int>(b % P)};
    for (Eigen::Index a = 0; a < d; ++a) {
      const ModeIndex ma{static_cast<int>(a / P) - N, static_cast<int>(a % P)};
      gram(b, a) = mode_overlap(mb, ma, w0).value;
    }
  }
  return gram;
}

OracleResult intensity_operator_oracle(const OamState& state, const InterferometerConfig& cfg, double theta,
                                       double delta, const Eigen::MatrixXcd& gram) {
  const int N = state.oam_truncation();
  const int P = state.radial_count();
  const Eigen::Index d = state.dimension();
  if (gram.rows() != d || gram.cols() != d) throw std::invalid_argument("Gram matrix does not match the state");

  const Eigen::MatrixXcd op = projection_operator(N, P, cfg, theta, delta);
  const Eigen::MatrixXcd out = op * state.density_matrix() * op.adjoint();
  // ∫ ⟨ρ,φ|ρ_out|ρ,φ⟩ per polarisation component = Tr(ρ_out_block G); x·y = 0
  // removes the cross blocks.
  const std::complex<double> total =
      (out.topLeftCorner(d, d) * gram).trace() + (out.bottomRightCorner(d, d) * gram).trace();

  OracleResult result;
  result.intensity = total.real();
  for (int p = 0; p < P; ++p) {
    if (std::abs(state.coefficient({N, p}, {N, p})) > 1e-14 ||
        std::abs(state.coefficient({-N, p}, {-N, p})) > 1e-14)
      result.edge_support = true;
  }
  return result;
}

OracleResult intensity_operator_oracle(const OamState& state, const InterferometerConfig& cfg, double theta,
                                       double delta) {
  return intensity_operator_oracle(state, cfg, theta, delta,
                                   mode_gram_matrix(state.oam_truncation(), state.radial_count()));
}

double background_at(const TraceMeta& meta, double theta, double theta_start) {
  return meta.background + meta.drift * (meta.shot_index + (theta - theta_start) / kPi);
}

IntensityTrace simulate_trace(const Spectrum& spectrum, const InterferometerConfig& cfg,
                              std::span<const double> thetas, double delta, int shot_index) {
  cfg.validate();
  check_thetas(thetas);
  if (shot_index < 0) throw std::invalid_argument("shot index must be non-negative");

  IntensityTrace trace;
  trace.delta = delta;
  trace.meta.label = "shot";
  trace.meta.config_hash = cfg.fingerprint();
  trace.meta.seed = cfg.noise.seed;
  trace.meta.shot_index = shot_index;
  trace.meta.k1_mag = cfg.k1_mag;
  trace.meta.k2_mag = cfg.k2_mag;
  trace.meta.background = cfg.noise.background;
  trace.meta.drift = cfg.noise.drift;
  trace.samples.resize(thetas.size());

  const std::uint64_t shot_key = splitmix64(cfg.noise.seed ^ splitmix64(static_cast<std::uint64_t>(shot_index)));
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double theta = thetas[k];
    double value = background_at(trace.meta, theta, thetas.front()) +
                   intensity_closed_form(spectrum, cfg, theta, delta);
    if (cfg.noise.shot_noise) {
      std::mt19937_64 rng(splitmix64(shot_key ^ static_cast<std::uint64_t>(k)));
      const double mean = std::max(0.0, value) * cfg.noise.photons_per_unit;
      if (mean > 4e18) throw NumericError("Poisson mean exceeds the counting range");
      std::poisson_distribution<long long> counts(mean);
      value = mean > 0.0 ? static_cast<double>(counts(rng)) / cfg.noise.photons_per_unit : 0.0;
    }
    if (value < 0.0) {
      value = 0.0;
      trace.meta.clamped = true;
    }
    trace.samples[k] = {theta, value};
  }
  return trace;
}

IntensityTrace simulate_trace(const OamState& state, const InterferometerConfig& cfg,
                              std::span<const double> thetas, double delta, int shot_index) {
  return simulate_trace(spectrum_of(state), cfg, thetas, delta, shot_index);
}

}  // namespace oamspec
