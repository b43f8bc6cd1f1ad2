#include "oamspec/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "oamspec/error.hpp"

namespace oamspec {

namespace {

// Gauss-Legendre rule on [-1, 1] via Newton iteration on P_n.
QuadratureRule reference_rule_uncached(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Re-evaluate the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const QuadratureRule& reference_rule(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, reference_rule_uncached(n)).first;
  return it->second;
}

double mode_scale(ModeIndex mode) {
  return std::sqrt(static_cast<double>(std::abs(mode.l) + 2 * mode.p));
}

void check_mode(ModeIndex mode) {
  if (mode.p < 0) throw std::invalid_argument("radial index p must be non-negative");
  if (std::abs(mode.l) + mode.p > kMaxFactorialArgument)
    throw NumericError("p + |l| = " + std::to_string(std::abs(mode.l) + mode.p) +
                       " exceeds the supported factorial range (<= 170)");
}

double radial_integral(std::span<const double> nodes, std::span<const double> weights,
                       ModeIndex a, ModeIndex b, double w0) {
  double sum = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double rho = nodes[k];
    sum += weights[k] * lg_radial(a, w0, rho) * lg_radial(b, w0, rho) * rho;
  }
  return 2.0 * std::numbers::pi * sum;
}

}  // namespace

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  const auto& ref = reference_rule(n);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * ref.nodes[i];
    rule.weights[i] = half * ref.weights[i];
  }
  return rule;
}

RadialGrid::RadialGrid(double max_radius, int node_count, QuadratureScheme scheme)
    : max_radius_(max_radius), scheme_(scheme) {
  if (!(max_radius > 0.0) || !std::isfinite(max_radius))
    throw std::invalid_argument("radial grid needs a positive finite max_radius");
  if (node_count < 2) throw std::invalid_argument("radial grid needs at least 2 nodes");
  rule_ = gauss_legendre(node_count, 0.0, max_radius);
}

RadialGrid RadialGrid::for_modes(std::span<const ModeIndex> modes, double w0) {
  if (!(w0 > 0.0)) throw std::invalid_argument("beam waist must be positive");
  double scale = 0.0;
  for (const auto& m : modes) scale = std::max(scale, mode_scale(m));
  return RadialGrid(8.0 * w0 * (1.0 + scale), kDefaultNodes);
}

bool RadialGrid::resolves(ModeIndex mode, double w0) const {
  return max_radius_ >= 5.0 * w0 * std::max(1.0, mode_scale(mode));
}

double assoc_laguerre(int p, int l, double x) {
  if (p < 0 || l < 0) throw std::invalid_argument("assoc_laguerre needs p, l >= 0");
  if (!std::isfinite(x)) throw std::invalid_argument("assoc_laguerre needs finite x");
  if (p + l > kMaxFactorialArgument)
    throw NumericError("assoc_laguerre: p + l = " + std::to_string(p + l) +
                       " exceeds the supported factorial range (<= 170)");
  if (p == 0) return 1.0;

  // Term m is (-1)^m (p+l)! / ((p-m)! (l+m)! m!) x^m. Term 0 is the binomial
  // C(p+l, p), built exactly; later terms follow from the ratio of successive terms.
  std::array<double, kMaxFactorialArgument + 1> terms{};
  double c = 1.0;
  for (int k = 1; k <= p; ++k) c = c * (l + k) / k;
  terms[0] = c;
  for (int m = 1; m <= p; ++m) {
    c *= -x * (p - m + 1) / (static_cast<double>(l + m) * m);
    if (!std::isfinite(c)) throw NumericError("assoc_laguerre: series term overflow");
    terms[m] = c;
  }
  std::sort(terms.begin(), terms.begin() + p + 1,
            [](double u, double v) { return std::abs(u) > std::abs(v); });
  double sum = 0.0;
  for (int m = 0; m <= p; ++m) sum += terms[m];
  return sum;
}

double lg_radial(ModeIndex mode, double w0, double rho) {
  if (!(w0 > 0.0)) throw std::invalid_argument("beam waist must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("radius must be non-negative");
  check_mode(mode);
  const int al = std::abs(mode.l);
  const int p = mode.p;

  // (p+1)(p+2)...(p+|l|) = (p+|l|)!/p!, bounded by 170! so it stays finite.
  double factorial_ratio = 1.0;
  for (int k = 1; k <= al; ++k) factorial_ratio *= (p + k);

  const double u = rho / w0;
  if (u == 0.0 && al > 0) return 0.0;
  double log_mag = 0.5 * std::log(2.0 / (std::numbers::pi * w0 * w0)) -
                   0.5 * std::log(factorial_ratio) - u * u;
  if (al > 0) log_mag += al * std::log(std::numbers::sqrt2 * u);
  return std::exp(log_mag) * assoc_laguerre(p, al, 2.0 * u * u);
}

std::complex<double> lg_amplitude(ModeIndex mode, double w0, double rho, double phi) {
  return lg_radial(mode, w0, rho) * std::polar(1.0, -mode.l * phi);
}

OverlapResult mode_overlap(ModeIndex a, ModeIndex b, double w0, const RadialGrid& grid) {
  if (!(w0 > 0.0)) throw std::invalid_argument("beam waist must be positive");
  check_mode(a);
  check_mode(b);
  if (!grid.resolves(a, w0) || !grid.resolves(b, w0))
    throw std::invalid_argument("radial grid does not resolve the requested modes");
  if (a.l != b.l) return {};

  const double full = radial_integral(grid.nodes(), grid.weights(), a, b, w0);
  const auto coarse_rule = gauss_legendre(std::max(2, grid.node_count() / 2), 0.0, grid.max_radius());
  const double coarse = radial_integral(coarse_rule.nodes, coarse_rule.weights, a, b, w0);
  return {full, std::abs(full - coarse)};
}

OverlapResult mode_overlap(ModeIndex a, ModeIndex b, double w0) {
  const std::array modes{a, b};
  return mode_overlap(a, b, w0, RadialGrid::for_modes(modes, w0));
}

}  // namespace oamspec
