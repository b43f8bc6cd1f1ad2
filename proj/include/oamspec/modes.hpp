#pragma once

#include <complex>
#include <compare>
#include <span>
#include <vector>

namespace oamspec {

/// Label of a Laguerre-Gaussian mode: OAM index l and radial index p >= 0.
struct ModeIndex {
  int l = 0;
  int p = 0;

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
};

/// Largest factorial argument p + |l| accepted by the Laguerre and LG routines.
/// 170! is the largest factorial representable in a double.
inline constexpr int kMaxFactorialArgument = 170;

enum class QuadratureScheme { gauss_legendre };

/// Gauss-Legendre nodes and weights on an interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped onto [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// Discretisation of radial integrals ∫_0^R f(ρ) dρ.
class RadialGrid {
 public:
  static constexpr int kDefaultNodes = 512;

  RadialGrid(double max_radius, int node_count,
             QuadratureScheme scheme = QuadratureScheme::gauss_legendre);

  /// Default grid for a set of modes: R = 8 w0 (1 + sqrt(max(|l| + 2p))), 512 nodes.
  static RadialGrid for_modes(std::span<const ModeIndex> modes, double w0);

  double max_radius() const { return max_radius_; }
  int node_count() const { return static_cast<int>(rule_.nodes.size()); }
  QuadratureScheme scheme() const { return scheme_; }
  std::span<const double> nodes() const { return rule_.nodes; }
  std::span<const double> weights() const { return rule_.weights; }

  /// Resolution heuristic: R >= 5 w0 max(1, sqrt(|l| + 2p)).
  bool resolves(ModeIndex mode, double w0) const;

 private:
  double max_radius_;
  QuadratureScheme scheme_;
  QuadratureRule rule_;
};

/// Associated Laguerre polynomial L^l_p(x) evaluated as its finite series.
/// Requires p, l >= 0 and p + l <= kMaxFactorialArgument; throws NumericError
/// outside that range or when a series term overflows.
double assoc_laguerre(int p, int l, double x);

/// Real radial profile LG^{|l|}_p(ρ) of a waist-plane LG mode (normalised so
/// that 2π ∫ |LG|² ρ dρ = 1).
double lg_radial(ModeIndex mode, double w0, double rho);

/// Waist-plane LG field LG^{|l|}_p(ρ) e^{-ilφ}.
std::complex<double> lg_amplitude(ModeIndex mode, double w0, double rho, double phi);

struct OverlapResult {
  std::complex<double> value;
  /// |I_n - I_{n/2}|: difference against the same rule at half the nodes.
  double error_estimate = 0.0;
};

/// ∫∫ conj(LG_a) LG_b ρ dρ dφ. The azimuthal integral is taken analytically
/// (2π δ_{l_a,l_b}); the radial part uses the grid. Throws std::invalid_argument
/// if the grid does not resolve either mode.
OverlapResult mode_overlap(ModeIndex a, ModeIndex b, double w0, const RadialGrid& grid);
OverlapResult mode_overlap(ModeIndex a, ModeIndex b, double w0);

}  // namespace oamspec
