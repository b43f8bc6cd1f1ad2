#include "oamspec/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace oamspec {

namespace {

void check_truncation(int N, int P) {
  if (N < 1) throw std::invalid_argument("OAM truncation N must be >= 1");
  if (P < 1) throw std::invalid_argument("radial truncation P must be >= 1");
}

}  // namespace

OamValues::OamValues(int n, std::vector<double> v) : N(n), values(std::move(v)) {
  if (n < 0 || values.size() != static_cast<std::size_t>(2 * n + 1))
    throw std::invalid_argument("OamValues needs 2N+1 entries");
}

double OamValues::at(int l) const {
  if (l < -N || l > N) throw std::out_of_range("l outside [-N, N]");
  return values[l + N];
}

Spectrum::Spectrum(int N, std::vector<double> values) : N_(N), values_(std::move(values)) {
  if (N < 0) throw std::invalid_argument("spectrum truncation must be non-negative");
  if (values_.size() != static_cast<std::size_t>(2 * N + 1))
    throw std::invalid_argument("spectrum needs 2N+1 entries, got " +
                                std::to_string(values_.size()));
  for (double s : values_) {
    if (!(s >= 0.0) || !std::isfinite(s))
      throw std::invalid_argument("spectrum entries must be finite and non-negative");
  }
  const double total = std::accumulate(values_.begin(), values_.end(), 0.0);
  if (std::abs(total - 1.0) > kSumTolerance)
    throw std::invalid_argument("spectrum must sum to 1 (got " + std::to_string(total) + ")");
}

Spectrum Spectrum::from_weights(int N, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("spectrum weights must be finite and non-negative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("spectrum weights sum to zero");
  for (double& w : weights) w /= total;
  return Spectrum(N, std::move(weights));
}

double Spectrum::at(int l) const {
  if (l < -N_ || l > N_) return 0.0;
  return values_[l + N_];
}

OamState::OamState(int N, int P, Eigen::MatrixXcd rho) : N_(N), P_(P), rho_(std::move(rho)) {}

OamState OamState::from_density_matrix(int N, int P, Eigen::MatrixXcd rho) {
  check_truncation(N, P);
  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("density matrix must be ((2N+1)P)^2");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTolerance)
    throw std::invalid_argument("density matrix is not Hermitian");
  const std::complex<double> tr = rho.trace();
  if (std::abs(tr - 1.0) > kTolerance)
    throw std::invalid_argument("density matrix trace is not 1");
  // Symmetrise before the eigensolve so round-off does not leak into the check.
  const Eigen::MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::invalid_argument("eigen-decomposition of density matrix failed");
  if (solver.eigenvalues().minCoeff() < -kTolerance)
    throw std::invalid_argument("density matrix is not positive semidefinite");
  return OamState(N, P, herm);
}

Eigen::Index OamState::index(int l, int p) const {
  if (l < -N_ || l > N_ || p < 0 || p >= P_) throw std::out_of_range("mode outside truncation");
  return static_cast<Eigen::Index>(l + N_) * P_ + p;
}

ModeIndex OamState::mode_at(Eigen::Index i) const {
  return {static_cast<int>(i / P_) - N_, static_cast<int>(i % P_)};
}

std::complex<double> OamState::coefficient(ModeIndex row, ModeIndex col) const {
  return rho_(index(row.l, row.p), index(col.l, col.p));
}

OamState pure_state(int N, int P, const Eigen::VectorXcd& amplitudes) {
  check_truncation(N, P);
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw std::invalid_argument("pure state amplitudes must be finite and not all zero");
  const Eigen::VectorXcd psi = amplitudes / norm;
  return OamState::from_density_matrix(N, P, psi * psi.adjoint());
}

OamState gaussian_pure_state(double sigma, int N) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("Gaussian width sigma must be positive");
  if (N < 1) throw std::invalid_argument("OAM truncation N must be >= 1");

  // Mass of the untruncated Gaussian spectrum beyond ±N.
  auto weight = [sigma](double l) { return std::exp(-l * l / (2.0 * sigma * sigma)); };
  double inside = 0.0;
  for (int l = -N; l <= N; ++l) inside += weight(l);
  double tail = 0.0;
  for (int l = N + 1;; ++l) {
    const double w = weight(l);
    tail += 2.0 * w;
    if (w < 1e-300 || w < 1e-18 * tail) break;
  }
  if (tail / (inside + tail) > 1e-6)
    throw std::invalid_argument("N=" + std::to_string(N) +
                                " truncates more than 1e-6 of the Gaussian spectrum");

  Eigen::VectorXcd amps(2 * N + 1);
  for (int l = -N; l <= N; ++l) amps(l + N) = std::exp(-l * static_cast<double>(l) / (4.0 * sigma * sigma));
  return pure_state(N, 1, amps);
}

OamState mix_states(std::span<const WeightedState> parts) {
  if (parts.empty()) throw std::invalid_argument("mixture needs at least one part");
  const int N = parts.front().state.oam_truncation();
  const int P = parts.front().state.radial_count();
  double total = 0.0;
  for (const auto& part : parts) {
    if (part.state.oam_truncation() != N || part.state.radial_count() != P)
      throw std::invalid_argument("mixture parts have mismatched (N, P)");
    if (!(part.weight > 0.0)) throw std::invalid_argument("mixture weights must be positive");
    total += part.weight;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("mixture weights must sum to 1");

  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(parts.front().state.dimension(),
                                                parts.front().state.dimension());
  for (const auto& part : parts) rho += part.weight * part.state.density_matrix();
  return OamState::from_density_matrix(N, P, std::move(rho));
}

OamState comb_state(std::span<const int> ls, int N) {
  if (N < 1) throw std::invalid_argument("OAM truncation N must be >= 1");
  if (ls.empty()) throw std::invalid_argument("comb needs at least one mode");
  std::set<int> seen;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(2 * N + 1);
  for (int l : ls) {
    if (l < -N || l > N) throw std::invalid_argument("comb mode l=" + std::to_string(l) + " outside [-N, N]");
    if (!seen.insert(l).second) throw std::invalid_argument("comb modes must be distinct");
    amps(l + N) = 1.0;
  }
  return pure_state(N, 1, amps);
}

OamState diagonal_state(const Spectrum& spectrum, std::span<const double> radial_weights) {
  const int N = spectrum.truncation();
  const int P = static_cast<int>(radial_weights.size());
  check_truncation(N, P);
  double total = 0.0;
  for (double w : radial_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("radial weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) throw std::invalid_argument("radial weights must sum to 1");

  const Eigen::Index d = static_cast<Eigen::Index>(2 * N + 1) * P;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (int l = -N; l <= N; ++l) {
    for (int p = 0; p < P; ++p) {
      const Eigen::Index i = static_cast<Eigen::Index>(l + N) * P + p;
      rho(i, i) = spectrum.at(l) * radial_weights[p];
    }
  }
  return OamState::from_density_matrix(N, P, std::move(rho));
}

Spectrum spectrum_of(const OamState& state) {
  const int N = state.oam_truncation();
  const int P = state.radial_count();
  std::vector<double> s(2 * N + 1, 0.0);
  for (int l = -N; l <= N; ++l) {
    double acc = 0.0;
    for (int p = 0; p < P; ++p) acc += state.coefficient({l, p}, {l, p}).real();
    s[l + N] = std::max(acc, 0.0);
  }
  return Spectrum(N, std::move(s));
}

double purity(const OamState& state) {
  // Tr ρ² = Σ_ij |ρ_ij|² for Hermitian ρ.
  return state.density_matrix().squaredNorm();
}

}  // namespace oamspec
