#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oamspec/interferometer.hpp"

using namespace oamspec;

namespace {

constexpr double kPi = std::numbers::pi;

// Direct transcription of the detected-intensity formula.
double intensity_oracle(const Spectrum& s, double k1, double k2, double cos_psi, double theta, double delta) {
  double fringe = 0.0;
  for (int l = -s.truncation(); l <= s.truncation(); ++l) fringe += s.at(l) * std::cos(delta + 2.0 * l * theta);
  return k1 * k1 + k2 * k2 + 2.0 * k1 * k2 * cos_psi * fringe;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::Index idx(int N, int P, int l, int p) { return static_cast<Eigen::Index>(l + N) * P + p; }

}  // namespace

TEST(MirrorOperator, ElementsAndInvolution) {
  const int N = 3, P = 2;
  const auto M = mirror_operator(N, P);
  const Eigen::Index D = (2 * N + 1) * P;
  EXPECT_LT(max_abs(M * M - Eigen::MatrixXcd::Identity(D, D)), 1e-15);
  EXPECT_LT(max_abs(M * M.adjoint() - Eigen::MatrixXcd::Identity(D, D)), 1e-15);
  for (int l = -N; l <= N; ++l)
    for (int p = 0; p < P; ++p)
      EXPECT_NEAR(std::abs(M(idx(N, P, -l, p), idx(N, P, l, p)) - std::polar(1.0, -l * kPi)), 0.0, 1e-15);
}

TEST(RotatorOperator, CompositionPhases) {
  const int N = 4, P = 2;
  const Eigen::Index D = (2 * N + 1) * P;
  EXPECT_LT(max_abs(rotator_operator(N, P, 0.0) - mirror_operator(N, P)), 1e-15);
  gen::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double t1 = gen::uniform_real(rng, -kPi, kPi);
    const double t2 = gen::uniform_real(rng, -kPi, kPi);
    const Eigen::MatrixXcd prod = rotator_operator(N, P, t2) * rotator_operator(N, P, t1);
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(D, D);
    for (int l = -N; l <= N; ++l)
      for (int p = 0; p < P; ++p) expected(idx(N, P, l, p), idx(N, P, l, p)) = std::polar(1.0, 2.0 * l * (t2 - t1));
    EXPECT_LT(max_abs(prod - expected), 1e-13);
    EXPECT_LT(max_abs(rotator_operator(N, P, t1) * rotator_operator(N, P, t1) - Eigen::MatrixXcd::Identity(D, D)),
              1e-13);
  }
  // θ then -θ leaves e^{-i4lθ} on every mode.
  const double t = 0.3;
  const Eigen::MatrixXcd back = rotator_operator(N, P, -t) * rotator_operator(N, P, t);
  for (int l = -N; l <= N; ++l)
    EXPECT_NEAR(std::abs(back(idx(N, P, l, 1), idx(N, P, l, 1)) - std::polar(1.0, -4.0 * l * t)), 0.0, 1e-13);
}

TEST(RotatorOperator, QuarterTurnPhase) {
  const int N = 3, P = 2;
  const auto R = rotator_operator(N, P, kPi / 4);
  EXPECT_NEAR(std::abs(R(idx(N, P, -2, 1), idx(N, P, 2, 1)) - std::polar(1.0, -2.0 * (kPi + kPi / 2))), 0.0, 1e-14);
}

TEST(MirrorApply, ReflectsSpectrumAndIsInvolution) {
  gen::Rng rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = gen::random_state(rng, gen::uniform_int(rng, 1, 4), gen::uniform_int(rng, 1, 3));
    const auto m = mirror_apply(s);
    const auto spec = spectrum_of(s), mspec = spectrum_of(m);
    for (int l = -s.oam_truncation(); l <= s.oam_truncation(); ++l) EXPECT_NEAR(mspec.at(l), spec.at(-l), 1e-14);
    EXPECT_LT(max_abs(mirror_apply(m).density_matrix() - s.density_matrix()), 1e-14);
    EXPECT_NEAR(m.density_matrix().trace().real(), 1.0, 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> a(s.density_matrix()), b(m.density_matrix());
    EXPECT_LT((a.eigenvalues() - b.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
  }
  const auto single = spectrum_of(mirror_apply(comb_state(std::vector<int>{1}, 2)));
  EXPECT_DOUBLE_EQ(single.at(-1), 1.0);
}

TEST(RotatorApply, MatchesOperatorConjugationAndIsInvolution) {
  gen::Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const int N = gen::uniform_int(rng, 1, 4), P = gen::uniform_int(rng, 1, 3);
    const auto s = gen::random_state(rng, N, P);
    const double theta = gen::uniform_real(rng, 0.0, kPi);
    const auto R = rotator_operator(N, P, theta);
    const auto r = rotator_apply(s, theta);
    EXPECT_LT(max_abs(r.density_matrix() - R * s.density_matrix() * R.adjoint()), 1e-14);
    EXPECT_LT(max_abs(rotator_apply(r, theta).density_matrix() - s.density_matrix()), 1e-13);
    EXPECT_LT(max_abs(rotator_apply(s, 0.0).density_matrix() - mirror_apply(s).density_matrix()), 1e-15);
  }
}

TEST(IntensityClosedForm, FrozenValues) {
  InterferometerConfig cfg;
  const Spectrum s0(1, {0.0, 1.0, 0.0});
  for (double theta : {0.0, 0.4, 1.3, 2.9}) {
    EXPECT_NEAR(intensity_closed_form(s0, cfg, theta, kDeltaConstructive), 1.0, 1e-15);
    EXPECT_NEAR(intensity_closed_form(s0, cfg, theta, kDeltaDestructive), 0.0, 1e-15);
  }
}

TEST(IntensityClosedForm, MatchesFormulaAndIsPiPeriodic) {
  gen::Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = gen::uniform_int(rng, 1, 30);
    const auto s = gen::random_spectrum(rng, N, false);
    InterferometerConfig cfg;
    cfg.k1_mag = gen::uniform_real(rng, 0.1, 1.0);
    cfg.k2_mag = gen::uniform_real(rng, 0.0, 1.0);
    const double a = gen::uniform_real(rng, 0.0, 0.5);
    cfg.polarization = PolarizationCurve::analytic(a);
    const double theta = gen::uniform_real(rng, -kPi, kPi);
    const double delta = gen::uniform_real(rng, 0.0, 2 * kPi);
    const double cp = std::sqrt(1.0 - a * std::sin(theta) * std::sin(theta));
    const double v = intensity_closed_form(s, cfg, theta, delta);
    EXPECT_NEAR(v, intensity_oracle(s, cfg.k1_mag, cfg.k2_mag, cp, theta, delta), 1e-13);
    EXPECT_NEAR(v, intensity_closed_form(s, cfg, theta + kPi, delta), 1e-12);
  }
}

TEST(IntensityOperatorOracle, AgreesWithClosedForm) {
  gen::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const int N = gen::uniform_int(rng, 1, 5), P = gen::uniform_int(rng, 1, 3);
    const auto s = trial % 2 ? gen::random_state(rng, N, P)
                             : diagonal_state(gen::random_spectrum(rng, N, false), std::vector<double>(P, 1.0 / P));
    InterferometerConfig cfg;
    cfg.k1_mag = gen::uniform_real(rng, 0.1, 1.0);
    cfg.k2_mag = gen::uniform_real(rng, 0.1, 1.0);
    cfg.polarization = PolarizationCurve::analytic(gen::uniform_real(rng, 0.0, 0.5));
    const double theta = gen::uniform_real(rng, 0.0, kPi);
    const double delta = gen::uniform_real(rng, 0.0, 2 * kPi);
    const auto r = intensity_operator_oracle(s, cfg, theta, delta);
    EXPECT_NEAR(r.intensity, intensity_closed_form(spectrum_of(s), cfg, theta, delta), 1e-10);
  }
}

TEST(IntensityOperatorOracle, BlindToOffDiagonals) {
  const int N = 2, P = 2;
  const auto diag = diagonal_state(Spectrum(2, {0.1, 0.2, 0.4, 0.2, 0.1}), std::vector<double>{0.5, 0.5});
  Eigen::MatrixXcd rho = diag.density_matrix();
  const auto i = diag.index(1, 0), j = diag.index(-1, 0);
  rho(i, j) = {0.03, 0.04};
  rho(j, i) = std::conj(rho(i, j));
  const auto coherent = OamState::from_density_matrix(N, P, rho);
  InterferometerConfig cfg;
  cfg.polarization = PolarizationCurve::analytic(0.2);
  const auto gram = mode_gram_matrix(N, P);
  for (double theta : {0.1, 0.7, 2.0}) {
    const double a = intensity_operator_oracle(diag, cfg, theta, 0.4, gram).intensity;
    const double b = intensity_operator_oracle(coherent, cfg, theta, 0.4, gram).intensity;
    EXPECT_NEAR(a, b, 1e-10);
  }
}

TEST(IntensityOperatorOracle, BlockedArm) {
  gen::Rng rng(1);
  const auto s = gen::random_state(rng, 3, 2);
  InterferometerConfig cfg;
  cfg.k1_mag = 0.6;
  cfg.k2_mag = 0.0;
  for (double theta : {0.0, 0.5, 1.5})
    EXPECT_NEAR(intensity_operator_oracle(s, cfg, theta, 1.0).intensity, 0.36, 1e-10);
}

TEST(PolarizationCurve, AnalyticAndTabulated) {
  EXPECT_DOUBLE_EQ(PolarizationCurve::ideal().cos_psi(1.0), 1.0);
  const auto c = PolarizationCurve::analytic(0.3);
  EXPECT_DOUBLE_EQ(c.cos_psi(0.0), 1.0);
  EXPECT_NEAR(c.cos_psi(kPi / 2), std::sqrt(0.7), 1e-15);
  EXPECT_THROW(PolarizationCurve::analytic(0.6), std::invalid_argument);
  const auto t = PolarizationCurve::tabulated({0.0, kPi / 2}, {1.0, 0.8});
  EXPECT_NEAR(t.cos_psi(kPi / 4), 0.9, 1e-15);
  EXPECT_NEAR(t.cos_psi(3 * kPi / 4), 0.9, 1e-15);
  EXPECT_NEAR(t.cos_psi(kPi), 1.0, 1e-15);
  EXPECT_THROW(PolarizationCurve::tabulated({0.0, 1.0}, {1.0, 0.0}), std::invalid_argument);
}

TEST(SimulateTrace, NoiselessEqualsClosedForm) {
  const Spectrum s = spectrum_of(gaussian_pure_state(8.0, 50));
  InterferometerConfig cfg;
  cfg.polarization = PolarizationCurve::analytic(0.3);
  const auto thetas = std::vector<double>{0.0, 0.1, 0.5, 1.0, 3.0};
  const auto tr = simulate_trace(s, cfg, thetas, kDeltaConstructive);
  for (std::size_t k = 0; k < thetas.size(); ++k)
    EXPECT_EQ(tr.samples[k].value, intensity_closed_form(s, cfg, thetas[k], kDeltaConstructive));
  EXPECT_EQ(tr.meta.config_hash, cfg.fingerprint());
}

TEST(SimulateTrace, PoissonStatistics) {
  const Spectrum s = spectrum_of(gaussian_pure_state(8.0, 50));
  InterferometerConfig cfg;
  cfg.noise.shot_noise = true;
  cfg.noise.seed = 99;
  cfg.noise.background = 1.0;
  std::vector<double> thetas;
  for (int k = 0; k < 2000; ++k) thetas.push_back(k * kPi / 2000);
  const auto tr = simulate_trace(s, cfg, thetas, kDeltaConstructive);
  double chi2 = 0.0;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    const double mean = cfg.noise.background + intensity_closed_form(s, cfg, thetas[k], kDeltaConstructive);
    const double sd = std::sqrt(mean / cfg.noise.photons_per_unit);
    EXPECT_LT(std::abs(tr.samples[k].value - mean), 5.0 * sd + 1e-12);
    EXPECT_LT(std::abs(tr.samples[k].value - mean) / mean, 5e-3);
    chi2 += std::pow((tr.samples[k].value - mean) / sd, 2);
  }
  // χ² / n ≈ 1 within ~5 standard errors (sd of χ²/n is sqrt(2/n) = 0.032).
  EXPECT_NEAR(chi2 / thetas.size(), 1.0, 0.16);
}

TEST(SimulateTrace, DeterministicPerSampleStreams) {
  const Spectrum s = spectrum_of(gaussian_pure_state(5.0, 30));
  InterferometerConfig cfg;
  cfg.noise.shot_noise = true;
  cfg.noise.seed = 5;
  std::vector<double> full;
  for (int k = 0; k < 61; ++k) full.push_back(k * kPi / 61);
  const auto a = simulate_trace(s, cfg, full, 0.0, 1);
  const auto b = simulate_trace(s, cfg, full, 0.0, 1);
  const std::vector<double> tail(full.begin() + 30, full.end());
  for (std::size_t k = 0; k < full.size(); ++k) EXPECT_EQ(a.samples[k].value, b.samples[k].value);
  const auto other_shot = simulate_trace(s, cfg, full, 0.0, 2);
  int same = 0;
  for (std::size_t k = 0; k < full.size(); ++k) same += a.samples[k].value == other_shot.samples[k].value;
  EXPECT_LT(same, 5);
  cfg.noise.seed = 6;
  const auto other_seed = simulate_trace(s, cfg, full, 0.0, 1);
  same = 0;
  for (std::size_t k = 0; k < full.size(); ++k) same += a.samples[k].value == other_seed.samples[k].value;
  EXPECT_LT(same, 5);
}

TEST(SimulateTrace, BackgroundAndDrift) {
  const Spectrum s(1, {0.0, 1.0, 0.0});
  InterferometerConfig cfg;
  cfg.noise.background = 10.0;
  cfg.noise.drift = 0.5;
  const std::vector<double> thetas{0.0, kPi / 2};
  const auto t0 = simulate_trace(s, cfg, thetas, kDeltaConstructive, 0);
  const auto t1 = simulate_trace(s, cfg, thetas, kDeltaConstructive, 1);
  EXPECT_NEAR(t0.samples[0].value, 11.0, 1e-14);
  EXPECT_NEAR(t0.samples[1].value, 11.25, 1e-14);
  EXPECT_NEAR(t1.samples[0].value, 11.5, 1e-14);
  EXPECT_NEAR(background_at(t1.meta, kPi / 2, 0.0), 10.75, 1e-14);
}

TEST(SimulateTrace, RejectsBadInput) {
  const Spectrum s(1, {0.0, 1.0, 0.0});
  InterferometerConfig cfg;
  EXPECT_THROW(simulate_trace(s, cfg, std::vector<double>{}, 0.0), std::invalid_argument);
  EXPECT_THROW(simulate_trace(s, cfg, std::vector<double>{0.2, 0.1}, 0.0), std::invalid_argument);
  EXPECT_THROW(simulate_trace(s, cfg, std::vector<double>{0.0, kPi}, 0.0), std::invalid_argument);
  cfg.k1_mag = 0.0;
  EXPECT_THROW(simulate_trace(s, cfg, std::vector<double>{0.0}, 0.0), std::invalid_argument);
  cfg.k1_mag = 0.5;
  cfg.noise.background = -1.0;
  EXPECT_THROW(simulate_trace(s, cfg, std::vector<double>{0.0}, 0.0), std::invalid_argument);
}
