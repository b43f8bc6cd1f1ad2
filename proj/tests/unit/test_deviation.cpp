#include <cmath>
#include <numbers>
#include <stdexcept>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oamspec/deviation.hpp"
#include "oamspec/error.hpp"
#include "oamspec/pipeline.hpp"
#include "oamspec/reconstruct.hpp"

using namespace oamspec;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMicroRad = 1e-6;

/// Mean over θ of exp(-a sin²θ) is e^{-a/2} I0(a/2), with a = (2 z tanΩ0 / w)².
double fractional_overlap_oracle(double omega0, double z, double w) {
  const double a = std::pow(2.0 * z * std::tan(omega0) / w, 2);
  return std::exp(-0.5 * a) * std::cyl_bessel_i(0.0, 0.5 * a);
}

double degraded_r_squared(const Spectrum& s, int N, double omega0, double waist) {
  InterferometerConfig cfg;
  cfg.polarization = PolarizationCurve::analytic(0.3);
  const auto grid = uniform_grid(plan_sampling(N).min_samples);
  auto shots = simulate_shots(s, cfg, grid, Protocol::two_shot);
  const DeviationConfig dev{omega0, 0.25, waist};
  for (auto& shot : shots) shot = degraded_trace(shot, dev);
  const auto r = reconstruct_shots(shots, cfg.polarization, N, Protocol::two_shot);
  return *r_squared(r.spectrum, s);
}

}  // namespace

TEST(BeamCenter, Examples) {
  const DeviationConfig cfg{0.01, 0.25, 0.4e-3};
  const double zt = 0.25 * std::tan(0.01);
  const auto c0 = beam_center(0.0, cfg);
  EXPECT_NEAR(c0.x, 0.0, 1e-18);
  EXPECT_NEAR(c0.y, 0.0, 1e-18);
  const auto c45 = beam_center(kPi / 4, cfg);
  EXPECT_NEAR(c45.x, -zt, 1e-15);
  EXPECT_NEAR(c45.y, zt, 1e-15);
  const auto c90 = beam_center(kPi / 2, cfg);
  EXPECT_NEAR(c90.x, -2.0 * zt, 1e-15);
  EXPECT_NEAR(c90.y, 0.0, 1e-15);
}

TEST(BeamCenter, TracesCircleThroughOrigin) {
  gen::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const DeviationConfig cfg{gen::uniform_real(rng, 0.0, 0.02), gen::uniform_real(rng, 0.05, 1.0), 1e-3};
    const double theta = gen::uniform_real(rng, -kPi, kPi);
    const double zt = cfg.z * std::tan(cfg.omega0);
    const auto c = beam_center(theta, cfg);
    EXPECT_NEAR(std::hypot(c.x + zt, c.y), zt, 1e-15);
    EXPECT_NEAR(std::hypot(c.x, c.y), 2.0 * zt * std::abs(std::sin(theta)), 1e-15);
  }
}

TEST(Overlap, NumericMatchesClosedForm) {
  gen::Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = gen::uniform_real(rng, 1e-4, 2e-3);
    const double d = gen::uniform_real(rng, 0.0, 4.0) * w;
    const auto num = overlap_percentage_numeric(d, w);
    EXPECT_FALSE(num.under_resolved);
    EXPECT_NEAR(num.percent, overlap_percentage_closed(d, w), 1e-6);
  }
  EXPECT_NEAR(overlap_percentage_closed(0.0, 1e-3), 100.0, 1e-14);
  EXPECT_NEAR(overlap_percentage_closed(1e-3, 1e-3), 100.0 / std::numbers::e, 1e-12);
  EXPECT_NEAR(overlap_percentage_numeric(1e-3, 1e-3).percent, 36.787944, 1e-6);
}

TEST(Overlap, UnderResolutionFlag) {
  EXPECT_FALSE(overlap_percentage_numeric(100.0 * 1e-3, 1e-3).under_resolved);
  EXPECT_TRUE(overlap_percentage_numeric(200.0 * 1e-3, 1e-3).under_resolved);
  EXPECT_TRUE(overlap_percentage_numeric(0.0, 1e-3, 32).under_resolved);
  const DeviationConfig narrow{10000 * kMicroRad, 0.25, 0.04e-3};
  EXPECT_THROW(overlap_percentage(kPi / 2, narrow), NumericError);
  EXPECT_NO_THROW(overlap_percentage(0.0, narrow));
}

TEST(Overlap, EvenAndPeriodicInTheta) {
  gen::Rng rng(15);
  const DeviationConfig cfg{3000 * kMicroRad, 0.25, 0.7e-3};
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = gen::uniform_real(rng, 0.0, kPi);
    const double a = overlap_percentage(theta, cfg);
    EXPECT_NEAR(a, overlap_percentage(-theta, cfg), 1e-9);
    EXPECT_NEAR(a, overlap_percentage(theta + kPi, cfg), 1e-9);
    EXPECT_LE(a, 100.0 + 1e-9);
  }
  EXPECT_NEAR(overlap_percentage(0.0, cfg), 100.0, 1e-9);
}

TEST(FractionalOverlap, MatchesBesselOracle) {
  for (double urad : {0.0, 30.0, 300.0, 1000.0, 3000.0, 10000.0}) {
    for (double w : {0.4e-3, 0.72e-3, 1.5e-3}) {
      const DeviationConfig cfg{urad * kMicroRad, 0.25, w};
      EXPECT_NEAR(average_fractional_overlap(cfg), fractional_overlap_oracle(cfg.omega0, cfg.z, w), 1e-7)
          << "omega0=" << urad << " w=" << w;
    }
  }
  EXPECT_DOUBLE_EQ(average_fractional_overlap({0.0, 0.25, 0.4e-3}), 1.0);
}

TEST(FractionalOverlap, DecreasesWithDeviation) {
  double prev = 1.0 + 1e-12;
  for (int i = 0; i < 20; ++i) {
    const double omega0 = 500.0 * i * kMicroRad;
    const double f = average_fractional_overlap({omega0, 0.25, 0.4e-3});
    EXPECT_LT(f, prev);
    EXPECT_GE(f, 0.0);
    prev = f;
  }
}

TEST(FitWaist, ReproducesTargets) {
  const double w = fit_detection_waist(0.0817, 10000 * kMicroRad, 0.25);
  EXPECT_NEAR(w, 0.7202e-3, 5e-7);
  EXPECT_NEAR(average_fractional_overlap({10000 * kMicroRad, 0.25, w}), 0.0817, 1e-6);
  EXPECT_GT(average_fractional_overlap({30.5 * kMicroRad, 0.25, w}), 0.999);
  EXPECT_THROW(fit_detection_waist(1.2, 0.01, 0.25), std::invalid_argument);
  EXPECT_THROW(fit_detection_waist(0.5, 0.0, 0.25), std::invalid_argument);
}

TEST(DegradedTrace, UnchangedWithoutDeviation) {
  InterferometerConfig cfg;
  cfg.noise.background = 2.0;
  cfg.noise.drift = 0.1;
  const auto s = spectrum_of(gaussian_pure_state(8.0, 50));
  const auto trace = simulate_trace(s, cfg, uniform_grid(101), 0.0, 1);
  const auto out = degraded_trace(trace, {0.0, 0.25, 0.4e-3});
  EXPECT_EQ(out.meta.label, "degraded");
  for (std::size_t k = 0; k < trace.samples.size(); ++k)
    EXPECT_NEAR(out.samples[k].value, trace.samples[k].value, 1e-14);
}

TEST(DegradedTrace, ScalesInterferenceTermOnly) {
  InterferometerConfig cfg;
  cfg.noise.background = 3.0;
  const auto s = spectrum_of(gaussian_pure_state(8.0, 50));
  const auto grid = uniform_grid(101);
  const DeviationConfig dev{1000 * kMicroRad, 0.25, 0.4e-3};
  const auto out = degraded_trace(simulate_trace(s, cfg, grid, 0.0, 0), dev);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double base = 3.0 + cfg.k1_mag * cfg.k1_mag + cfg.k2_mag * cfg.k2_mag;
    const double fringe = intensity_closed_form(s, cfg, grid[k], 0.0) + 3.0 - base;
    EXPECT_NEAR(out.samples[k].value, base + fringe * std::sqrt(overlap_percentage(grid[k], dev) / 100.0), 1e-12);
  }
}

TEST(DegradedTrace, AlignedRotatorKeepsReconstruction) {
  const double w = fit_detection_waist(0.0817, 10000 * kMicroRad, 0.25);
  const auto s = spectrum_of(gaussian_pure_state(8.0, 50));
  EXPECT_GE(degraded_r_squared(s, 50, 30 * kMicroRad, w), 99.9);
}

TEST(DegradedTrace, LargeDeviationBreaksComb) {
  const double w = fit_detection_waist(0.0817, 10000 * kMicroRad, 0.25);
  const auto comb = spectrum_of(comb_state(std::vector<int>{0, 4, -4, 8, -8}, 10));
  EXPECT_LT(degraded_r_squared(comb, 10, 10000 * kMicroRad, w), 50.0);
  EXPECT_GT(degraded_r_squared(comb, 10, 30 * kMicroRad, w), 99.9);
}
