#include <gtest/gtest.h>

#include <cmath>

#include "sigdet/errors.hpp"
#include "sigdet/montecarlo.hpp"
#include "sigdet/parallel.hpp"

using namespace sigdet;

namespace {

ConstantSet chebyshev_constants(double alpha = 0.05, double beta = 0.1) {
  const double c = std::sqrt(2.0 / alpha);
  return constants_from(c, c, beta);
}

}  // namespace

TEST(McEstimate, FromCount) {
  const auto e = McEstimate::from_count(25, 100, 9);
  EXPECT_EQ(e.p_hat, 0.25);
  EXPECT_DOUBLE_EQ(e.se, std::sqrt(0.25 * 0.75 / 100.0));
  EXPECT_EQ(e.master_seed, 9u);
  EXPECT_EQ(McEstimate::from_count(0, 10, 0).se, 0.0);
}

TEST(MonteCarlo, TypeOneBelowAlphaWithChebyshev) {
  for (double alpha : {0.05, 0.1}) {
    const double c = std::sqrt(2.0 / alpha);
    const auto e = estimate_type1(Detector::Inverse, OperatorSpectrum::mildly_ill_posed(1.0), 0.1, 10, c, 20000, 1);
    EXPECT_LE(e.p_hat, alpha);
  }
}

TEST(MonteCarlo, NullTypeTwoIsAcceptanceRate) {
  const auto spec = OperatorSpectrum::identity();
  const auto t1 = estimate_type1(Detector::Direct, spec, 0.1, 20, 1.0, 5000, 3);
  const auto t2 = estimate_type2(Detector::Direct, Signal::zero(), spec, 0.1, 20, 1.0, 5000, 3);
  EXPECT_EQ(t1.count + t2.count, 5000u);
}

TEST(MonteCarlo, IdentityDetectorsAgreeDrawForDraw) {
  const auto c = simulate_detectors(Signal::power_decay(0.3, 1.0), OperatorSpectrum::identity(), 0.1, 30, 2.0,
                                    2.0, 4000, 8);
  EXPECT_EQ(c.ip_rejections, c.dp_rejections);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResults) {
  const auto sig = Signal::dyadic_block(0.5, 1.0).scaled(0.2);
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  set_worker_count(1);
  const auto a = simulate_detectors(sig, spec, 0.1, 40, 3.0, 3.0, 5000, 77);
  set_worker_count(5);
  const auto b = simulate_detectors(sig, spec, 0.1, 40, 3.0, 3.0, 5000, 77);
  set_worker_count(0);
  EXPECT_EQ(a.ip_rejections, b.ip_rejections);
  EXPECT_EQ(a.dp_rejections, b.dp_rejections);
}

TEST(MonteCarlo, RejectsBadArguments) {
  const auto spec = OperatorSpectrum::identity();
  EXPECT_THROW(estimate_type1(Detector::Inverse, spec, 0.1, 10, 1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(estimate_type1(Detector::Inverse, spec, 1.5, 10, 1.0, 10, 1), std::invalid_argument);
}

// -----------------------------------------------------------------------------
// Bound checks
// -----------------------------------------------------------------------------

TEST(Bounds, Prop61DefaultsPass) {
  const auto c = chebyshev_constants();
  for (auto which : {BoundCase::Upper, BoundCase::Lower}) {
    const auto r = verify_prop61(which, OperatorSpectrum::identity(), 0.1, 100, c, 0.1, 0.05, 20000, 11);
    EXPECT_TRUE(r.pass) << to_string(which) << " type2=" << r.type2.p_hat;
    EXPECT_EQ(r.spike_k, 100u);
  }
}

TEST(Bounds, Prop61EnergyLevel) {
  const auto c = chebyshev_constants();
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const auto r = verify_prop61(BoundCase::Upper, spec, 0.1, 10, c, 0.1, 0.05, 1000, 2);
  EXPECT_DOUBLE_EQ(r.energy, 1.05 * c.cmax * 0.01 * std::sqrt(spec.prefix_sum_inv4(10)));
}

TEST(Bounds, Prop62Pass) {
  const auto c = chebyshev_constants();
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  for (auto which : {BoundCase::Upper, BoundCase::Lower}) {
    const auto r = verify_prop62(which, spec, 0.1, 100, c, 0.1, 0.05, 20000, 12);
    EXPECT_TRUE(r.pass) << to_string(which) << " type2=" << r.type2.p_hat;
    EXPECT_DOUBLE_EQ(r.noise_level, 0.01 * 10.0);
  }
}

TEST(Bounds, MarginConstraints) {
  const auto c = chebyshev_constants();
  const auto id = OperatorSpectrum::identity();
  EXPECT_THROW(verify_prop61(BoundCase::Upper, id, 0.1, 10, c, 0.1, -0.1, 100, 1), ConstraintUnsatisfiable);
  EXPECT_THROW(verify_prop62(BoundCase::Lower, id, 0.1, 10, c, 0.1, 1.0, 100, 1), ConstraintUnsatisfiable);
  EXPECT_NO_THROW(verify_prop61(BoundCase::Upper, id, 0.1, 10, c, 0.1, 2.0, 100, 1));
}

// -----------------------------------------------------------------------------
// Sandwich and decimation witness
// -----------------------------------------------------------------------------

TEST(Sandwich, MemberSignalIsDetected) {
  const auto c = chebyshev_constants();
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  const auto D = DesignSchedule::constant(8);
  const auto r = RateSchedule::power_law(0.5, 0.5);
  const auto sig = Signal::power_decay(2.0, 1.5);
  const auto rep = verify_maxiset_sandwich(Detector::Inverse, sig, r, D, spec, c, 0.1, EpsilonGrid::standard(),
                                           5000, 4);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.rows.size(), 20u);
  bool asserted = false;
  for (const auto& row : rep.rows) {
    if (row.type2) asserted = true;
    if (!row.triggered) EXPECT_FALSE(row.type2.has_value());
  }
  EXPECT_TRUE(asserted);
}

TEST(Sandwich, DecimationWitnessIsMissed) {
  const auto c = chebyshev_constants();
  const auto spec = OperatorSpectrum::identity();
  const auto D = DesignSchedule::constant(4);
  const auto r = RateSchedule::power_law(0.1, 1.0);
  const auto sig = Signal::power_decay(1.0, 0.6);
  const auto grid = EpsilonGrid::standard();
  const auto w = decimation_witness(Detector::Inverse, sig, r, D, spec, c, grid);
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->signal.prefix_energy(w->D), 0.0);
  EXPECT_GE(w->signal.total_energy(), r.at(w->epsilon) * r.at(w->epsilon));
  const auto est = estimate_type2(Detector::Inverse, w->signal, spec, w->epsilon, w->D, c.c1, 5000, 5);
  EXPECT_GT(est.p_hat, 0.1 - 3.0 * est.se);
}

TEST(Sandwich, NoWitnessForFiniteSupportInsidePrefix) {
  const auto c = chebyshev_constants();
  const auto w = decimation_witness(Detector::Direct, Signal::finite_support({1.0, 1.0}),
                                    RateSchedule::power_law(0.1, 1.0), DesignSchedule::constant(4),
                                    OperatorSpectrum::identity(), c, EpsilonGrid::standard());
  EXPECT_FALSE(w.has_value());
}

// -----------------------------------------------------------------------------
// Power curves and the IP / DP comparison
// -----------------------------------------------------------------------------

TEST(Power, CurveShape) {
  const auto curve = power_curve(Detector::Direct, Signal::spike(1, 1.0), OperatorSpectrum::identity(), 0.1, 10,
                                 std::sqrt(40.0), {4.0, 0.0, 1.0}, 0.1, 4000, 6);
  ASSERT_EQ(curve.rows.size(), 3u);
  EXPECT_EQ(curve.rows[0].rho, 0.0);
  EXPECT_EQ(curve.rows[2].rho, 4.0);
  EXPECT_LE(curve.rows[0].reject.p_hat, curve.rows[1].reject.p_hat);
  ASSERT_TRUE(curve.separation_rho.has_value());
  EXPECT_TRUE(curve.flagged_drops.empty());
  EXPECT_THROW(power_curve(Detector::Direct, Signal::zero(), OperatorSpectrum::identity(), 0.1, 10, 1.0, {}, 0.1,
                           10, 1),
               std::invalid_argument);
}

TEST(Power, LowFrequencySpikeFavorsDirect) {
  // at k = 1, b_1 = 1: the direct threshold sqrt(D) is far below sqrt(sum b^-4)
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const double c = std::sqrt(40.0);
  const double ip = spike_separation_energy(Detector::Inverse, spec, 0.1, 20, 1, c, 0.1, 4000, 7);
  const double dp = spike_separation_energy(Detector::Direct, spec, 0.1, 20, 1, c, 0.1, 4000, 7);
  EXPECT_LT(dp, ip);
}

TEST(Power, SpikeAtCutoffFavorsInverse) {
  // at k = D the direct statistic sees b_D^2 theta_D^2 only
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const double c = std::sqrt(40.0);
  const double ip = spike_separation_energy(Detector::Inverse, spec, 0.1, 20, 20, c, 0.1, 4000, 7);
  const double dp = spike_separation_energy(Detector::Direct, spec, 0.1, 20, 20, c, 0.1, 4000, 7);
  EXPECT_LT(ip, dp);
}

TEST(Compare, ReportLayout) {
  const double s = 0.5, t = 1.0;
  const auto c = chebyshev_constants();
  const auto grid = EpsilonGrid::geometric(0.5, 0.7, 12);
  const auto rep = compare_ip_dp(OperatorSpectrum::mildly_ill_posed(t), s, t, grid, c, 2000, 10);
  EXPECT_EQ(rep.design.size(), 12u);
  EXPECT_EQ(rep.mu.size(), 12u);
  ASSERT_EQ(rep.candidates.size(), 2u);
  EXPECT_EQ(rep.candidates[0].ip_power.size(), 12u);
  EXPECT_EQ(rep.probe.k, 1u);
  EXPECT_LT(rep.probe.dp_separation, rep.probe.ip_separation);
  EXPECT_TRUE(rep.probe.dp_detects_ip_misses);
}
