#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sigdet/maxisets.hpp"

using namespace sigdet;

namespace {

const EpsilonGrid kGrid = EpsilonGrid::standard();

double ip_noise(double eps, const OperatorSpectrum& spec, std::size_t D) {
  return eps * eps * std::sqrt(static_cast<double>(oracle::inv4_prefix(
                         std::get<OperatorSpectrum::MildlyIllPosed>(spec.family()).t, D)));
}

Signal random_signal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double scale = std::exp(std::log(1e-3) + u(rng) * std::log(1e3));
  if (u(rng) < 0.5) return Signal::power_decay(1.0, 0.55 + 2.0 * u(rng)).scaled(scale);
  return Signal::dyadic_block(0.1 + 1.5 * u(rng), 0.3 + u(rng)).scaled(scale);
}

}  // namespace

// =============================================================================
// Decimation
// =============================================================================

TEST(Decimate, Examples) {
  const auto sig = Signal::finite_support({3.0, 4.0, 5.0});
  EXPECT_EQ(decimate(sig, 0), sig);
  const auto d = decimate(sig, 2);
  EXPECT_EQ(d.coefficient(1), 0.0);
  EXPECT_EQ(d.coefficient(2), 0.0);
  EXPECT_EQ(d.coefficient(3), 5.0);
  EXPECT_EQ(decimate(decimate(sig, 1), 2), decimate(sig, 2));
}

// =============================================================================
// F and G
// =============================================================================

TEST(MemberF, ZeroAndSmallSignalsAreVacuous) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const auto r = RateSchedule::power_law(1.0, 0.25);
  const auto D = DesignSchedule::constant(10);
  EXPECT_TRUE(member_F(Signal::zero(), r, D, spec, 100.0, kGrid).member);
  // ||theta||^2 below the smallest r^2
  const double rmin = r.at(kGrid.points().back());
  EXPECT_TRUE(member_F(Signal::spike(50, 0.5 * rmin), r, D, spec, 100.0, kGrid).member);
}

TEST(MemberF, ConstructedSpikeWithSlack) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const auto D = DesignSchedule::constant(10);
  const double C = 3.0;
  // theta_1^2 = 2 C eps^2 sqrt(sum b^-4) at the largest eps, triggered everywhere via r tiny
  const double e0 = kGrid[0];
  const double theta2 = 2.0 * C * ip_noise(e0, spec, 10);
  const auto sig = Signal::spike(1, std::sqrt(theta2));
  const auto v = member_F(sig, RateSchedule::power_law(1e-6, 1.0), D, spec, C, kGrid);
  EXPECT_TRUE(v.member);
  EXPECT_TRUE(v.violations.empty());
  EXPECT_EQ(v.grid, kGrid.points());
}

TEST(MemberF, ViolationRecordsSides) {
  const auto spec = OperatorSpectrum::identity();
  const auto D = DesignSchedule::constant(4);
  // energy sits past D: prefix 0
  const auto sig = Signal::spike(5, 1.0);
  const auto v = member_F(sig, RateSchedule::power_law(0.5, 1.0), D, spec, 1.0, kGrid);
  ASSERT_FALSE(v.member);
  const auto first = v.first_violation();
  ASSERT_TRUE(first.has_value());
  EXPECT_EQ(first->epsilon, kGrid[0]);
  EXPECT_EQ(first->lhs, 0.0);
  EXPECT_DOUBLE_EQ(first->rhs, kGrid[0] * kGrid[0] * 2.0);
  EXPECT_EQ(v.violations.size(), kGrid.size());
}

TEST(MemberG, ConstructedSpikeAndIdentityCollapse) {
  const auto spec = OperatorSpectrum::identity();
  const auto D = DesignSchedule::constant(16);
  const double C = 2.0;
  const double e0 = kGrid[0];
  const auto spike = Signal::spike(1, std::sqrt(2.0 * C * e0 * e0 * 4.0));
  const auto r = RateSchedule::power_law(1e-6, 1.0);
  EXPECT_TRUE(member_G(spike, r, D, spec, C, kGrid).member);
  EXPECT_TRUE(member_G(Signal::zero(), r, D, spec, C, kGrid).member);

  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const auto sig = random_signal(rng);
    const auto rate = RateSchedule::power_law(0.3, 0.5);
    const auto f = member_F(sig, rate, D, spec, C, kGrid);
    const auto g = member_G(sig, rate, D, spec, C, kGrid);
    EXPECT_EQ(f.member, g.member);
    EXPECT_EQ(f.violations.size(), g.violations.size());
    EXPECT_EQ(member_F_dec(sig, rate, D, spec, C, kGrid).member, member_G_dec(sig, rate, D, spec, C, kGrid).member);
  }
}

TEST(MemberG, WeightedTriggerOption) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(2.0);
  const auto D = DesignSchedule::constant(2);
  // ||theta||^2 = 1 triggers, ||b theta||^2 = 1/81^2 does not
  const auto sig = Signal::spike(9, 1.0);
  const auto mu = RateSchedule::power_law(0.1, 0.01);
  EXPECT_FALSE(member_G(sig, mu, D, spec, 1.0, kGrid, GTrigger::PlainNorm).member);
  EXPECT_TRUE(member_G(sig, mu, D, spec, 1.0, kGrid, GTrigger::WeightedNorm).member);
}

// =============================================================================
// Decimation-robust sets and admissibility
// =============================================================================

TEST(MemberFDec, ZeroSignalIffAdmissible) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  const auto D = DesignSchedule::minimax(0.5, 0.5);
  const auto r = RateSchedule::minimax(0.5, 0.5);
  for (double C : {0.01, 0.5, 2.0, 50.0}) {
    EXPECT_EQ(member_F_dec(Signal::zero(), r, D, spec, C, kGrid).member,
              admissible_F(r, D, spec, C, kGrid).admissible)
        << C;
  }
}

TEST(MemberFDec, NonAdmissibleExcludesEverything) {
  const auto spec = OperatorSpectrum::identity();
  const auto D = DesignSchedule::constant(100);
  const auto r = RateSchedule::power_law(0.1, 1.0);
  ASSERT_FALSE(admissible_F(r, D, spec, 5.0, kGrid).admissible);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    EXPECT_FALSE(member_F_dec(random_signal(rng), r, D, spec, 5.0, kGrid).member);
  }
}

TEST(Admissibility, CrossoverConstant) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  const auto D = DesignSchedule::minimax(0.5, 0.5);
  const auto r = RateSchedule::minimax(0.5, 0.5);
  double crossover = INFINITY;
  for (double eps : kGrid.points()) {
    const double rate = std::pow(eps, 2.0 / 5.0);
    crossover = std::min(crossover, rate * rate / ip_noise(eps, spec, D.at(eps)));
  }
  EXPECT_TRUE(admissible_F(r, D, spec, crossover * 0.999, kGrid).admissible);
  EXPECT_FALSE(admissible_F(r, D, spec, crossover * 1.001, kGrid).admissible);
  EXPECT_NE(admissible_F(r, D, spec, 0.5, kGrid).admissible, admissible_F(r, D, spec, 2.0, kGrid).admissible);
}

TEST(Admissibility, SlackEntries) {
  const auto v = admissible_G(RateSchedule::power_law(1.0, 0.5), DesignSchedule::constant(4), 0.5,
                              EpsilonGrid({0.5}));
  ASSERT_EQ(v.slack.size(), 1u);
  EXPECT_DOUBLE_EQ(v.slack[0].slack, 0.5 - 0.5 * 0.25 * 2.0);
  EXPECT_TRUE(v.admissible);
}

TEST(Properties, MonotoneInConstant) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const auto D = DesignSchedule::minimax(1.0, 1.0);
  const auto r = RateSchedule::minimax(1.0, 1.0);
  std::mt19937_64 rng(12);
  for (int i = 0; i < 30; ++i) {
    const auto sig = random_signal(rng);
    if (member_F(sig, r, D, spec, 3.0, kGrid).member) EXPECT_TRUE(member_F(sig, r, D, spec, 1.0, kGrid).member);
    if (member_F_dec(sig, r, D, spec, 0.3, kGrid).member) {
      EXPECT_TRUE(member_F_dec(sig, r, D, spec, 0.1, kGrid).member);
    }
    if (member_G_dec(sig, r, D, spec, 0.3, kGrid).member) {
      EXPECT_TRUE(member_G_dec(sig, r, D, spec, 0.1, kGrid).member);
    }
  }
}

TEST(Properties, RateMonotone) {
  const auto spec = OperatorSpectrum::identity();
  const auto D = DesignSchedule::constant(8);
  const auto r = RateSchedule::power_law(0.5, 0.5);
  const auto r_big = RateSchedule::power_law(1.0, 0.5);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 30; ++i) {
    const auto sig = random_signal(rng);
    if (member_F(sig, r, D, spec, 2.0, kGrid).member) EXPECT_TRUE(member_F(sig, r_big, D, spec, 2.0, kGrid).member);
  }
}

TEST(Properties, DecimationStability) {
  const auto spec = OperatorSpectrum::mildly_ill_posed(0.5);
  const auto D = DesignSchedule::minimax(1.0, 0.5);
  const auto r = RateSchedule::power_law(1.0, 0.3);
  std::mt19937_64 rng(14);
  for (int i = 0; i < 20; ++i) {
    const auto sig = random_signal(rng);
    if (!member_F_dec(sig, r, D, spec, 0.2, kGrid).member) continue;
    for (std::size_t n : {1u, 5u, 100u}) {
      EXPECT_TRUE(member_F_dec(decimate(sig, n), r, D, spec, 0.2, kGrid).member);
    }
  }
}

// =============================================================================
// mu_from_r and the embedding condition
// =============================================================================

TEST(MuFromR, Examples) {
  const auto r = RateSchedule::power_law(0.2, 1e-9);
  EXPECT_NEAR(mu_from_r(r, DesignSchedule::constant(4), OperatorSpectrum::mildly_ill_posed(1.0)).at(0.5), 0.05,
              1e-9);
  const auto id = mu_from_r(r, DesignSchedule::constant(4), OperatorSpectrum::identity());
  for (double eps : kGrid.points()) EXPECT_EQ(id.at(eps), r.at(eps));
}

TEST(MuFromR, MinimaxCalibrationExponent) {
  const double s = 0.5, t = 1.0;
  const auto D = DesignSchedule::minimax(s, t);
  const auto mu = mu_from_r(RateSchedule::minimax(s, t), D, OperatorSpectrum::mildly_ill_posed(t));
  // mu_eps / eps^{4(s+t)/(1+4(s+t))} stays within the ceil() rounding of D
  for (double eps : kGrid.points()) {
    const double ratio = mu.at(eps) / std::pow(eps, 4.0 * (s + t) / (1.0 + 4.0 * (s + t)));
    EXPECT_GT(ratio, 0.49);
    EXPECT_LE(ratio, 1.0 + 1e-12);
  }
}

TEST(Embedding, Identity) {
  const auto id = OperatorSpectrum::identity();
  EXPECT_TRUE(check_embedding_condition(id, 2.0, 2.0, 1000).holds);
  EXPECT_TRUE(check_embedding_condition(id, 2.0, 1.0, 1000).holds);
  const auto bad = check_embedding_condition(id, 1.0, 1.5, 1000);
  EXPECT_FALSE(bad.holds);
  EXPECT_EQ(bad.first_violation, 1u);
  EXPECT_EQ(bad.lhs, 1.5);
  EXPECT_EQ(bad.rhs, 1.0);
}

TEST(Embedding, MildlyIllPosedEqualConstantsFailsAtTwo) {
  // k = 2, t = 1: b_2^2 sqrt(1 + 16) / sqrt(2) = sqrt(17) / (4 sqrt 2) < 1
  const auto spec = OperatorSpectrum::mildly_ill_posed(1.0);
  const auto chk = check_embedding_condition(spec, 1.0, 1.0, 1000);
  EXPECT_FALSE(chk.holds);
  EXPECT_EQ(chk.first_violation, 2u);
  EXPECT_NEAR(chk.rhs, std::sqrt(17.0) / 4.0, 1e-15);
}

TEST(Embedding, CriticalRatioMatchesSweep) {
  for (double t : {0.5, 1.0, 2.0}) {
    const auto spec = OperatorSpectrum::mildly_ill_posed(t);
    const std::size_t k_max = 20000;
    long double acc = 0.0L, best = INFINITY;
    for (std::size_t k = 1; k <= k_max; ++k) {
      const long double kk = static_cast<long double>(k);
      acc += std::pow(kk, 4.0L * t);
      best = std::min(best, std::pow(kk, -2.0L * t) * std::sqrt(acc) / std::sqrt(kk));
    }
    const auto chk = check_embedding_condition(spec, 1.0, 0.5, k_max);
    EXPECT_NEAR(chk.critical_ratio, static_cast<double>(best), 1e-12);
    EXPECT_GT(chk.critical_ratio, 1.0 / std::sqrt(4.0 * t + 1.0) - 1e-12);
    EXPECT_TRUE(check_embedding_condition(spec, 1.0, chk.critical_ratio * (1 - 1e-12), k_max).holds);
  }
}

// =============================================================================
// Besov sup-functional
// =============================================================================

TEST(Besov, ZeroSignal) {
  const auto b = besov_sup_functional(Signal::zero(), 1.0, nullptr, dyadic_levels());
  EXPECT_EQ(b.sup, 0.0);
  EXPECT_EQ(b.rows.size(), 21u);
}

TEST(Besov, PowerDecayLimit) {
  for (double s : {0.25, 0.5, 1.0}) {
    const auto sig = Signal::power_decay(1.0, s + 0.5);
    const auto b = besov_sup_functional(sig, 2.0 * s, nullptr, dyadic_levels());
    for (const auto& row : b.rows) {
      if (row.K >= 1024) EXPECT_NEAR(row.value * 2.0 * s, 1.0, 0.01) << "s=" << s << " K=" << row.K;
    }
  }
}

TEST(Besov, DyadicMatchesBruteForce) {
  const auto sig = Signal::dyadic_block(0.5, 1.0);
  const std::vector<std::size_t> Ks{1, 2, 1024, 65536};
  const auto b = besov_sup_functional(sig, 1.0, nullptr, Ks);
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    const long double want = Ks[i] * oracle::dyadic_tail(0.5L, 1.0L, 0.0L, Ks[i], 1'000'000);
    EXPECT_NEAR(b.rows[i].value / static_cast<double>(want), 1.0, 1e-10);
  }
}

TEST(Besov, DyadicLevels) {
  const auto l = dyadic_levels(3);
  EXPECT_EQ(l, (std::vector<std::size_t>{1, 2, 4, 8}));
}
