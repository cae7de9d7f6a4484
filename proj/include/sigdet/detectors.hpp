#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

#include "sigdet/schedule.hpp"
#include "sigdet/spectrum.hpp"

namespace sigdet {

enum class Detector { Inverse, Direct };

const char* to_string(Detector d) noexcept;

/// Type-I constants bound through Chebyshev: P(T > C sd) <= 1/C^2 with
/// Var(T) = 2 eps^4 sum b^-4 under the null, hence C = sqrt(2/alpha).
struct Chebyshev {
  bool operator==(const Chebyshev&) const = default;
};
/// Empirical (1 - alpha) quantile of the normalized null statistic.
struct MonteCarloCalibration {
  std::size_t replications;
  std::uint64_t seed;
  bool operator==(const MonteCarloCalibration&) const = default;
};
struct ExplicitConstants {
  double c1;
  double c2;
  bool operator==(const ExplicitConstants&) const = default;
};
using CalibrationMode = std::variant<Chebyshev, MonteCarloCalibration, ExplicitConstants>;

struct DetectorConfig {
  double alpha = 0.05;
  double beta = 0.1;
  CalibrationMode calibration = Chebyshev{};

  /// Throws InvalidAlpha / std::invalid_argument unless alpha, beta in (0, 1/2);
  /// with explicit constants beta may range over (0, 1).
  void validate() const;
  bool operator==(const DetectorConfig&) const = default;
};

/// C1 = C_{alpha,1} and C2 = C_{alpha,2} fix the thresholds; Cmax/Cmin and
/// their primed versions bracket the maxisets of the two detectors.
struct ConstantSet {
  double c1;
  double c2;
  double cmax;
  double cmin;
  double cmax_p;
  double cmin_p;
  bool operator==(const ConstantSet&) const = default;
};

struct TestDecision {
  bool reject;
  double statistic;
  double threshold;
};

/// T_D = sum_{k<=D} b_k^{-2} (y_k^2 - eps^2)
double statistic_ip(std::span<const double> y, const OperatorSpectrum& spec, double eps, std::size_t D);
/// Same statistic with precomputed weights b_k^{-2}.
double statistic_ip(std::span<const double> y, std::span<const double> inv_b2, double eps, std::size_t D);
/// S_D = sum_{k<=D} (y_k^2 - eps^2)
double statistic_dp(std::span<const double> y, double eps, std::size_t D);

/// t = C1 eps^2 sqrt(sum_{k<=D} b_k^-4)
double threshold_ip(double c1, double eps, const OperatorSpectrum& spec, std::size_t D);
/// s = C2 eps^2 sqrt(D)
double threshold_dp(double c2, double eps, std::size_t D);

TestDecision test_ip(std::span<const double> y, const OperatorSpectrum& spec, double eps, std::size_t D,
                     double c1);
TestDecision test_dp(std::span<const double> y, double eps, std::size_t D, double c2);

double calibrate_c1(const CalibrationMode& mode, double alpha, const OperatorSpectrum& spec, std::size_t D);
double calibrate_c2(const CalibrationMode& mode, double alpha, std::size_t D);
/// Schedule form: calibrates at every distinct D_eps on the grid and keeps
/// the largest constant, so the level holds at every grid point.
double calibrate_c1(const CalibrationMode& mode, double alpha, const OperatorSpectrum& spec,
                    const DesignSchedule& D, const EpsilonGrid& grid);
double calibrate_c2(const CalibrationMode& mode, double alpha, const DesignSchedule& D,
                    const EpsilonGrid& grid);

/// max(C1, C*) where C* > C1 solves (2 + 4C) / (C - C1)^2 = beta.
double c_max(double c1, double beta);

/// (sqrt(-2 log(1-beta) + (C1 - 4 sqrt(-log(1-beta)))) - sqrt(-2 log(1-beta)))^{1/2}
/// Throws ConstantTooSmall when either square root has a non-positive argument.
double c_min(double c1, double beta);

ConstantSet resolve_constants(const DetectorConfig& cfg, const OperatorSpectrum& spec,
                              const DesignSchedule& D, const EpsilonGrid& grid);
ConstantSet constants_from(double c1, double c2, double beta);

}  // namespace sigdet
