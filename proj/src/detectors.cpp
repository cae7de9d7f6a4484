#include "sigdet/detectors.hpp"

#include <algorithm>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "sigdet/errors.hpp"
#include "sigdet/parallel.hpp"
#include "sigdet/random.hpp"

namespace sigdet {

namespace {

void check_length(std::span<const double> y, std::size_t D) {
  if (D == 0) throw std::invalid_argument("statistic requires D >= 1");
  if (y.size() < D) {
    throw LengthMismatch("need " + std::to_string(D) + " observations, got " + std::to_string(y.size()));
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw InvalidAlpha("alpha must lie in (0, 1/2), got " + std::to_string(alpha));
  }
}

// (1 - alpha) empirical quantile of sum_k w_k (xi_k^2 - 1) / sqrt(sum_k w_k^2)
double null_quantile(std::span<const double> weights, double alpha, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("Monte Carlo calibration needs at least one replication");
  double norm2 = 0.0;
  for (double w : weights) norm2 += w * w;
  const double norm = std::sqrt(norm2);

  std::vector<double> values(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Xoshiro256 engine(replication_seed(seed, r));
      boost::random::normal_distribution<double> normal;
      double t = 0.0;
      for (double w : weights) {
        const double xi = normal(engine);
        t += w * (xi * xi - 1.0);
      }
      values[r] = t / norm;
    }
  });
  // smallest order statistic whose empirical exceedance rate is <= alpha
  const auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(n)));
  const std::size_t idx = std::clamp<std::size_t>(rank, 1, n) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(idx), values.end());
  return values[idx];
}

}  // namespace

const char* to_string(Detector d) noexcept { return d == Detector::Inverse ? "ip" : "dp"; }

void DetectorConfig::validate() const {
  check_alpha(alpha);
  // explicit constants only feed the constant arithmetic, where beta < 1 is enough
  const double beta_cap = std::holds_alternative<ExplicitConstants>(calibration) ? 1.0 : 0.5;
  if (!(beta > 0.0 && beta < beta_cap)) {
    throw std::invalid_argument("beta must lie in (0, " + std::string(beta_cap == 1.0 ? "1" : "1/2") +
                                "), got " + std::to_string(beta));
  }
  if (const auto* mc = std::get_if<MonteCarloCalibration>(&calibration); mc && mc->replications == 0) {
    throw std::invalid_argument("Monte Carlo calibration needs at least one replication");
  }
  if (const auto* ex = std::get_if<ExplicitConstants>(&calibration)) {
    if (!(ex->c1 > 0.0) || !(ex->c2 > 0.0)) throw std::invalid_argument("explicit constants must be > 0");
  }
}

double statistic_ip(std::span<const double> y, std::span<const double> inv_b2, double eps, std::size_t D) {
  check_length(y, D);
  if (inv_b2.size() < D) throw LengthMismatch("need " + std::to_string(D) + " weights");
  const double e2 = eps * eps;
  double t = 0.0;
  for (std::size_t i = 0; i < D; ++i) t += inv_b2[i] * (y[i] * y[i] - e2);
  return t;
}

double statistic_ip(std::span<const double> y, const OperatorSpectrum& spec, double eps, std::size_t D) {
  check_length(y, D);
  const auto w = spec.inverse_squares(D);
  return statistic_ip(y, w, eps, D);
}

double statistic_dp(std::span<const double> y, double eps, std::size_t D) {
  check_length(y, D);
  const double e2 = eps * eps;
  double s = 0.0;
  for (std::size_t i = 0; i < D; ++i) s += y[i] * y[i] - e2;
  return s;
}

double threshold_ip(double c1, double eps, const OperatorSpectrum& spec, std::size_t D) {
  return c1 * eps * eps * std::sqrt(spec.prefix_sum_inv4(D));
}

double threshold_dp(double c2, double eps, std::size_t D) {
  if (D == 0) throw std::invalid_argument("threshold requires D >= 1");
  return c2 * eps * eps * std::sqrt(static_cast<double>(D));
}

TestDecision test_ip(std::span<const double> y, const OperatorSpectrum& spec, double eps, std::size_t D,
                     double c1) {
  const double stat = statistic_ip(y, spec, eps, D);
  const double thr = threshold_ip(c1, eps, spec, D);
  return {stat > thr, stat, thr};
}

TestDecision test_dp(std::span<const double> y, double eps, std::size_t D, double c2) {
  const double stat = statistic_dp(y, eps, D);
  const double thr = threshold_dp(c2, eps, D);
  return {stat > thr, stat, thr};
}

double calibrate_c1(const CalibrationMode& mode, double alpha, const OperatorSpectrum& spec, std::size_t D) {
  check_alpha(alpha);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Chebyshev>) {
          return std::sqrt(2.0 / alpha);
        } else if constexpr (std::is_same_v<T, MonteCarloCalibration>) {
          const auto w = spec.inverse_squares(D);
          return null_quantile(w, alpha, m.replications, m.seed);
        } else {
          return m.c1;
        }
      },
      mode);
}

double calibrate_c2(const CalibrationMode& mode, double alpha, std::size_t D) {
  check_alpha(alpha);
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Chebyshev>) {
          return std::sqrt(2.0 / alpha);
        } else if constexpr (std::is_same_v<T, MonteCarloCalibration>) {
          const std::vector<double> w(D, 1.0);
          return null_quantile(w, alpha, m.replications, m.seed);
        } else {
          return m.c2;
        }
      },
      mode);
}

double calibrate_c1(const CalibrationMode& mode, double alpha, const OperatorSpectrum& spec,
                    const DesignSchedule& D, const EpsilonGrid& grid) {
  std::set<std::size_t> designs;
  for (double eps : grid.points()) designs.insert(D.at(eps));
  double c = 0.0;
  for (std::size_t d : designs) c = std::max(c, calibrate_c1(mode, alpha, spec, d));
  return c;
}

double calibrate_c2(const CalibrationMode& mode, double alpha, const DesignSchedule& D,
                    const EpsilonGrid& grid) {
  std::set<std::size_t> designs;
  for (double eps : grid.points()) designs.insert(D.at(eps));
  double c = 0.0;
  for (std::size_t d : designs) c = std::max(c, calibrate_c2(mode, alpha, d));
  return c;
}

double c_max(double c1, double beta) {
  if (!(c1 > 0.0)) throw std::invalid_argument("C1 must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  // beta C^2 - (2 beta C1 + 4) C + (beta C1^2 - 2) = 0; the larger root
  // q / beta has no cancellation since -b > 0.
  const double b = -(2.0 * beta * c1 + 4.0);
  const double c = beta * c1 * c1 - 2.0;
  const double disc = b * b - 4.0 * beta * c;
  const double q = 0.5 * (-b + std::sqrt(disc));
  const double root = q / beta;
  return std::max(c1, root);
}

double c_min(double c1, double beta) {
  if (!(c1 > 0.0)) throw std::invalid_argument("C1 must be > 0");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  const double x = -std::log1p(-beta);  // -log(1 - beta)
  const double inner = 2.0 * x + (c1 - 4.0 * std::sqrt(x));
  if (!(inner >= 0.0)) {
    throw ConstantTooSmall("C_min precondition violated: -2log(1-beta) + C1 - 4sqrt(-log(1-beta)) = " +
                           std::to_string(inner) + " < 0 (C1=" + std::to_string(c1) +
                           ", beta=" + std::to_string(beta) + ")");
  }
  const double outer = std::sqrt(inner) - std::sqrt(2.0 * x);
  if (!(outer > 0.0)) {
    throw ConstantTooSmall("C_min precondition violated: C1 - 4sqrt(-log(1-beta)) = " +
                           std::to_string(c1 - 4.0 * std::sqrt(x)) + " must be > 0 (C1=" +
                           std::to_string(c1) + ", beta=" + std::to_string(beta) + ")");
  }
  return std::sqrt(outer);
}

ConstantSet constants_from(double c1, double c2, double beta) {
  return {c1, c2, c_max(c1, beta), c_min(c1, beta), c_max(c2, beta), c_min(c2, beta)};
}

ConstantSet resolve_constants(const DetectorConfig& cfg, const OperatorSpectrum& spec,
                              const DesignSchedule& D, const EpsilonGrid& grid) {
  cfg.validate();
  const double c1 = calibrate_c1(cfg.calibration, cfg.alpha, spec, D, grid);
  const double c2 = calibrate_c2(cfg.calibration, cfg.alpha, D, grid);
  return constants_from(c1, c2, cfg.beta);
}

}  // namespace sigdet
