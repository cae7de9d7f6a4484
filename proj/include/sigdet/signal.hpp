#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "sigdet/spectrum.hpp"

namespace sigdet {

/// A square-summable sequence theta = (theta_k)_{k>=1} from one of three
/// parametric families, multiplied by a positive scale and optionally with
/// its first n coordinates zeroed (decimation).
///
/// Energy functionals are evaluated exactly: prefix sums by direct summation,
/// tails by closed forms or Euler-Maclaurin summation with relative error
/// below 1e-10.
class Signal {
 public:
  struct FiniteSupport {
    std::vector<double> values;  // theta_1, theta_2, ...
    bool operator==(const FiniteSupport&) const = default;
  };
  /// theta_k = c k^{-a}, a > 1/2
  struct PowerDecay {
    double c;
    double a;
    bool operator==(const PowerDecay&) const = default;
  };
  /// theta_k = 2^{-j s} k^{-gamma} for k in [2^j, 2^{j+1}), j >= 0
  struct DyadicBlock {
    double s;
    double gamma;
    bool operator==(const DyadicBlock&) const = default;
  };
  using Family = std::variant<FiniteSupport, PowerDecay, DyadicBlock>;

  static Signal zero();
  static Signal finite_support(std::vector<double> values);
  static Signal power_decay(double c, double a);
  static Signal dyadic_block(double s, double gamma);
  /// A single nonzero coordinate theta_k = value.
  static Signal spike(std::size_t k, double value);

  const Family& family() const noexcept { return family_; }
  double scale() const noexcept { return scale_; }
  std::size_t zeroed_prefix() const noexcept { return zeroed_prefix_; }

  /// Same shape with every coordinate multiplied by rho (energies by rho^2).
  Signal scaled(double rho) const;
  /// theta^{(-n)}: coordinates 1..n set to zero.
  Signal decimated(std::size_t n) const;

  double coefficient(std::size_t k) const;

  /// sum_{k=1}^{D} theta_k^2
  double prefix_energy(std::size_t D) const;
  /// sum_{k=1}^{D} b_k^2 theta_k^2
  double weighted_prefix_energy(std::size_t D, const OperatorSpectrum& spec) const;
  /// sum_{k>D} theta_k^2
  double tail_energy(std::size_t D) const;
  /// sum_{k>D} b_k^2 theta_k^2
  double weighted_tail_energy(std::size_t D, const OperatorSpectrum& spec) const;

  double total_energy() const { return tail_energy(0); }
  double weighted_total_energy(const OperatorSpectrum& spec) const {
    return weighted_tail_energy(0, spec);
  }

  bool operator==(const Signal&) const = default;

 private:
  Signal(Family family, double scale, std::size_t zeroed_prefix);

  // sum_{k>m} k^{-extra} base_k^2 of the unscaled, unmasked family
  double family_tail(std::size_t m, double extra_exponent) const;

  Family family_;
  double scale_ = 1.0;
  std::size_t zeroed_prefix_ = 0;
};

/// The dyadic-block sequence theta_k = 2^{-js} k^{-gamma}. Throws NonSummable
/// unless 2s + 2gamma > 1.
Signal dyadic_block_signal(double s, double gamma);

/// theta^{(-n)}
Signal decimate(const Signal& sig, std::size_t n);

}  // namespace sigdet
