#pragma once

#include <cstddef>
#include <memory>
#include <variant>
#include <vector>

namespace sigdet {

/// Eigenvalue sequence (b_k)_{k>=1} of the operator in the sequence space
/// model y_k = b_k theta_k + eps xi_k.
///
/// Instances are immutable. Prefix sums of b_k^{-4} are cached behind a shared
/// lock so copies may be queried concurrently.
class OperatorSpectrum {
 public:
  struct Identity {
    bool operator==(const Identity&) const = default;
  };
  /// b_k = k^{-t}
  struct MildlyIllPosed {
    double t;
    bool operator==(const MildlyIllPosed&) const = default;
  };
  /// b_1..b_m given explicitly, then b_k = b_m (k/m)^{-tail_exponent}.
  struct Explicit {
    std::vector<double> prefix;
    double tail_exponent;
    bool operator==(const Explicit&) const = default;
  };
  using Family = std::variant<Identity, MildlyIllPosed, Explicit>;

  /// For k > start, b_k = coefficient * k^{-exponent}.
  struct PowerLawTail {
    std::size_t start;
    double coefficient;
    double exponent;
  };

  static OperatorSpectrum identity();
  static OperatorSpectrum mildly_ill_posed(double t);
  static OperatorSpectrum explicit_values(std::vector<double> prefix, double tail_exponent);

  const Family& family() const noexcept { return family_; }
  bool is_identity() const noexcept;

  /// b_k, k >= 1.
  double value(std::size_t k) const;

  /// sum_{k=1}^{D} b_k^{-4}. Throws std::overflow_error if the sum is not
  /// representable.
  double prefix_sum_inv4(std::size_t D) const;

  /// b_k^{-2} for k = 1..D (index 0 holds k = 1).
  std::vector<double> inverse_squares(std::size_t D) const;

  PowerLawTail power_law_tail() const noexcept;

  bool operator==(const OperatorSpectrum& other) const { return family_ == other.family_; }

 private:
  explicit OperatorSpectrum(Family family);

  struct Cache;
  Family family_;
  std::shared_ptr<Cache> cache_;
};

}  // namespace sigdet
