#pragma once

#include <cstdint>

namespace sigdet {

/// Sum of k^{-p} for k = first..last (inclusive). Short ranges are summed
/// directly; long ranges switch to Euler-Maclaurin after a direct head, which
/// keeps the relative error near machine precision for every p >= 0.
double power_range_sum(double p, std::uint64_t first, std::uint64_t last);

/// Euler-Maclaurin evaluation of sum_{k=first}^{last} k^{-p} for integer
/// endpoints too large for std::uint64_t. Requires first >= 24 + 2p.
double power_range_sum_asymptotic(double p, double first, double last);

/// Sum of k^{-p} for k > m. Requires p > 1.
double power_tail_sum(double p, std::uint64_t m);

/// Neumaier compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace sigdet
