#include "sigdet/power_sum.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigdet/errors.hpp"

namespace sigdet {

namespace {

// B_{2j} / (2j)! for j = 1..7
constexpr std::array<double, 7> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
};

// Smallest start index at which the truncated Euler-Maclaurin series is
// accurate to ~1e-16 relative for exponent p.
std::uint64_t em_start(double p) {
  return static_cast<std::uint64_t>(std::ceil(24.0 + 2.0 * p));
}

double direct_sum(double p, std::uint64_t first, std::uint64_t last) {
  // smallest terms first
  CompensatedSum acc;
  for (std::uint64_t k = last; k >= first; --k) {
    acc.add(std::pow(static_cast<double>(k), -p));
    if (k == first) break;
  }
  return acc.value();
}

// sum_j B_{2j}/(2j)! f^{(2j-1)}(x) for f(x) = x^{-p}
double em_corrections(double p, double x) {
  // f^{(r)}(x) = (-1)^r p (p+1) ... (p+r-1) x^{-p-r}
  double total = 0.0;
  double rising = p;  // p (p+1) ... (p+r-1) with r = 1
  double xpow = std::pow(x, -p - 1.0);
  const double inv_x2 = 1.0 / (x * x);
  for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
    const double derivative = -rising * xpow;  // odd order: sign (-1)^r = -1
    total += kBernoulliOverFactorial[j] * derivative;
    rising *= (p + 2.0 * j + 1.0) * (p + 2.0 * j + 2.0);
    xpow *= inv_x2;
  }
  return total;
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::fabs(sum_) >= std::fabs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

double power_range_sum(double p, std::uint64_t first, std::uint64_t last) {
  if (first == 0) first = 1;
  if (last < first) return 0.0;
  const std::uint64_t start = std::max(first, em_start(p));
  if (last - first < 64 || last <= start + 64) return direct_sum(p, first, last);

  // head [first, start) directly, [start, last] by Euler-Maclaurin
  const double head = start > first ? direct_sum(p, first, start - 1) : 0.0;
  return head + power_range_sum_asymptotic(p, static_cast<double>(start), static_cast<double>(last));
}

double power_range_sum_asymptotic(double p, double a, double b) {
  if (a < static_cast<double>(em_start(p))) {
    throw std::invalid_argument("asymptotic power sum needs a larger start index");
  }
  if (b < a) return 0.0;
  double integral;
  if (p == 1.0) {
    integral = std::log(b / a);
  } else {
    // (b^{1-p} - a^{1-p}) / (1-p) without cancellation
    integral = std::pow(a, 1.0 - p) * std::expm1((1.0 - p) * std::log(b / a)) / (1.0 - p);
  }
  const double ends = 0.5 * (std::pow(a, -p) + std::pow(b, -p));
  const double corr = em_corrections(p, b) - em_corrections(p, a);
  return integral + ends + corr;
}

double power_tail_sum(double p, std::uint64_t m) {
  if (!(p > 1.0)) throw NonSummable("sum of k^-p diverges for p <= 1");
  const std::uint64_t first = m + 1;
  const std::uint64_t start = std::max(first, em_start(p));
  const double head = start > first ? direct_sum(p, first, start - 1) : 0.0;
  const double a = static_cast<double>(start);
  const double integral = std::pow(a, 1.0 - p) / (p - 1.0);
  const double ends = 0.5 * std::pow(a, -p);
  return head + integral + ends - em_corrections(p, a);
}

}  // namespace sigdet
