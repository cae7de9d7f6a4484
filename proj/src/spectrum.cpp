#include "sigdet/spectrum.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "sigdet/power_sum.hpp"

namespace sigdet {

struct OperatorSpectrum::Cache {
  std::shared_mutex mutex;
  // sums[D] = sum_{k<=D} b_k^{-4}; sums[0] = 0
  std::vector<double> sums{0.0};
  CompensatedSum running;
};

OperatorSpectrum::OperatorSpectrum(Family family)
    : family_(std::move(family)), cache_(std::make_shared<Cache>()) {}

OperatorSpectrum OperatorSpectrum::identity() { return OperatorSpectrum(Identity{}); }

OperatorSpectrum OperatorSpectrum::mildly_ill_posed(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("mildly ill-posed exponent t must be finite and >= 0");
  }
  return OperatorSpectrum(MildlyIllPosed{t});
}

OperatorSpectrum OperatorSpectrum::explicit_values(std::vector<double> prefix, double tail_exponent) {
  if (prefix.empty()) throw std::invalid_argument("explicit spectrum needs at least one value");
  if (!(tail_exponent >= 0.0) || !std::isfinite(tail_exponent)) {
    throw std::invalid_argument("explicit spectrum tail exponent must be finite and >= 0");
  }
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (!(prefix[i] > 0.0) || !std::isfinite(prefix[i])) {
      throw std::invalid_argument("spectrum values must be positive and finite (k=" +
                                  std::to_string(i + 1) + ")");
    }
    if (i > 0 && prefix[i] > prefix[i - 1]) {
      throw std::invalid_argument("spectrum must be non-increasing (k=" + std::to_string(i + 1) + ")");
    }
  }
  return OperatorSpectrum(Explicit{std::move(prefix), tail_exponent});
}

bool OperatorSpectrum::is_identity() const noexcept {
  if (std::holds_alternative<Identity>(family_)) return true;
  if (const auto* m = std::get_if<MildlyIllPosed>(&family_)) return m->t == 0.0;
  return false;
}

double OperatorSpectrum::value(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("spectrum index k must be >= 1");
  return std::visit(
      [k](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, MildlyIllPosed>) {
          return std::pow(static_cast<double>(k), -f.t);
        } else {
          const std::size_t m = f.prefix.size();
          if (k <= m) return f.prefix[k - 1];
          return f.prefix.back() *
                 std::pow(static_cast<double>(k) / static_cast<double>(m), -f.tail_exponent);
        }
      },
      family_);
}

double OperatorSpectrum::prefix_sum_inv4(std::size_t D) const {
  if (D == 0) throw std::invalid_argument("prefix_sum_inv4 requires D >= 1");
  if (std::holds_alternative<Identity>(family_)) return static_cast<double>(D);
  {
    std::shared_lock lock(cache_->mutex);
    if (D < cache_->sums.size()) return cache_->sums[D];
  }
  std::unique_lock lock(cache_->mutex);
  auto& sums = cache_->sums;
  sums.reserve(D + 1);
  for (std::size_t k = sums.size(); k <= D; ++k) {
    const double b = value(k);
    const double b2 = b * b;
    cache_->running.add(1.0 / (b2 * b2));
    const double s = cache_->running.value();
    if (!std::isfinite(s)) {
      throw std::overflow_error("sum of b_k^-4 overflows at k=" + std::to_string(k));
    }
    sums.push_back(s);
  }
  return sums[D];
}

std::vector<double> OperatorSpectrum::inverse_squares(std::size_t D) const {
  std::vector<double> out(D);
  for (std::size_t k = 1; k <= D; ++k) {
    const double b = value(k);
    out[k - 1] = 1.0 / (b * b);
  }
  return out;
}

OperatorSpectrum::PowerLawTail OperatorSpectrum::power_law_tail() const noexcept {
  return std::visit(
      [](const auto& f) -> PowerLawTail {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return {0, 1.0, 0.0};
        } else if constexpr (std::is_same_v<T, MildlyIllPosed>) {
          return {0, 1.0, f.t};
        } else {
          const std::size_t m = f.prefix.size();
          return {m, f.prefix.back() * std::pow(static_cast<double>(m), f.tail_exponent),
                  f.tail_exponent};
        }
      },
      family_);
}

}  // namespace sigdet
