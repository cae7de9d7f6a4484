#include "sigdet/signal.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sigdet/errors.hpp"
#include "sigdet/power_sum.hpp"

namespace sigdet {

namespace {

constexpr double kTailTolerance = 1e-13;
constexpr std::size_t kMaxBlock = 1000;

std::size_t block_index(std::size_t k) {
  return static_cast<std::size_t>(std::bit_width(k)) - 1;  // floor(log2 k)
}

}  // namespace

Signal::Signal(Family family, double scale, std::size_t zeroed_prefix)
    : family_(std::move(family)), scale_(scale), zeroed_prefix_(zeroed_prefix) {}

Signal Signal::zero() { return Signal(FiniteSupport{}, 1.0, 0); }

Signal Signal::finite_support(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("signal values must be finite");
  }
  return Signal(FiniteSupport{std::move(values)}, 1.0, 0);
}

Signal Signal::power_decay(double c, double a) {
  if (!std::isfinite(c)) throw std::invalid_argument("power decay amplitude must be finite");
  if (!(a > 0.5)) throw NonSummable("power decay requires a > 1/2, got a=" + std::to_string(a));
  return Signal(PowerDecay{c, a}, 1.0, 0);
}

Signal Signal::dyadic_block(double s, double gamma) {
  if (!(s > 0.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("dyadic block requires s > 0 and gamma > 0");
  }
  if (!(2.0 * s + 2.0 * gamma > 1.0)) {
    throw NonSummable("dyadic block requires 2s + 2gamma > 1");
  }
  return Signal(DyadicBlock{s, gamma}, 1.0, 0);
}

Signal Signal::spike(std::size_t k, double value) {
  if (k == 0) throw std::invalid_argument("spike index must be >= 1");
  std::vector<double> values(k, 0.0);
  values.back() = value;
  return finite_support(std::move(values));
}

Signal Signal::scaled(double rho) const {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("scale must be finite and >= 0");
  return Signal(family_, scale_ * rho, zeroed_prefix_);
}

Signal Signal::decimated(std::size_t n) const {
  return Signal(family_, scale_, std::max(zeroed_prefix_, n));
}

double Signal::coefficient(std::size_t k) const {
  if (k == 0) throw std::invalid_argument("signal index k must be >= 1");
  if (k <= zeroed_prefix_) return 0.0;
  const double base = std::visit(
      [k](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          return k <= f.values.size() ? f.values[k - 1] : 0.0;
        } else if constexpr (std::is_same_v<T, PowerDecay>) {
          return f.c * std::pow(static_cast<double>(k), -f.a);
        } else {
          const double j = static_cast<double>(block_index(k));
          return std::exp2(-j * f.s) * std::pow(static_cast<double>(k), -f.gamma);
        }
      },
      family_);
  return scale_ * base;
}

double Signal::prefix_energy(std::size_t D) const {
  CompensatedSum acc;
  for (std::size_t k = zeroed_prefix_ + 1; k <= D; ++k) {
    const double v = coefficient(k);
    acc.add(v * v);
  }
  return acc.value();
}

double Signal::weighted_prefix_energy(std::size_t D, const OperatorSpectrum& spec) const {
  CompensatedSum acc;
  for (std::size_t k = zeroed_prefix_ + 1; k <= D; ++k) {
    const double v = spec.value(k) * coefficient(k);
    acc.add(v * v);
  }
  return acc.value();
}

double Signal::tail_energy(std::size_t D) const {
  const std::size_t m = std::max(D, zeroed_prefix_);
  return scale_ * scale_ * family_tail(m, 0.0);
}

double Signal::weighted_tail_energy(std::size_t D, const OperatorSpectrum& spec) const {
  const std::size_t m = std::max(D, zeroed_prefix_);
  if (const auto* fs = std::get_if<FiniteSupport>(&family_)) {
    CompensatedSum acc;
    for (std::size_t k = m + 1; k <= fs->values.size(); ++k) {
      const double v = spec.value(k) * scale_ * fs->values[k - 1];
      acc.add(v * v);
    }
    return acc.value();
  }
  const auto tail = spec.power_law_tail();
  // explicit part of the spectrum, then the power-law extension
  CompensatedSum head;
  for (std::size_t k = m + 1; k <= tail.start; ++k) {
    const double v = spec.value(k) * coefficient(k);
    head.add(v * v);
  }
  const std::size_t from = std::max(m, tail.start);
  const double amp = tail.coefficient * scale_;
  return head.value() + amp * amp * family_tail(from, 2.0 * tail.exponent);
}

double Signal::family_tail(std::size_t m, double extra) const {
  return std::visit(
      [m, extra](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, FiniteSupport>) {
          CompensatedSum acc;
          for (std::size_t k = m + 1; k <= f.values.size(); ++k) {
            acc.add(std::pow(static_cast<double>(k), -extra) * f.values[k - 1] * f.values[k - 1]);
          }
          return acc.value();
        } else if constexpr (std::is_same_v<T, PowerDecay>) {
          return f.c * f.c * power_tail_sum(2.0 * f.a + extra, m);
        } else {
          const double p = 2.0 * f.gamma + extra;
          const double decay = 2.0 * f.s + p - 1.0;  // per-block log2 decay rate
          if (!(decay > 0.0)) throw NonSummable("dyadic block tail diverges");
          const std::size_t first = m + 1;
          const double q = std::exp2(-decay);
          CompensatedSum acc;
          for (std::size_t j = block_index(first);; ++j) {
            if (j > kMaxBlock) {
              throw NonSummable("dyadic block tail converges too slowly to evaluate");
            }
            const double weight = std::exp2(-2.0 * f.s * static_cast<double>(j));
            double block;
            if (j < 62) {
              const std::uint64_t lo = std::uint64_t{1} << j;
              block = power_range_sum(p, std::max<std::uint64_t>(lo, first), (lo << 1) - 1);
            } else {
              const double lo = std::ldexp(1.0, static_cast<int>(j));
              block = power_range_sum_asymptotic(p, lo, 2.0 * lo - 1.0);
            }
            acc.add(weight * block);
            // blocks after j contribute at most sum_{i>j} 2^{-i * decay}
            const double bound = std::exp2(-decay * static_cast<double>(j + 1)) / (1.0 - q);
            if (bound <= kTailTolerance * acc.value() || bound < 1e-300) return acc.value();
          }
        }
      },
      family_);
}

Signal dyadic_block_signal(double s, double gamma) { return Signal::dyadic_block(s, gamma); }

Signal decimate(const Signal& sig, std::size_t n) { return sig.decimated(n); }

}  // namespace sigdet
