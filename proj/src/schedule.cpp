#include "sigdet/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sigdet {

namespace {

bool same_epsilon(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(a, b); }

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw std::invalid_argument("noise level must lie in (0,1), got " + std::to_string(eps));
  }
}

template <class Entries>
void check_table_order(const Entries& entries) {
  if (entries.empty()) throw std::invalid_argument("schedule table must not be empty");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    check_epsilon(entries[i].first);
    if (i > 0 && !(entries[i].first < entries[i - 1].first)) {
      throw std::invalid_argument("schedule table eps values must be strictly decreasing");
    }
  }
}

template <class Entries>
auto lookup(const Entries& entries, double eps) {
  for (const auto& [e, v] : entries) {
    if (same_epsilon(e, eps)) return v;
  }
  throw std::out_of_range("eps=" + std::to_string(eps) + " not present in schedule table");
}

}  // namespace

EpsilonGrid::EpsilonGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("epsilon grid must not be empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    check_epsilon(points_[i]);
    if (i > 0 && !(points_[i] < points_[i - 1])) {
      throw std::invalid_argument("epsilon grid must be strictly decreasing");
    }
  }
}

EpsilonGrid EpsilonGrid::geometric(double start, double ratio, std::size_t count) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("grid ratio must lie in (0,1)");
  std::vector<double> pts(count);
  for (std::size_t i = 0; i < count; ++i) pts[i] = start * std::pow(ratio, static_cast<double>(i));
  return EpsilonGrid(std::move(pts));
}

DesignSchedule DesignSchedule::constant(std::size_t D) {
  if (D == 0) throw std::invalid_argument("constant design requires D >= 1");
  return DesignSchedule(Constant{D});
}

DesignSchedule DesignSchedule::minimax(double s, double t) {
  if (!(s > 0.0) || !(t >= 0.0)) throw std::invalid_argument("minimax design requires s > 0, t >= 0");
  return DesignSchedule(MinimaxMIP{s, t});
}

DesignSchedule DesignSchedule::table(std::vector<std::pair<double, std::size_t>> entries) {
  check_table_order(entries);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].second == 0) throw std::invalid_argument("design table requires D >= 1");
    if (i > 0 && entries[i].second < entries[i - 1].second) {
      throw std::invalid_argument("design table D must be non-increasing in eps");
    }
  }
  return DesignSchedule(Table{std::move(entries)});
}

std::size_t DesignSchedule::at(double eps) const {
  check_epsilon(eps);
  const std::size_t d = std::visit(
      [eps](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return f.D;
        } else if constexpr (std::is_same_v<T, MinimaxMIP>) {
          const double exponent = -4.0 / (1.0 + 4.0 * (f.s + f.t));
          return static_cast<std::size_t>(std::ceil(std::pow(eps, exponent)));
        } else {
          return lookup(f.entries, eps);
        }
      },
      family_);
  return std::max<std::size_t>(d, 1);
}

RateSchedule RateSchedule::power_law(double c, double e) {
  if (!(c > 0.0) || !(e > 0.0)) throw std::invalid_argument("power-law rate requires c > 0, e > 0");
  return RateSchedule(PowerLaw{c, e});
}

RateSchedule RateSchedule::minimax(double s, double t) {
  if (!(s > 0.0) || !(t >= 0.0)) throw std::invalid_argument("minimax rate requires s > 0, t >= 0");
  return RateSchedule(MinimaxIP{s, t});
}

RateSchedule RateSchedule::table(std::vector<std::pair<double, double>> entries) {
  check_table_order(entries);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].second > 0.0)) throw std::invalid_argument("rate table requires r > 0");
    if (i > 0 && entries[i].second > entries[i - 1].second) {
      throw std::invalid_argument("rate table must be non-decreasing in eps");
    }
  }
  return RateSchedule(Table{std::move(entries)});
}

double RateSchedule::at(double eps) const {
  check_epsilon(eps);
  return std::visit(
      [eps](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, PowerLaw>) {
          return f.c * std::pow(eps, f.e);
        } else if constexpr (std::is_same_v<T, MinimaxIP>) {
          return std::pow(eps, 4.0 * f.s / (1.0 + 4.0 * (f.s + f.t)));
        } else if constexpr (std::is_same_v<T, Table>) {
          return lookup(f.entries, eps);
        } else {
          return f.spectrum.value(f.design.at(eps)) * f.base->at(eps);
        }
      },
      family_);
}

RateSchedule mu_from_r(const RateSchedule& r, const DesignSchedule& D, const OperatorSpectrum& spec) {
  return RateSchedule(RateSchedule::SpectralScaled{std::make_shared<const RateSchedule>(r), D, spec});
}

std::vector<ScheduleRow> evaluate_schedules(const DesignSchedule& D, const RateSchedule& r,
                                            const EpsilonGrid& grid) {
  std::vector<ScheduleRow> rows;
  rows.reserve(grid.size());
  for (double eps : grid.points()) rows.push_back({eps, D.at(eps), r.at(eps)});
  return rows;
}

}  // namespace sigdet
