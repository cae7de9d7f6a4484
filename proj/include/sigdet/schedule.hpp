#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <variant>
#include <vector>

#include "sigdet/spectrum.hpp"

namespace sigdet {

/// Finite, strictly decreasing set of noise levels in (0,1) on which the
/// "for all eps" quantifiers are checked.
class EpsilonGrid {
 public:
  explicit EpsilonGrid(std::vector<double> points);

  /// eps_i = start * ratio^i, i = 0..count-1
  static EpsilonGrid geometric(double start, double ratio, std::size_t count);
  /// 0.5 * 0.8^i, 20 points
  static EpsilonGrid standard() { return geometric(0.5, 0.8, 20); }

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const EpsilonGrid&) const = default;

 private:
  std::vector<double> points_;
};

/// eps -> D_eps, the number of frequencies used by the statistics.
class DesignSchedule {
 public:
  struct Constant {
    std::size_t D;
    bool operator==(const Constant&) const = default;
  };
  /// D_eps = ceil(eps^{-4 / (1 + 4(s + t))})
  struct MinimaxMIP {
    double s;
    double t;
    bool operator==(const MinimaxMIP&) const = default;
  };
  struct Table {
    std::vector<std::pair<double, std::size_t>> entries;  // (eps, D), eps decreasing
    bool operator==(const Table&) const = default;
  };
  using Family = std::variant<Constant, MinimaxMIP, Table>;

  static DesignSchedule constant(std::size_t D);
  static DesignSchedule minimax(double s, double t);
  static DesignSchedule table(std::vector<std::pair<double, std::size_t>> entries);

  const Family& family() const noexcept { return family_; }

  /// D_eps, clamped to >= 1. Table schedules throw std::out_of_range for an
  /// eps not listed.
  std::size_t at(double eps) const;

  bool operator==(const DesignSchedule&) const = default;

 private:
  explicit DesignSchedule(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// eps -> detection rate r_eps (or mu_eps).
class RateSchedule {
 public:
  /// r_eps = c eps^e
  struct PowerLaw {
    double c;
    double e;
    bool operator==(const PowerLaw&) const = default;
  };
  /// r_eps = eps^{4s / (1 + 4(s + t))}
  struct MinimaxIP {
    double s;
    double t;
    bool operator==(const MinimaxIP&) const = default;
  };
  struct Table {
    std::vector<std::pair<double, double>> entries;  // (eps, r), eps decreasing
    bool operator==(const Table&) const = default;
  };
  /// mu_eps = b_{D_eps} r_eps
  struct SpectralScaled {
    std::shared_ptr<const RateSchedule> base;
    DesignSchedule design;
    OperatorSpectrum spectrum;
    bool operator==(const SpectralScaled& o) const {
      return *base == *o.base && design == o.design && spectrum == o.spectrum;
    }
  };
  using Family = std::variant<PowerLaw, MinimaxIP, Table, SpectralScaled>;

  static RateSchedule power_law(double c, double e);
  static RateSchedule minimax(double s, double t);
  static RateSchedule table(std::vector<std::pair<double, double>> entries);

  const Family& family() const noexcept { return family_; }
  double at(double eps) const;

  bool operator==(const RateSchedule&) const = default;

 private:
  friend RateSchedule mu_from_r(const RateSchedule&, const DesignSchedule&, const OperatorSpectrum&);
  explicit RateSchedule(Family f) : family_(std::move(f)) {}
  Family family_;
};

/// The direct-problem rate mu_eps = b_{D_eps} r_eps matched to r.
RateSchedule mu_from_r(const RateSchedule& r, const DesignSchedule& D, const OperatorSpectrum& spec);

struct ScheduleRow {
  double epsilon;
  std::size_t D;
  double rate;
};

std::vector<ScheduleRow> evaluate_schedules(const DesignSchedule& D, const RateSchedule& r,
                                            const EpsilonGrid& grid);

}  // namespace sigdet
