#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sigdet/schedule.hpp"
#include "sigdet/signal.hpp"
#include "sigdet/spectrum.hpp"

namespace sigdet {

/// One grid point at which a membership inequality fails. lhs and rhs are the
/// two sides of the violated inequality as evaluated.
struct Violation {
  double epsilon;
  double lhs;
  double rhs;
};

/// Membership of a signal in one of the F / G / F^dec / G^dec sets, checked
/// on a finite eps-grid. Violations are listed in grid order, so the first
/// entry is the violation at the largest eps.
struct MembershipVerdict {
  bool member = true;
  std::vector<Violation> violations;
  std::vector<double> grid;

  std::optional<Violation> first_violation() const {
    if (violations.empty()) return std::nullopt;
    return violations.front();
  }
};

struct SlackEntry {
  double epsilon;
  double slack;
};

struct AdmissibilityVerdict {
  bool admissible = true;
  std::vector<SlackEntry> slack;
};

/// Which energy triggers the implication in the G predicate: the plain norm
/// ||theta||^2 or the image-space norm ||b theta||^2.
enum class GTrigger { PlainNorm, WeightedNorm };

/// F_{r,D}(C): ||theta||^2 >= r^2  =>  sum_{k<=D} theta_k^2 > C eps^2 sqrt(sum_{k<=D} b^-4)
MembershipVerdict member_F(const Signal& sig, const RateSchedule& r, const DesignSchedule& D,
                           const OperatorSpectrum& spec, double C, const EpsilonGrid& grid);

/// G_{mu,D}(C): ||theta||^2 >= mu^2  =>  sum_{k<=D} b_k^2 theta_k^2 > C eps^2 sqrt(D)
MembershipVerdict member_G(const Signal& sig, const RateSchedule& mu, const DesignSchedule& D,
                           const OperatorSpectrum& spec, double C, const EpsilonGrid& grid,
                           GTrigger trigger = GTrigger::PlainNorm);

/// F^dec_{r,D}(C): sum_{k>D} theta_k^2 < r^2 - C eps^2 sqrt(sum_{k<=D} b^-4)
MembershipVerdict member_F_dec(const Signal& sig, const RateSchedule& r, const DesignSchedule& D,
                               const OperatorSpectrum& spec, double C, const EpsilonGrid& grid);

/// G^dec_{mu,D}(C): sum_{k>D} b_k^2 theta_k^2 < mu^2 - C eps^2 sqrt(D)
MembershipVerdict member_G_dec(const Signal& sig, const RateSchedule& mu, const DesignSchedule& D,
                               const OperatorSpectrum& spec, double C, const EpsilonGrid& grid);

AdmissibilityVerdict admissible_F(const RateSchedule& r, const DesignSchedule& D,
                                  const OperatorSpectrum& spec, double C, const EpsilonGrid& grid);
AdmissibilityVerdict admissible_G(const RateSchedule& mu, const DesignSchedule& D, double C,
                                  const EpsilonGrid& grid);

struct EmbeddingCheck {
  bool holds = true;
  std::size_t k_max = 0;
  std::optional<std::size_t> first_violation;
  double lhs = 0.0;  // Cmax' sqrt(k) at the violation
  double rhs = 0.0;  // Cmin b_k^2 sqrt(sum_{j<=k} b_j^-4) at the violation
  /// min over checked k of b_k^2 sqrt(sum_{j<=k} b_j^-4) / sqrt(k): the
  /// largest ratio Cmax'/Cmin for which the condition holds on [1, k_max].
  double critical_ratio = 0.0;
};

/// Cmax' sqrt(k) <= Cmin b_k^2 sqrt(sum_{j<=k} b_j^-4) for all k <= k_max.
EmbeddingCheck check_embedding_condition(const OperatorSpectrum& spec, double cmin, double cmax_p,
                                         std::size_t k_max);

struct BesovRow {
  std::size_t K;
  double value;  // K^exponent * sum_{k>K} (w_k theta_k)^2
};

struct BesovReport {
  double sup = 0.0;
  std::vector<BesovRow> rows;
};

/// K = 1, 2, 4, ..., 2^20
std::vector<std::size_t> dyadic_levels(std::size_t max_j = 20);

/// Evaluates K^exponent sum_{k>K} (w_k theta_k)^2 on K_list with w = 1, or
/// w = b when `weight` is given.
BesovReport besov_sup_functional(const Signal& sig, double exponent, const OperatorSpectrum* weight,
                                 const std::vector<std::size_t>& K_list);

}  // namespace sigdet
