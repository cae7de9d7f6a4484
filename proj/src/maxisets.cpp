#include "sigdet/maxisets.hpp"

#include <cmath>
#include <stdexcept>

namespace sigdet {

namespace {

double ip_noise_level(double eps, const OperatorSpectrum& spec, std::size_t D) {
  return eps * eps * std::sqrt(spec.prefix_sum_inv4(D));
}

double dp_noise_level(double eps, std::size_t D) {
  return eps * eps * std::sqrt(static_cast<double>(D));
}

MembershipVerdict start_verdict(const EpsilonGrid& grid) {
  MembershipVerdict v;
  v.grid = grid.points();
  return v;
}

void record(MembershipVerdict& v, double eps, double lhs, double rhs) {
  v.member = false;
  v.violations.push_back({eps, lhs, rhs});
}

}  // namespace

MembershipVerdict member_F(const Signal& sig, const RateSchedule& r, const DesignSchedule& D,
                           const OperatorSpectrum& spec, double C, const EpsilonGrid& grid) {
  auto verdict = start_verdict(grid);
  const double energy = sig.total_energy();
  for (double eps : grid.points()) {
    const double rate = r.at(eps);
    if (!(energy >= rate * rate)) continue;
    const std::size_t d = D.at(eps);
    const double lhs = sig.prefix_energy(d);
    const double rhs = C * ip_noise_level(eps, spec, d);
    if (!(lhs > rhs)) record(verdict, eps, lhs, rhs);
  }
  return verdict;
}

MembershipVerdict member_G(const Signal& sig, const RateSchedule& mu, const DesignSchedule& D,
                           const OperatorSpectrum& spec, double C, const EpsilonGrid& grid,
                           GTrigger trigger) {
  auto verdict = start_verdict(grid);
  const double energy =
      trigger == GTrigger::PlainNorm ? sig.total_energy() : sig.weighted_total_energy(spec);
  for (double eps : grid.points()) {
    const double rate = mu.at(eps);
    if (!(energy >= rate * rate)) continue;
    const std::size_t d = D.at(eps);
    const double lhs = sig.weighted_prefix_energy(d, spec);
    const double rhs = C * dp_noise_level(eps, d);
    if (!(lhs > rhs)) record(verdict, eps, lhs, rhs);
  }
  return verdict;
}

MembershipVerdict member_F_dec(const Signal& sig, const RateSchedule& r, const DesignSchedule& D,
                               const OperatorSpectrum& spec, double C, const EpsilonGrid& grid) {
  auto verdict = start_verdict(grid);
  for (double eps : grid.points()) {
    const std::size_t d = D.at(eps);
    const double rate = r.at(eps);
    const double lhs = sig.tail_energy(d);
    const double rhs = rate * rate - C * ip_noise_level(eps, spec, d);
    if (!(lhs < rhs)) record(verdict, eps, lhs, rhs);
  }
  return verdict;
}

MembershipVerdict member_G_dec(const Signal& sig, const RateSchedule& mu, const DesignSchedule& D,
                               const OperatorSpectrum& spec, double C, const EpsilonGrid& grid) {
  auto verdict = start_verdict(grid);
  for (double eps : grid.points()) {
    const std::size_t d = D.at(eps);
    const double rate = mu.at(eps);
    const double lhs = sig.weighted_tail_energy(d, spec);
    const double rhs = rate * rate - C * dp_noise_level(eps, d);
    if (!(lhs < rhs)) record(verdict, eps, lhs, rhs);
  }
  return verdict;
}

AdmissibilityVerdict admissible_F(const RateSchedule& r, const DesignSchedule& D,
                                  const OperatorSpectrum& spec, double C, const EpsilonGrid& grid) {
  AdmissibilityVerdict v;
  for (double eps : grid.points()) {
    const std::size_t d = D.at(eps);
    const double rate = r.at(eps);
    const double slack = rate * rate - C * ip_noise_level(eps, spec, d);
    v.slack.push_back({eps, slack});
    if (!(slack > 0.0)) v.admissible = false;
  }
  return v;
}

AdmissibilityVerdict admissible_G(const RateSchedule& mu, const DesignSchedule& D, double C,
                                  const EpsilonGrid& grid) {
  AdmissibilityVerdict v;
  for (double eps : grid.points()) {
    const std::size_t d = D.at(eps);
    const double rate = mu.at(eps);
    const double slack = rate * rate - C * dp_noise_level(eps, d);
    v.slack.push_back({eps, slack});
    if (!(slack > 0.0)) v.admissible = false;
  }
  return v;
}

EmbeddingCheck check_embedding_condition(const OperatorSpectrum& spec, double cmin, double cmax_p,
                                         std::size_t k_max) {
  if (k_max == 0) throw std::invalid_argument("k_max must be >= 1");
  EmbeddingCheck out;
  out.k_max = k_max;
  out.critical_ratio = INFINITY;
  spec.prefix_sum_inv4(k_max);  // build the cache once
  for (std::size_t k = 1; k <= k_max; ++k) {
    const double b = spec.value(k);
    const double root_k = std::sqrt(static_cast<double>(k));
    const double factor = b * b * std::sqrt(spec.prefix_sum_inv4(k));
    const double lhs = cmax_p * root_k;
    const double rhs = cmin * factor;
    out.critical_ratio = std::min(out.critical_ratio, factor / root_k);
    if (out.holds && !(lhs <= rhs)) {
      out.holds = false;
      out.first_violation = k;
      out.lhs = lhs;
      out.rhs = rhs;
    }
  }
  return out;
}

std::vector<std::size_t> dyadic_levels(std::size_t max_j) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j <= max_j; ++j) out.push_back(std::size_t{1} << j);
  return out;
}

BesovReport besov_sup_functional(const Signal& sig, double exponent, const OperatorSpectrum* weight,
                                 const std::vector<std::size_t>& K_list) {
  if (!(exponent > 0.0)) throw std::invalid_argument("Besov exponent must be > 0");
  BesovReport out;
  for (std::size_t K : K_list) {
    if (K == 0) throw std::invalid_argument("K must be >= 1");
    const double tail = weight ? sig.weighted_tail_energy(K, *weight) : sig.tail_energy(K);
    const double value = std::pow(static_cast<double>(K), exponent) * tail;
    out.rows.push_back({K, value});
    out.sup = std::max(out.sup, value);
  }
  return out;
}

}  // namespace sigdet
