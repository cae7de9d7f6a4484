#include "sigdet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "sigdet/errors.hpp"
#include "sigdet/parallel.hpp"
#include "sigdet/random.hpp"
#include "sigdet/sampler.hpp"

namespace sigdet {

namespace {

constexpr double kBuffer = 3.0;  // standard errors

double noise_level(Detector d, double eps, const OperatorSpectrum& spec, std::size_t D) {
  return d == Detector::Inverse ? eps * eps * std::sqrt(spec.prefix_sum_inv4(D))
                                : eps * eps * std::sqrt(static_cast<double>(D));
}

// Acceptance probability for a single-spike energy placed at k.
double spike_power(Detector detector, const OperatorSpectrum& spec, double eps, std::size_t D,
                   std::size_t k, double energy, double constant, std::size_t n, std::uint64_t seed) {
  const auto sig = Signal::spike(k, std::sqrt(energy));
  const auto counts = simulate_detectors(sig, spec, eps, D, constant, constant, n, seed);
  const std::size_t rej = detector == Detector::Inverse ? counts.ip_rejections : counts.dp_rejections;
  return static_cast<double>(rej) / static_cast<double>(n);
}

}  // namespace

McEstimate McEstimate::from_count(std::size_t count, std::size_t n, std::uint64_t seed) {
  McEstimate e;
  e.count = count;
  e.n = n;
  e.master_seed = seed;
  e.p_hat = n > 0 ? static_cast<double>(count) / static_cast<double>(n) : 0.0;
  e.se = n > 0 ? std::sqrt(e.p_hat * (1.0 - e.p_hat) / static_cast<double>(n)) : 0.0;
  return e;
}

const char* to_string(BoundCase c) noexcept { return c == BoundCase::Upper ? "i" : "ii"; }

DetectorCounts simulate_detectors(const Signal& sig, const OperatorSpectrum& spec, double eps,
                                  std::size_t D, double c1, double c2, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("replication count must be >= 1");
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0,1)");
  const ObservationModel model(sig, spec, eps, D);
  const auto weights = spec.inverse_squares(D);
  const double t_ip = threshold_ip(c1, eps, spec, D);
  const double t_dp = threshold_dp(c2, eps, D);

  std::atomic<std::size_t> ip{0};
  std::atomic<std::size_t> dp{0};
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(D);
    std::size_t local_ip = 0;
    std::size_t local_dp = 0;
    for (std::size_t r = begin; r < end; ++r) {
      model.draw(replication_seed(seed, r), y);
      if (statistic_ip(y, weights, eps, D) > t_ip) ++local_ip;
      if (statistic_dp(y, eps, D) > t_dp) ++local_dp;
    }
    ip += local_ip;
    dp += local_dp;
  });
  return {n, ip.load(), dp.load()};
}

McEstimate estimate_type1(Detector detector, const OperatorSpectrum& spec, double eps, std::size_t D,
                          double constant, std::size_t n, std::uint64_t seed) {
  const auto c = simulate_detectors(Signal::zero(), spec, eps, D, constant, constant, n, seed);
  return McEstimate::from_count(detector == Detector::Inverse ? c.ip_rejections : c.dp_rejections, n, seed);
}

McEstimate estimate_type2(Detector detector, const Signal& sig, const OperatorSpectrum& spec, double eps,
                          std::size_t D, double constant, std::size_t n, std::uint64_t seed) {
  const auto c = simulate_detectors(sig, spec, eps, D, constant, constant, n, seed);
  const std::size_t rej = detector == Detector::Inverse ? c.ip_rejections : c.dp_rejections;
  return McEstimate::from_count(n - rej, n, seed);
}

namespace {

BoundReport verify_bound(Detector detector, BoundCase which, const OperatorSpectrum& spec, double eps,
                         std::size_t D, const ConstantSet& constants, double beta, double margin,
                         std::size_t n, std::uint64_t seed) {
  if (!(margin >= 0.0)) throw ConstraintUnsatisfiable("margin must be >= 0");
  if (which == BoundCase::Lower && !(margin < 1.0)) {
    throw ConstraintUnsatisfiable("lower-bound margin must be < 1");
  }
  const bool inverse = detector == Detector::Inverse;
  const double constant = which == BoundCase::Upper ? (inverse ? constants.cmax : constants.cmax_p)
                                                    : (inverse ? constants.cmin : constants.cmin_p);
  const double level = noise_level(detector, eps, spec, D);
  const double factor = which == BoundCase::Upper ? 1.0 + margin : 1.0 - margin;
  const double energy = factor * constant * level;

  // spike at the last frequency, where b_k^{-2} (and the alternative's
  // variance) is largest
  const double b = spec.value(D);
  const double theta = inverse ? std::sqrt(energy) : std::sqrt(energy) / b;
  const auto sig = Signal::spike(D, theta);
  const double threshold_constant = inverse ? constants.c1 : constants.c2;
  const auto est = estimate_type2(detector, sig, spec, eps, D, threshold_constant, n, seed);

  BoundReport rep{detector, which, eps, D, D, constant, level, energy, beta, margin, est, 0.0, false};
  if (which == BoundCase::Upper) {
    rep.limit = beta + kBuffer * est.se;
    rep.pass = est.p_hat <= rep.limit;
  } else {
    rep.limit = beta - kBuffer * est.se;
    rep.pass = est.p_hat > rep.limit;
  }
  return rep;
}

}  // namespace

BoundReport verify_prop61(BoundCase which, const OperatorSpectrum& spec, double eps, std::size_t D,
                          const ConstantSet& constants, double beta, double margin, std::size_t n,
                          std::uint64_t seed) {
  return verify_bound(Detector::Inverse, which, spec, eps, D, constants, beta, margin, n, seed);
}

BoundReport verify_prop62(BoundCase which, const OperatorSpectrum& spec, double eps, std::size_t D,
                          const ConstantSet& constants, double beta, double margin, std::size_t n,
                          std::uint64_t seed) {
  return verify_bound(Detector::Direct, which, spec, eps, D, constants, beta, margin, n, seed);
}

SandwichReport verify_maxiset_sandwich(Detector side, const Signal& sig, const RateSchedule& rate,
                                       const DesignSchedule& D, const OperatorSpectrum& spec,
                                       const ConstantSet& constants, double beta, const EpsilonGrid& grid,
                                       std::size_t n, std::uint64_t seed) {
  const bool inverse = side == Detector::Inverse;
  const double upper_c = inverse ? constants.cmax : constants.cmax_p;
  const double lower_c = inverse ? constants.cmin : constants.cmin_p;
  const double threshold_c = inverse ? constants.c1 : constants.c2;

  SandwichReport rep;
  rep.side = side;
  if (inverse) {
    rep.member_upper = member_F(sig, rate, D, spec, upper_c, grid).member;
    rep.member_lower = member_F(sig, rate, D, spec, lower_c, grid).member;
    rep.member_dec_upper = member_F_dec(sig, rate, D, spec, upper_c, grid).member;
  } else {
    rep.member_upper = member_G(sig, rate, D, spec, upper_c, grid).member;
    rep.member_lower = member_G(sig, rate, D, spec, lower_c, grid).member;
    rep.member_dec_upper = member_G_dec(sig, rate, D, spec, upper_c, grid).member;
  }

  const double norm2 = sig.total_energy();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid[i];
    SandwichRow row{};
    row.epsilon = eps;
    row.D = D.at(eps);
    row.rate = rate.at(eps);
    row.triggered = norm2 >= row.rate * row.rate;
    row.energy = inverse ? sig.prefix_energy(row.D) : sig.weighted_prefix_energy(row.D, spec);
    const double level = noise_level(side, eps, spec, row.D);
    row.upper_bound = upper_c * level;
    row.lower_bound = lower_c * level;
    row.above_upper = row.energy > row.upper_bound;
    row.below_lower = row.energy <= row.lower_bound;
    if (row.triggered && (row.above_upper || row.below_lower)) {
      const auto est =
          estimate_type2(side, sig, spec, eps, row.D, threshold_c, n, derive_seed(seed, i));
      row.type2 = est;
      row.pass = row.above_upper ? est.p_hat <= beta + kBuffer * est.se
                                 : est.p_hat > beta - kBuffer * est.se;
    }
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

std::optional<DecimationWitness> decimation_witness(Detector side, const Signal& sig,
                                                    const RateSchedule& rate, const DesignSchedule& D,
                                                    const OperatorSpectrum& spec,
                                                    const ConstantSet& constants,
                                                    const EpsilonGrid& grid) {
  const bool inverse = side == Detector::Inverse;
  const double lower_c = inverse ? constants.cmin : constants.cmin_p;
  for (double eps : grid.points()) {
    const std::size_t d = D.at(eps);
    const double r2 = rate.at(eps) * rate.at(eps);
    const double level = noise_level(side, eps, spec, d);
    const double tail = inverse ? sig.tail_energy(d) : sig.weighted_tail_energy(d, spec);
    const double plain_tail = sig.tail_energy(d);
    // outside F^dec_{sqrt2 r}(Cmin) at eps, with the decimated signal still triggered
    if (tail >= 2.0 * r2 - lower_c * level && plain_tail >= r2 && tail > 0.0) {
      return DecimationWitness{eps, d, sig.decimated(d)};
    }
  }
  return std::nullopt;
}

PowerCurve power_curve(Detector detector, const Signal& shape, const OperatorSpectrum& spec, double eps,
                       std::size_t D, double constant, std::vector<double> rho_list, double beta,
                       std::size_t n, std::uint64_t seed) {
  if (rho_list.empty()) throw std::invalid_argument("power curve needs at least one rho");
  for (double rho : rho_list) {
    if (!(rho >= 0.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be finite and >= 0");
  }
  std::sort(rho_list.begin(), rho_list.end());
  PowerCurve curve{detector, eps, D, constant, beta, {}, std::nullopt, {}};
  for (double rho : rho_list) {
    const auto sig = shape.scaled(std::sqrt(rho));
    const auto c = simulate_detectors(sig, spec, eps, D, constant, constant, n, seed);
    const std::size_t rej = detector == Detector::Inverse ? c.ip_rejections : c.dp_rejections;
    curve.rows.push_back({rho, McEstimate::from_count(rej, n, seed)});
  }
  for (std::size_t i = 0; i < curve.rows.size(); ++i) {
    const auto& cur = curve.rows[i].reject;
    if (!curve.separation_rho && cur.p_hat >= 1.0 - beta) curve.separation_rho = curve.rows[i].rho;
    if (i > 0) {
      const auto& prev = curve.rows[i - 1].reject;
      if (prev.p_hat - cur.p_hat > 5.0 * (prev.se + cur.se)) curve.flagged_drops.push_back(i);
    }
  }
  return curve;
}

double spike_separation_energy(Detector detector, const OperatorSpectrum& spec, double eps, std::size_t D,
                               std::size_t k, double constant, double beta, std::size_t n,
                               std::uint64_t seed) {
  if (k == 0 || k > D) throw std::invalid_argument("spike index must lie in [1, D]");
  const double target = 1.0 - beta;
  auto power = [&](double energy) {
    return spike_power(detector, spec, eps, D, k, energy, constant, n, seed);
  };
  const double b = spec.value(k);
  double hi = constant * noise_level(detector, eps, spec, D);
  if (detector == Detector::Direct) hi /= b * b;
  int guard = 0;
  while (power(hi) < target) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("spike separation search did not bracket");
  }
  double lo = hi / 2.0;
  guard = 0;
  while (power(lo) >= target) {
    lo /= 2.0;
    if (++guard > 200) throw std::runtime_error("spike separation search did not bracket");
  }
  for (int it = 0; it < 40; ++it) {
    const double mid = std::sqrt(lo * hi);
    (power(mid) >= target ? hi : lo) = mid;
  }
  return hi;
}

CompareReport compare_ip_dp(const OperatorSpectrum& spec, double s, double t, const EpsilonGrid& grid,
                            const ConstantSet& constants, std::size_t n, std::uint64_t seed,
                            const CompareOptions& options) {
  const auto design = DesignSchedule::minimax(s, t);
  const auto rate = RateSchedule::minimax(s, t);
  const auto mu = mu_from_r(rate, design, spec);

  CompareReport rep;
  rep.s = s;
  rep.t = t;
  rep.constants = constants;
  rep.design = evaluate_schedules(design, rate, grid);
  for (double eps : grid.points()) rep.mu.push_back(mu.at(eps));

  const std::vector<std::pair<std::string, Signal>> shapes = {
      {"dyadic_block(gamma=1)", dyadic_block_signal(s, 1.0).scaled(options.signal_scale)},
      {"dyadic_block(gamma=0.5)", dyadic_block_signal(s, 0.5).scaled(options.signal_scale)},
  };
  std::uint64_t stream = 0;
  for (const auto& [name, sig] : shapes) {
    CompareCandidate cand{name,
                          sig,
                          member_F_dec(sig, rate, design, spec, constants.cmax, grid),
                          member_F_dec(sig, rate, design, spec, constants.cmin, grid),
                          member_G_dec(sig, mu, design, spec, constants.cmax_p, grid),
                          member_G_dec(sig, mu, design, spec, constants.cmin_p, grid),
                          {},
                          {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double eps = grid[i];
      const std::size_t d = design.at(eps);
      const std::uint64_t sub = derive_seed(seed, stream++);
      const auto c = simulate_detectors(sig, spec, eps, d, constants.c1, constants.c2, n, sub);
      cand.ip_power.push_back(McEstimate::from_count(c.ip_rejections, n, sub));
      cand.dp_power.push_back(McEstimate::from_count(c.dp_rejections, n, sub));
    }
    rep.candidates.push_back(std::move(cand));
  }

  // single spike between the two detectors' empirical separation energies
  SpikeProbe probe{};
  probe.epsilon = grid[std::min(options.probe_index, grid.size() - 1)];
  probe.D = design.at(probe.epsilon);
  probe.k = std::min(options.probe_k, probe.D);
  const std::uint64_t bisect_seed = derive_seed(seed, 0xB15EC7);
  probe.ip_separation = spike_separation_energy(Detector::Inverse, spec, probe.epsilon, probe.D, probe.k,
                                                constants.c1, options.beta, n, bisect_seed);
  probe.dp_separation = spike_separation_energy(Detector::Direct, spec, probe.epsilon, probe.D, probe.k,
                                                constants.c2, options.beta, n, bisect_seed);
  probe.energy = std::sqrt(probe.ip_separation * probe.dp_separation);
  const std::uint64_t eval_seed = derive_seed(seed, 0xE7A1);
  const auto c = simulate_detectors(Signal::spike(probe.k, std::sqrt(probe.energy)), spec, probe.epsilon,
                                    probe.D, constants.c1, constants.c2, n, eval_seed);
  probe.ip_power = McEstimate::from_count(c.ip_rejections, n, eval_seed);
  probe.dp_power = McEstimate::from_count(c.dp_rejections, n, eval_seed);
  const double target = 1.0 - options.beta;
  probe.dp_detects_ip_misses = probe.dp_separation < probe.ip_separation &&
                               probe.dp_power.p_hat >= target - kBuffer * probe.dp_power.se &&
                               probe.ip_power.p_hat < target;
  rep.probe = probe;
  return rep;
}

}  // namespace sigdet
