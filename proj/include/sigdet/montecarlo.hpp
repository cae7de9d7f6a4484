#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigdet/detectors.hpp"
#include "sigdet/maxisets.hpp"
#include "sigdet/schedule.hpp"
#include "sigdet/signal.hpp"
#include "sigdet/spectrum.hpp"

namespace sigdet {

/// Empirical probability from n independent replications.
struct McEstimate {
  double p_hat = 0.0;
  std::size_t count = 0;
  std::size_t n = 0;
  double se = 0.0;  // sqrt(p_hat (1 - p_hat) / n)
  std::uint64_t master_seed = 0;

  static McEstimate from_count(std::size_t count, std::size_t n, std::uint64_t seed);
  bool operator==(const McEstimate&) const = default;
};

/// Rejection counts of both detectors evaluated on the same draws.
struct DetectorCounts {
  std::size_t n = 0;
  std::size_t ip_rejections = 0;
  std::size_t dp_rejections = 0;
};

/// n replications of y = b theta + eps xi (k <= D); replication r uses the
/// stream replication_seed(seed, r). The result does not depend on the
/// number of workers.
DetectorCounts simulate_detectors(const Signal& sig, const OperatorSpectrum& spec, double eps,
                                  std::size_t D, double c1, double c2, std::size_t n, std::uint64_t seed);

/// P_0(reject)
McEstimate estimate_type1(Detector detector, const OperatorSpectrum& spec, double eps, std::size_t D,
                          double constant, std::size_t n, std::uint64_t seed);
/// P_theta(accept)
McEstimate estimate_type2(Detector detector, const Signal& sig, const OperatorSpectrum& spec, double eps,
                          std::size_t D, double constant, std::size_t n, std::uint64_t seed);

/// Which side of the Type-II bounds is being checked: (i) energy above the
/// Cmax bound must be detected, (ii) energy below the Cmin bound must not be.
enum class BoundCase { Upper, Lower };

const char* to_string(BoundCase c) noexcept;

struct BoundReport {
  Detector detector;
  BoundCase bound;
  double epsilon;
  std::size_t D;
  std::size_t spike_k;
  double constant;     // Cmax / Cmin (primed for the direct detector)
  double noise_level;  // eps^2 sqrt(sum b^-4), or eps^2 sqrt(D)
  double energy;       // prefix energy (weighted for the direct detector)
  double beta;
  double margin;
  McEstimate type2;
  double limit;  // beta + 3 se (upper case) or beta - 3 se (lower case)
  bool pass;
};

/// Type-II bounds for the inverse detector with a single spike at k = D,
/// whose energy is (1 + margin) Cmax (case Upper) or (1 - margin) Cmin
/// (case Lower) times eps^2 sqrt(sum_{k<=D} b^-4).
BoundReport verify_prop61(BoundCase which, const OperatorSpectrum& spec, double eps, std::size_t D,
                          const ConstantSet& constants, double beta, double margin, std::size_t n,
                          std::uint64_t seed);

/// Same for the direct detector with b^2-weighted energy and eps^2 sqrt(D).
BoundReport verify_prop62(BoundCase which, const OperatorSpectrum& spec, double eps, std::size_t D,
                          const ConstantSet& constants, double beta, double margin, std::size_t n,
                          std::uint64_t seed);

struct SandwichRow {
  double epsilon;
  std::size_t D;
  double rate;
  bool triggered;       // ||theta||^2 >= rate^2
  double energy;        // prefix energy seen by the detector
  double upper_bound;   // Cmax * noise level
  double lower_bound;   // Cmin * noise level
  bool above_upper;     // energy > upper_bound
  bool below_lower;     // energy <= lower_bound
  std::optional<McEstimate> type2;  // only where an assertion applies
  bool pass = true;
};

struct SandwichReport {
  Detector side;
  bool member_upper;      // F(Cmax) or G(Cmax')
  bool member_lower;      // F(Cmin) or G(Cmin')
  bool member_dec_upper;  // F^dec_r(Cmax) or G^dec_mu(Cmax')
  std::vector<SandwichRow> rows;
  bool pass = true;
};

/// Cross-checks the maxiset predicates against empirical detection on the
/// grid. At triggered eps where the prefix energy exceeds the Cmax bound the
/// Type-II error must be <= beta + 3se; where it is below the Cmin bound it
/// must be > beta - 3se. Other grid points are not asserted.
SandwichReport verify_maxiset_sandwich(Detector side, const Signal& sig, const RateSchedule& rate,
                                       const DesignSchedule& D, const OperatorSpectrum& spec,
                                       const ConstantSet& constants, double beta, const EpsilonGrid& grid,
                                       std::size_t n, std::uint64_t seed);

struct DecimationWitness {
  double epsilon;
  std::size_t D;
  Signal signal;  // theta^{(-D_eps)}
};

/// Finds the first grid eps at which sig violates F^dec_{sqrt2 r}(Cmin) (or
/// the G analogue) with tail energy above rate^2, and returns the decimated
/// signal theta^{(-D_eps)} that the robust maxiset must then miss.
std::optional<DecimationWitness> decimation_witness(Detector side, const Signal& sig,
                                                    const RateSchedule& rate, const DesignSchedule& D,
                                                    const OperatorSpectrum& spec,
                                                    const ConstantSet& constants,
                                                    const EpsilonGrid& grid);

struct PowerRow {
  double rho;
  McEstimate reject;
};

struct PowerCurve {
  Detector detector;
  double epsilon;
  std::size_t D;
  double constant;
  double beta;
  std::vector<PowerRow> rows;              // sorted by rho
  std::optional<double> separation_rho;    // first rho with power >= 1 - beta
  std::vector<std::size_t> flagged_drops;  // row i where power dropped from row i-1 by > 5(se+se)
};

/// Rejection probability of `shape` with its energy multiplied by rho
/// (coordinates by sqrt(rho)). All rho share the same replication streams.
PowerCurve power_curve(Detector detector, const Signal& shape, const OperatorSpectrum& spec, double eps,
                       std::size_t D, double constant, std::vector<double> rho_list, double beta,
                       std::size_t n, std::uint64_t seed);

/// Smallest energy (up to bisection resolution) at which a spike at k reaches
/// power 1 - beta for the given detector.
double spike_separation_energy(Detector detector, const OperatorSpectrum& spec, double eps, std::size_t D,
                               std::size_t k, double constant, double beta, std::size_t n,
                               std::uint64_t seed);

struct CompareCandidate {
  std::string name;
  Signal signal;
  MembershipVerdict f_dec_upper;  // F^dec_r(Cmax)
  MembershipVerdict f_dec_lower;  // F^dec_r(Cmin)
  MembershipVerdict g_dec_upper;  // G^dec_mu(Cmax')
  MembershipVerdict g_dec_lower;  // G^dec_mu(Cmin')
  std::vector<McEstimate> ip_power;  // per grid eps
  std::vector<McEstimate> dp_power;
};

struct SpikeProbe {
  double epsilon;
  std::size_t D;
  std::size_t k;
  double ip_separation;
  double dp_separation;
  double energy;  // probe energy placed between the two separations
  McEstimate ip_power;
  McEstimate dp_power;
  bool dp_detects_ip_misses;
};

struct CompareReport {
  double s;
  double t;
  std::vector<ScheduleRow> design;  // (eps, D_eps, r_eps)
  std::vector<double> mu;
  ConstantSet constants;
  std::vector<CompareCandidate> candidates;
  SpikeProbe probe;
};

struct CompareOptions {
  double signal_scale = 1.0;
  std::size_t probe_k = 1;
  std::size_t probe_index = 10;  // grid index of the probe eps
  double beta = 0.1;
};

/// Direct-versus-inverse comparison under D_eps ~ eps^{-4/(1+4(s+t))},
/// r_eps ~ eps^{4s/(1+4(s+t))}, mu_eps = b_{D_eps} r_eps.
CompareReport compare_ip_dp(const OperatorSpectrum& spec, double s, double t, const EpsilonGrid& grid,
                            const ConstantSet& constants, std::size_t n, std::uint64_t seed,
                            const CompareOptions& options = {});

}  // namespace sigdet
