#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sigdet/signal.hpp"
#include "sigdet/spectrum.hpp"

namespace sigdet {

/// y_k = b_k theta_k + eps xi_k for k = 1..D, xi drawn from the stream of
/// `seed`. eps = 0 is accepted as a noiseless debug mode.
std::vector<double> sample_observations(const Signal& sig, const OperatorSpectrum& spec, double eps,
                                        std::size_t D, std::uint64_t seed);

/// Precomputed means b_k theta_k for repeated sampling at a fixed setting.
class ObservationModel {
 public:
  ObservationModel(const Signal& sig, const OperatorSpectrum& spec, double eps, std::size_t D);

  std::size_t size() const noexcept { return mean_.size(); }
  double epsilon() const noexcept { return eps_; }
  std::span<const double> mean() const noexcept { return mean_; }

  /// Fills out[0..D) from the stream of `seed`.
  void draw(std::uint64_t seed, std::span<double> out) const;

 private:
  std::vector<double> mean_;
  double eps_;
};

}  // namespace sigdet
