#include "sigdet/sampler.hpp"

#include <boost/random/normal_distribution.hpp>
#include <stdexcept>

#include "sigdet/random.hpp"

namespace sigdet {

ObservationModel::ObservationModel(const Signal& sig, const OperatorSpectrum& spec, double eps,
                                   std::size_t D)
    : mean_(D), eps_(eps) {
  if (D == 0) throw std::invalid_argument("sampler requires D >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("sampler requires eps in [0,1)");
  for (std::size_t k = 1; k <= D; ++k) mean_[k - 1] = spec.value(k) * sig.coefficient(k);
}

void ObservationModel::draw(std::uint64_t seed, std::span<double> out) const {
  if (out.size() < mean_.size()) throw std::invalid_argument("output buffer too small");
  Xoshiro256 engine(seed);
  boost::random::normal_distribution<double> normal;
  for (std::size_t i = 0; i < mean_.size(); ++i) out[i] = mean_[i] + eps_ * normal(engine);
}

std::vector<double> sample_observations(const Signal& sig, const OperatorSpectrum& spec, double eps,
                                        std::size_t D, std::uint64_t seed) {
  ObservationModel model(sig, spec, eps, D);
  std::vector<double> y(D);
  model.draw(seed, y);
  return y;
}

}  // namespace sigdet
