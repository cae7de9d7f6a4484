#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sigdet/detectors.hpp"
#include "sigdet/maxisets.hpp"
#include "sigdet/report.hpp"
#include "sigdet/schedule.hpp"
#include "sigdet/signal.hpp"
#include "sigdet/spectrum.hpp"

namespace sigdet {

inline constexpr int kSchemaVersion = 1;

enum class OutputFormat { Text, Json, Csv };

struct GeometricGrid {
  double start = 0.5;
  double ratio = 0.8;
  std::size_t count = 20;
  bool operator==(const GeometricGrid&) const = default;
};
struct ExplicitGrid {
  std::vector<double> points;
  bool operator==(const ExplicitGrid&) const = default;
};
using GridSpec = std::variant<GeometricGrid, ExplicitGrid>;

EpsilonGrid make_grid(const GridSpec& spec);

/// "text" | "json" | "csv"; throws ConfigError otherwise.
OutputFormat parse_format(const std::string& s);
const char* to_string(OutputFormat f) noexcept;

/// Values that replace the calibrated / derived constants when present.
struct ConstantOverrides {
  std::optional<double> c1, c2, cmax, cmin, cmax_p, cmin_p;
  bool operator==(const ConstantOverrides&) const = default;
};

/// Everything one CLI invocation needs. Serializes to a versioned JSON
/// document; unknown keys are rejected.
struct ExperimentConfig {
  Detector detector = Detector::Inverse;
  OperatorSpectrum spectrum = OperatorSpectrum::identity();
  Signal signal = Signal::zero();
  DesignSchedule design = DesignSchedule::constant(100);
  RateSchedule rate = RateSchedule::power_law(1.0, 0.5);
  std::optional<RateSchedule> mu;  // empty: mu_eps = b_{D_eps} r_eps
  GridSpec grid = GeometricGrid{};
  double epsilon = 0.1;  // single noise level for simulate / power / prop checks
  DetectorConfig detection{};
  ConstantOverrides overrides{};
  std::size_t n = 100000;
  std::uint64_t seed = 20240601;
  OutputFormat format = OutputFormat::Text;
  std::vector<double> rho = {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  double margin = 0.05;
  std::size_t k_max = 1000000;
  GTrigger g_trigger = GTrigger::PlainNorm;
  double smoothness = 0.5;  // s of the minimax calibration (compare, besov)
  double ill_posedness = 1.0;  // t of the minimax calibration
  std::size_t spike_k = 1;

  RateSchedule resolved_mu() const;
  bool operator==(const ExperimentConfig&) const = default;
};

Json to_json(const ExperimentConfig& cfg);
/// Throws ConfigError on malformed documents, unknown keys, wrong schema
/// version or parameter values that fail validation.
ExperimentConfig config_from_json(const Json& j);
ExperimentConfig parse_config(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

/// Calibrates C1, C2 at the configured design and applies overrides.
/// Throws ConstantTooSmall when C_min cannot be formed.
ConstantSet resolve_config_constants(const ExperimentConfig& cfg);

}  // namespace sigdet
