#include "sigdet/config.hpp"

#include <initializer_list>
#include <set>

#include "sigdet/errors.hpp"

namespace sigdet {

namespace {

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <class T>
T get(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

std::string family_of(const Json& j, const std::string& where) {
  return get<std::string>(j, "family", where);
}

// ---- spectrum

Json spectrum_json(const OperatorSpectrum& s) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, OperatorSpectrum::Identity>) {
          return {{"family", "identity"}};
        } else if constexpr (std::is_same_v<T, OperatorSpectrum::MildlyIllPosed>) {
          return {{"family", "mildly_ill_posed"}, {"t", f.t}};
        } else {
          return {{"family", "explicit"}, {"prefix", f.prefix}, {"tail_exponent", f.tail_exponent}};
        }
      },
      s.family());
}

OperatorSpectrum spectrum_from(const Json& j) {
  const std::string where = "spectrum";
  const auto fam = family_of(j, where);
  if (fam == "identity") {
    check_keys(j, {"family"}, where);
    return OperatorSpectrum::identity();
  }
  if (fam == "mildly_ill_posed") {
    check_keys(j, {"family", "t"}, where);
    return OperatorSpectrum::mildly_ill_posed(get<double>(j, "t", where));
  }
  if (fam == "explicit") {
    check_keys(j, {"family", "prefix", "tail_exponent"}, where);
    return OperatorSpectrum::explicit_values(get<std::vector<double>>(j, "prefix", where),
                                             get<double>(j, "tail_exponent", where));
  }
  throw ConfigError(where + ": unknown family '" + fam + "'");
}

// ---- signal

Json signal_json(const Signal& s) {
  Json j = std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Signal::FiniteSupport>) {
          return {{"family", "finite_support"}, {"values", f.values}};
        } else if constexpr (std::is_same_v<T, Signal::PowerDecay>) {
          return {{"family", "power_decay"}, {"c", f.c}, {"a", f.a}};
        } else {
          return {{"family", "dyadic_block"}, {"s", f.s}, {"gamma", f.gamma}};
        }
      },
      s.family());
  j["scale"] = s.scale();
  j["decimate"] = s.zeroed_prefix();
  return j;
}

Signal signal_from(const Json& j) {
  const std::string where = "signal";
  const auto fam = family_of(j, where);
  Signal base = Signal::zero();
  if (fam == "finite_support") {
    check_keys(j, {"family", "values", "scale", "decimate"}, where);
    base = Signal::finite_support(get<std::vector<double>>(j, "values", where));
  } else if (fam == "power_decay") {
    check_keys(j, {"family", "c", "a", "scale", "decimate"}, where);
    base = Signal::power_decay(get<double>(j, "c", where), get<double>(j, "a", where));
  } else if (fam == "dyadic_block") {
    check_keys(j, {"family", "s", "gamma", "scale", "decimate"}, where);
    base = Signal::dyadic_block(get<double>(j, "s", where), get<double>(j, "gamma", where));
  } else {
    throw ConfigError(where + ": unknown family '" + fam + "'");
  }
  return base.scaled(get_or<double>(j, "scale", 1.0, where))
      .decimated(get_or<std::size_t>(j, "decimate", 0, where));
}

// ---- schedules

Json design_json(const DesignSchedule& d) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DesignSchedule::Constant>) {
          return {{"family", "constant"}, {"D", f.D}};
        } else if constexpr (std::is_same_v<T, DesignSchedule::MinimaxMIP>) {
          return {{"family", "minimax"}, {"s", f.s}, {"t", f.t}};
        } else {
          return {{"family", "table"}, {"entries", f.entries}};
        }
      },
      d.family());
}

DesignSchedule design_from(const Json& j) {
  const std::string where = "design";
  const auto fam = family_of(j, where);
  if (fam == "constant") {
    check_keys(j, {"family", "D"}, where);
    return DesignSchedule::constant(get<std::size_t>(j, "D", where));
  }
  if (fam == "minimax") {
    check_keys(j, {"family", "s", "t"}, where);
    return DesignSchedule::minimax(get<double>(j, "s", where), get<double>(j, "t", where));
  }
  if (fam == "table") {
    check_keys(j, {"family", "entries"}, where);
    return DesignSchedule::table(get<std::vector<std::pair<double, std::size_t>>>(j, "entries", where));
  }
  throw ConfigError(where + ": unknown family '" + fam + "'");
}

Json rate_json(const RateSchedule& r) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, RateSchedule::PowerLaw>) {
          return {{"family", "power_law"}, {"c", f.c}, {"e", f.e}};
        } else if constexpr (std::is_same_v<T, RateSchedule::MinimaxIP>) {
          return {{"family", "minimax"}, {"s", f.s}, {"t", f.t}};
        } else if constexpr (std::is_same_v<T, RateSchedule::Table>) {
          return {{"family", "table"}, {"entries", f.entries}};
        } else {
          throw ConfigError("spectrally scaled rates are written as \"auto\"");
        }
      },
      r.family());
}

RateSchedule rate_from(const Json& j, const std::string& where) {
  const auto fam = family_of(j, where);
  if (fam == "power_law") {
    check_keys(j, {"family", "c", "e"}, where);
    return RateSchedule::power_law(get<double>(j, "c", where), get<double>(j, "e", where));
  }
  if (fam == "minimax") {
    check_keys(j, {"family", "s", "t"}, where);
    return RateSchedule::minimax(get<double>(j, "s", where), get<double>(j, "t", where));
  }
  if (fam == "table") {
    check_keys(j, {"family", "entries"}, where);
    return RateSchedule::table(get<std::vector<std::pair<double, double>>>(j, "entries", where));
  }
  throw ConfigError(where + ": unknown family '" + fam + "'");
}

// ---- grid, calibration, overrides

Json grid_json(const GridSpec& g) {
  if (const auto* geo = std::get_if<GeometricGrid>(&g)) {
    return {{"kind", "geometric"}, {"start", geo->start}, {"ratio", geo->ratio}, {"count", geo->count}};
  }
  return {{"kind", "points"}, {"points", std::get<ExplicitGrid>(g).points}};
}

GridSpec grid_from(const Json& j) {
  const std::string where = "grid";
  const auto kind = get<std::string>(j, "kind", where);
  if (kind == "geometric") {
    check_keys(j, {"kind", "start", "ratio", "count"}, where);
    return GeometricGrid{get<double>(j, "start", where), get<double>(j, "ratio", where),
                         get<std::size_t>(j, "count", where)};
  }
  if (kind == "points") {
    check_keys(j, {"kind", "points"}, where);
    return ExplicitGrid{get<std::vector<double>>(j, "points", where)};
  }
  throw ConfigError(where + ": unknown kind '" + kind + "'");
}

Json calibration_json(const CalibrationMode& m) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, Chebyshev>) {
          return {{"mode", "chebyshev"}};
        } else if constexpr (std::is_same_v<T, MonteCarloCalibration>) {
          return {{"mode", "monte_carlo"}, {"n", f.replications}, {"seed", f.seed}};
        } else {
          return {{"mode", "explicit"}, {"c1", f.c1}, {"c2", f.c2}};
        }
      },
      m);
}

CalibrationMode calibration_from(const Json& j) {
  const std::string where = "calibration";
  const auto mode = get<std::string>(j, "mode", where);
  if (mode == "chebyshev") {
    check_keys(j, {"mode"}, where);
    return Chebyshev{};
  }
  if (mode == "monte_carlo") {
    check_keys(j, {"mode", "n", "seed"}, where);
    return MonteCarloCalibration{get<std::size_t>(j, "n", where), get<std::uint64_t>(j, "seed", where)};
  }
  if (mode == "explicit") {
    check_keys(j, {"mode", "c1", "c2"}, where);
    return ExplicitConstants{get<double>(j, "c1", where), get<double>(j, "c2", where)};
  }
  throw ConfigError(where + ": unknown mode '" + mode + "'");
}

Json overrides_json(const ConstantOverrides& o) {
  Json j = Json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("c1", o.c1);
  put("c2", o.c2);
  put("cmax", o.cmax);
  put("cmin", o.cmin);
  put("cmax_p", o.cmax_p);
  put("cmin_p", o.cmin_p);
  return j;
}

ConstantOverrides overrides_from(const Json& j) {
  const std::string where = "constants_override";
  check_keys(j, {"c1", "c2", "cmax", "cmin", "cmax_p", "cmin_p"}, where);
  ConstantOverrides o;
  auto take = [&](const char* key, std::optional<double>& v) {
    if (j.contains(key)) {
      v = get<double>(j, key, where);
      if (!(*v > 0.0)) throw ConfigError(where + "." + key + ": constants must be > 0");
    }
  };
  take("c1", o.c1);
  take("c2", o.c2);
  take("cmax", o.cmax);
  take("cmin", o.cmin);
  take("cmax_p", o.cmax_p);
  take("cmin_p", o.cmin_p);
  return o;
}

}  // namespace

const char* to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Json:
      return "json";
    case OutputFormat::Csv:
      return "csv";
    case OutputFormat::Text:
      break;
  }
  return "text";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  throw ConfigError("format must be one of text, json, csv (got '" + s + "')");
}

EpsilonGrid make_grid(const GridSpec& spec) {
  if (const auto* geo = std::get_if<GeometricGrid>(&spec)) {
    return EpsilonGrid::geometric(geo->start, geo->ratio, geo->count);
  }
  return EpsilonGrid(std::get<ExplicitGrid>(spec).points);
}

RateSchedule ExperimentConfig::resolved_mu() const { return mu ? *mu : mu_from_r(rate, design, spectrum); }

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["detector"] = to_string(cfg.detector);
  j["spectrum"] = spectrum_json(cfg.spectrum);
  j["signal"] = signal_json(cfg.signal);
  j["design"] = design_json(cfg.design);
  j["rate"] = rate_json(cfg.rate);
  j["mu"] = cfg.mu ? rate_json(*cfg.mu) : Json("auto");
  j["grid"] = grid_json(cfg.grid);
  j["epsilon"] = cfg.epsilon;
  j["alpha"] = cfg.detection.alpha;
  j["beta"] = cfg.detection.beta;
  j["calibration"] = calibration_json(cfg.detection.calibration);
  j["constants_override"] = overrides_json(cfg.overrides);
  j["n"] = cfg.n;
  j["seed"] = cfg.seed;
  j["format"] = to_string(cfg.format);
  j["rho"] = cfg.rho;
  j["margin"] = cfg.margin;
  j["k_max"] = cfg.k_max;
  j["g_trigger"] = cfg.g_trigger == GTrigger::PlainNorm ? "plain" : "weighted";
  j["s"] = cfg.smoothness;
  j["t"] = cfg.ill_posedness;
  j["spike_k"] = cfg.spike_k;
  return j;
}

ExperimentConfig config_from_json(const Json& j) {
  const std::string where = "config";
  check_keys(j,
             {"schema_version", "detector", "spectrum", "signal", "design", "rate", "mu", "grid", "epsilon",
              "alpha", "beta", "calibration", "constants_override", "n", "seed", "format", "rho", "margin",
              "k_max", "g_trigger", "s", "t", "spike_k"},
             where);
  const int version = get<int>(j, "schema_version", where);
  if (version != kSchemaVersion) {
    throw ConfigError("unsupported schema_version " + std::to_string(version) + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  try {
    ExperimentConfig cfg;
    if (j.contains("detector")) {
      const auto d = get<std::string>(j, "detector", where);
      if (d == "ip") {
        cfg.detector = Detector::Inverse;
      } else if (d == "dp") {
        cfg.detector = Detector::Direct;
      } else {
        throw ConfigError("detector must be 'ip' or 'dp'");
      }
    }
    if (j.contains("spectrum")) cfg.spectrum = spectrum_from(j["spectrum"]);
    if (j.contains("signal")) cfg.signal = signal_from(j["signal"]);
    if (j.contains("design")) cfg.design = design_from(j["design"]);
    if (j.contains("rate")) cfg.rate = rate_from(j["rate"], "rate");
    if (j.contains("mu")) {
      if (j["mu"].is_string()) {
        if (j["mu"] != "auto") throw ConfigError("mu must be \"auto\" or a rate object");
        cfg.mu.reset();
      } else {
        cfg.mu = rate_from(j["mu"], "mu");
      }
    }
    if (j.contains("grid")) cfg.grid = grid_from(j["grid"]);
    make_grid(cfg.grid);
    cfg.epsilon = get_or<double>(j, "epsilon", cfg.epsilon, where);
    if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) throw ConfigError("epsilon must lie in (0,1)");
    cfg.detection.alpha = get_or<double>(j, "alpha", cfg.detection.alpha, where);
    cfg.detection.beta = get_or<double>(j, "beta", cfg.detection.beta, where);
    if (j.contains("calibration")) cfg.detection.calibration = calibration_from(j["calibration"]);
    cfg.detection.validate();
    if (j.contains("constants_override")) cfg.overrides = overrides_from(j["constants_override"]);
    cfg.n = get_or<std::size_t>(j, "n", cfg.n, where);
    if (cfg.n == 0) throw ConfigError("n must be >= 1");
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed, where);
    if (j.contains("format")) cfg.format = parse_format(get<std::string>(j, "format", where));
    cfg.rho = get_or<std::vector<double>>(j, "rho", cfg.rho, where);
    if (cfg.rho.empty()) throw ConfigError("rho must not be empty");
    for (double r : cfg.rho) {
      if (!(r >= 0.0)) throw ConfigError("rho values must be >= 0");
    }
    cfg.margin = get_or<double>(j, "margin", cfg.margin, where);
    if (!(cfg.margin >= 0.0 && cfg.margin < 1.0)) throw ConfigError("margin must lie in [0,1)");
    cfg.k_max = get_or<std::size_t>(j, "k_max", cfg.k_max, where);
    if (cfg.k_max == 0) throw ConfigError("k_max must be >= 1");
    if (j.contains("g_trigger")) {
      const auto g = get<std::string>(j, "g_trigger", where);
      if (g == "plain") {
        cfg.g_trigger = GTrigger::PlainNorm;
      } else if (g == "weighted") {
        cfg.g_trigger = GTrigger::WeightedNorm;
      } else {
        throw ConfigError("g_trigger must be 'plain' or 'weighted'");
      }
    }
    cfg.smoothness = get_or<double>(j, "s", cfg.smoothness, where);
    cfg.ill_posedness = get_or<double>(j, "t", cfg.ill_posedness, where);
    if (!(cfg.smoothness > 0.0) || !(cfg.ill_posedness >= 0.0)) throw ConfigError("need s > 0 and t >= 0");
    cfg.spike_k = get_or<std::size_t>(j, "spike_k", cfg.spike_k, where);
    if (cfg.spike_k == 0) throw ConfigError("spike_k must be >= 1");
    return cfg;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

std::string serialize_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

ConstantSet resolve_config_constants(const ExperimentConfig& cfg) {
  const auto& o = cfg.overrides;
  const auto grid = make_grid(cfg.grid);
  const auto& det = cfg.detection;
  const double c1 = o.c1 ? *o.c1 : calibrate_c1(det.calibration, det.alpha, cfg.spectrum, cfg.design, grid);
  const double c2 = o.c2 ? *o.c2 : calibrate_c2(det.calibration, det.alpha, cfg.design, grid);
  ConstantSet c{};
  c.c1 = c1;
  c.c2 = c2;
  c.cmax = o.cmax ? *o.cmax : c_max(c1, det.beta);
  c.cmax_p = o.cmax_p ? *o.cmax_p : c_max(c2, det.beta);
  c.cmin = o.cmin ? *o.cmin : c_min(c1, det.beta);
  c.cmin_p = o.cmin_p ? *o.cmin_p : c_min(c2, det.beta);
  return c;
}

}  // namespace sigdet
