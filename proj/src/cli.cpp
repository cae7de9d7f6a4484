#include "sigdet/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "sigdet/config.hpp"
#include "sigdet/errors.hpp"
#include "sigdet/maxisets.hpp"
#include "sigdet/montecarlo.hpp"
#include "sigdet/random.hpp"
#include "sigdet/report.hpp"

namespace sigdet {

namespace {

struct Options {
  std::string config_path;
  std::string seed;
  std::string n;
  std::string format;
  std::string out_path;
  std::string which;
};

struct Outcome {
  Json json;
  std::string text;
  std::string csv;
  int code = kExitPass;
};

using Row = std::vector<std::string>;

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::string csv_table(const Row& header, const std::vector<Row>& rows) {
  std::string out;
  auto line = [&](const Row& r) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += csv_field(r[i]);
    }
    out += "\r\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

std::string num(double x) { return format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

template <class T>
T parse_unsigned(const std::string& s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(fmt::format("--{} expects an unsigned integer, got '{}'", what, s));
  }
  return value;
}

double constant_for(Detector d, const ConstantSet& c) { return d == Detector::Inverse ? c.c1 : c.c2; }

Json checked_ranges(const ExperimentConfig& cfg) {
  const auto grid = make_grid(cfg.grid);
  return Json{{"epsilon_grid", grid.points()},
              {"k_max", cfg.k_max},
              {"besov_levels", dyadic_levels()},
              {"replications", cfg.n}};
}

std::string ranges_note(const ExperimentConfig& cfg) {
  const auto grid = make_grid(cfg.grid);
  return fmt::format(
      "finite ranges standing in for universal quantifiers: eps in a {}-point grid [{}, {}]; "
      "k <= {}; K = 2^j for j <= 20; {} Monte Carlo replications\n",
      grid.size(), num(grid.points().back()), num(grid.points().front()), cfg.k_max, cfg.n);
}

std::string estimate_text(const char* label, const McEstimate& e) {
  return fmt::format("{}: {} (se {}, {} of {}, seed {})\n", label, num(e.p_hat), num(e.se), e.count, e.n,
                     e.master_seed);
}

Json envelope(const char* command, const ExperimentConfig& cfg, const ConstantSet& c) {
  Json j;
  j["command"] = command;
  j["config"] = to_json(cfg);
  j["constants"] = to_json(c);
  j["checked_ranges"] = checked_ranges(cfg);
  return j;
}

Outcome cmd_simulate(const ExperimentConfig& cfg) {
  const auto c = resolve_config_constants(cfg);
  const std::size_t D = cfg.design.at(cfg.epsilon);
  const double C = constant_for(cfg.detector, c);
  const auto type1 =
      estimate_type1(cfg.detector, cfg.spectrum, cfg.epsilon, D, C, cfg.n, derive_seed(cfg.seed, 1));
  const auto type2 = estimate_type2(cfg.detector, cfg.signal, cfg.spectrum, cfg.epsilon, D, C, cfg.n,
                                    derive_seed(cfg.seed, 2));
  Outcome o;
  o.json = envelope("simulate", cfg, c);
  o.json["result"] = {{"detector", to_string(cfg.detector)},
                      {"epsilon", cfg.epsilon},
                      {"D", D},
                      {"type1", to_json(type1)},
                      {"type2", to_json(type2)}};
  o.text = fmt::format("simulate: detector {} at eps = {}, D = {}\n", to_string(cfg.detector),
                       num(cfg.epsilon), D) +
           render_text(c) + estimate_text("Type-I error", type1) + estimate_text("Type-II error", type2);
  o.csv = csv_table({"quantity", "p_hat", "se", "count", "n", "seed"},
                    {{"type1", num(type1.p_hat), num(type1.se), num(type1.count), num(type1.n),
                      std::to_string(type1.master_seed)},
                     {"type2", num(type2.p_hat), num(type2.se), num(type2.count), num(type2.n),
                      std::to_string(type2.master_seed)}});
  return o;
}

Outcome cmd_calibrate(const ExperimentConfig& cfg) {
  const auto& o = cfg.overrides;
  const auto grid = make_grid(cfg.grid);
  const auto& det = cfg.detection;
  const double c1 = o.c1 ? *o.c1 : calibrate_c1(det.calibration, det.alpha, cfg.spectrum, cfg.design, grid);
  const double c2 = o.c2 ? *o.c2 : calibrate_c2(det.calibration, det.alpha, cfg.design, grid);

  Json constants{{"c1", c1}, {"c2", c2}};
  std::vector<std::string> errors;
  std::vector<Row> rows{{"c1", num(c1)}, {"c2", num(c2)}};
  std::string text = "calibrate\n";
  text += fmt::format("  C1     = {}\n  C2     = {}\n", num(c1), num(c2));
  auto derive = [&](const char* name, const std::optional<double>& ov, const std::function<double()>& f) {
    try {
      const double v = ov ? *ov : f();
      constants[name] = v;
      rows.push_back({name, num(v)});
      text += fmt::format("  {:<6} = {}\n", name, num(v));
    } catch (const ConstantTooSmall& e) {
      constants[name] = nullptr;
      rows.push_back({name, ""});
      errors.push_back(fmt::format("{}: {}", name, e.what()));
      text += fmt::format("  {:<6} unavailable: {}\n", name, e.what());
    }
  };
  derive("cmax", o.cmax, [&] { return c_max(c1, det.beta); });
  derive("cmin", o.cmin, [&] { return c_min(c1, det.beta); });
  derive("cmax_p", o.cmax_p, [&] { return c_max(c2, det.beta); });
  derive("cmin_p", o.cmin_p, [&] { return c_min(c2, det.beta); });

  Outcome out;
  out.json["command"] = "calibrate";
  out.json["config"] = to_json(cfg);
  out.json["constants"] = constants;
  out.json["errors"] = errors;
  out.json["checked_ranges"] = checked_ranges(cfg);
  out.text = text;
  out.csv = csv_table({"name", "value"}, rows);
  out.code = errors.empty() ? kExitPass : kExitConstantTooSmall;
  return out;
}

Outcome cmd_maxiset(const ExperimentConfig& cfg) {
  const auto c = resolve_config_constants(cfg);
  const auto grid = make_grid(cfg.grid);
  const bool ip = cfg.detector == Detector::Inverse;
  MembershipVerdict upper, lower, robust;
  AdmissibilityVerdict adm;
  if (ip) {
    upper = member_F(cfg.signal, cfg.rate, cfg.design, cfg.spectrum, c.cmax, grid);
    lower = member_F(cfg.signal, cfg.rate, cfg.design, cfg.spectrum, c.cmin, grid);
    robust = member_F_dec(cfg.signal, cfg.rate, cfg.design, cfg.spectrum, c.cmax, grid);
    adm = admissible_F(cfg.rate, cfg.design, cfg.spectrum, c.cmax, grid);
  } else {
    const auto mu = cfg.resolved_mu();
    upper = member_G(cfg.signal, mu, cfg.design, cfg.spectrum, c.cmax_p, grid, cfg.g_trigger);
    lower = member_G(cfg.signal, mu, cfg.design, cfg.spectrum, c.cmin_p, grid, cfg.g_trigger);
    robust = member_G_dec(cfg.signal, mu, cfg.design, cfg.spectrum, c.cmax_p, grid);
    adm = admissible_G(mu, cfg.design, c.cmax_p, grid);
  }
  const std::string set = ip ? "F" : "G";
  Outcome o;
  o.json = envelope("maxiset", cfg, c);
  o.json["result"] = {{"detector", to_string(cfg.detector)},
                      {"member", robust.member},
                      {"admissible", adm.admissible},
                      {"upper", to_json(upper)},
                      {"lower", to_json(lower)},
                      {"robust", to_json(robust)},
                      {"admissibility", to_json(adm)}};
  o.text = fmt::format("maxiset: detector {}\n", to_string(cfg.detector)) + render_text(c) +
           fmt::format("admissible: {}\n", flag(adm.admissible)) +
           render_text(upper, set + "(Cmax)") + render_text(lower, set + "(Cmin)") +
           render_text(robust, set + "^dec(Cmax)") + fmt::format("member: {}\n", flag(robust.member));
  o.csv = csv_table({"predicate", "member", "violations"},
                    {{set + "(Cmax)", flag(upper.member), num(upper.violations.size())},
                     {set + "(Cmin)", flag(lower.member), num(lower.violations.size())},
                     {set + "^dec(Cmax)", flag(robust.member), num(robust.violations.size())},
                     {"admissible", flag(adm.admissible), ""}});
  return o;
}

Outcome cmd_power(const ExperimentConfig& cfg) {
  const auto c = resolve_config_constants(cfg);
  const std::size_t D = cfg.design.at(cfg.epsilon);
  const auto curve = power_curve(cfg.detector, cfg.signal, cfg.spectrum, cfg.epsilon, D,
                                 constant_for(cfg.detector, c), cfg.rho, cfg.detection.beta, cfg.n, cfg.seed);
  Outcome o;
  o.json = envelope("power", cfg, c);
  o.json["result"] = to_json(curve);
  o.text = render_text(curve);
  o.csv = power_curve_csv(curve);
  return o;
}

Outcome cmd_compare(const ExperimentConfig& cfg) {
  ExperimentConfig at_rate = cfg;
  at_rate.design = DesignSchedule::minimax(cfg.smoothness, cfg.ill_posedness);
  const auto c = resolve_config_constants(at_rate);
  const auto grid = make_grid(cfg.grid);
  CompareOptions opt;
  opt.probe_k = cfg.spike_k;
  opt.beta = cfg.detection.beta;
  opt.probe_index = std::min<std::size_t>(opt.probe_index, grid.size() - 1);
  const auto report = compare_ip_dp(cfg.spectrum, cfg.smoothness, cfg.ill_posedness, grid, c, cfg.n, cfg.seed, opt);
  Outcome o;
  o.json = envelope("compare", cfg, c);
  o.json["result"] = to_json(report);
  o.text = render_text(report);
  std::vector<Row> rows;
  for (const auto& cand : report.candidates) {
    for (std::size_t i = 0; i < cand.ip_power.size(); ++i) {
      rows.push_back({cand.name, num(report.design[i].epsilon), num(report.design[i].D), num(cand.ip_power[i].p_hat),
                      num(cand.dp_power[i].p_hat)});
    }
  }
  o.csv = csv_table({"candidate", "epsilon", "D", "ip_power", "dp_power"}, rows);
  return o;
}

Outcome verify_bounds(const ExperimentConfig& cfg, Detector d) {
  const auto c = resolve_config_constants(cfg);
  const std::size_t D = cfg.design.at(cfg.epsilon);
  const auto run = d == Detector::Inverse ? verify_prop61 : verify_prop62;
  const auto upper = run(BoundCase::Upper, cfg.spectrum, cfg.epsilon, D, c, cfg.detection.beta, cfg.margin, cfg.n,
                         derive_seed(cfg.seed, 1));
  const auto lower = run(BoundCase::Lower, cfg.spectrum, cfg.epsilon, D, c, cfg.detection.beta, cfg.margin, cfg.n,
                         derive_seed(cfg.seed, 2));
  const bool pass = upper.pass && lower.pass;
  Outcome o;
  o.json = envelope(d == Detector::Inverse ? "verify prop61" : "verify prop62", cfg, c);
  o.json["result"] = {{"pass", pass}, {"cases", Json::array({to_json(upper), to_json(lower)})}};
  o.text = render_text(c) + render_text(upper) + render_text(lower) + fmt::format("pass: {}\n", flag(pass));
  std::vector<Row> rows;
  for (const auto* r : {&upper, &lower}) {
    rows.push_back({to_string(r->bound), num(r->energy), num(r->type2.p_hat), num(r->type2.se), num(r->limit),
                    flag(r->pass)});
  }
  o.csv = csv_table({"case", "energy", "type2", "se", "limit", "pass"}, rows);
  o.code = pass ? kExitPass : kExitStatisticalFailure;
  return o;
}

Outcome verify_sandwich(const ExperimentConfig& cfg) {
  const auto c = resolve_config_constants(cfg);
  const auto grid = make_grid(cfg.grid);
  const bool ip = cfg.detector == Detector::Inverse;
  const auto rate = ip ? cfg.rate : cfg.resolved_mu();
  const auto report = verify_maxiset_sandwich(cfg.detector, cfg.signal, rate, cfg.design, cfg.spectrum, c,
                                              cfg.detection.beta, grid, cfg.n, cfg.seed);
  const auto witness = decimation_witness(cfg.detector, cfg.signal, rate, cfg.design, cfg.spectrum, c, grid);
  bool pass = report.pass;
  Json wj = nullptr;
  std::string wtext = "decimation witness: none on this grid\n";
  if (witness) {
    const auto est = estimate_type2(cfg.detector, witness->signal, cfg.spectrum, witness->epsilon, witness->D,
                                    constant_for(cfg.detector, c), cfg.n, derive_seed(cfg.seed, 0xdec));
    const double limit = cfg.detection.beta - 3.0 * est.se;
    const bool ok = est.p_hat > limit;
    pass = pass && ok;
    wj = {{"epsilon", witness->epsilon}, {"D", witness->D}, {"type2", to_json(est)}, {"limit", limit}, {"pass", ok}};
    wtext = fmt::format("decimation witness at eps = {}, D = {}: Type-II {} (limit > {}) {}\n",
                        num(witness->epsilon), witness->D, num(est.p_hat), num(limit), ok ? "ok" : "FAIL");
  }
  Outcome o;
  o.json = envelope("verify sandwich", cfg, c);
  o.json["result"] = {{"pass", pass}, {"sandwich", to_json(report)}, {"witness", wj}};
  o.text = render_text(c) + render_text(report) + wtext + fmt::format("pass: {}\n", flag(pass));
  std::vector<Row> rows;
  for (const auto& r : report.rows) {
    rows.push_back({num(r.epsilon), num(r.D), num(r.rate), flag(r.triggered), num(r.energy), num(r.upper_bound),
                    num(r.lower_bound), r.type2 ? num(r.type2->p_hat) : "", flag(r.pass)});
  }
  o.csv = csv_table({"epsilon", "D", "rate", "triggered", "energy", "upper_bound", "lower_bound", "type2", "pass"},
                    rows);
  o.code = pass ? kExitPass : kExitStatisticalFailure;
  return o;
}

Outcome verify_embedding(const ExperimentConfig& cfg) {
  const auto c = resolve_config_constants(cfg);
  const auto check = check_embedding_condition(cfg.spectrum, c.cmin, c.cmax_p, cfg.k_max);
  Outcome o;
  o.json = envelope("verify embedding", cfg, c);
  o.json["result"] = to_json(check);
  o.text = render_text(c) + render_text(check);
  o.csv = csv_table({"holds", "k_max", "first_violation", "lhs", "rhs", "critical_ratio"},
                    {{flag(check.holds), num(check.k_max),
                      check.first_violation ? num(*check.first_violation) : "", num(check.lhs), num(check.rhs),
                      num(check.critical_ratio)}});
  o.code = check.holds ? kExitPass : kExitStatisticalFailure;
  return o;
}

Outcome verify_besov(const ExperimentConfig& cfg) {
  const auto levels = dyadic_levels();
  const double s = cfg.smoothness;
  const double t = cfg.ill_posedness;
  const auto plain = besov_sup_functional(cfg.signal, 2.0 * s, nullptr, levels);
  const auto weighted = besov_sup_functional(cfg.signal, 2.0 * (s + t), &cfg.spectrum, levels);
  const bool pass = std::isfinite(weighted.sup);
  Outcome o;
  o.json["command"] = "verify besov";
  o.json["config"] = to_json(cfg);
  o.json["checked_ranges"] = checked_ranges(cfg);
  o.json["result"] = {{"pass", pass},
                      {"unweighted_exponent", 2.0 * s},
                      {"weighted_exponent", 2.0 * (s + t)},
                      {"unweighted", to_json(plain)},
                      {"weighted", to_json(weighted)}};
  o.text = render_text(plain, fmt::format("K^{} sum_{{k>K}} theta_k^2", num(2.0 * s))) +
           render_text(weighted, fmt::format("K^{} sum_{{k>K}} b_k^2 theta_k^2", num(2.0 * (s + t))));
  std::vector<Row> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    rows.push_back({num(levels[i]), num(plain.rows[i].value), num(weighted.rows[i].value)});
  }
  o.csv = csv_table({"K", "unweighted", "weighted"}, rows);
  o.code = pass ? kExitPass : kExitStatisticalFailure;
  return o;
}

ExperimentConfig load_config(const Options& opt) {
  ExperimentConfig cfg;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + opt.config_path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
  }
  if (!opt.seed.empty()) cfg.seed = parse_unsigned<std::uint64_t>(opt.seed, "seed");
  if (!opt.n.empty()) {
    cfg.n = parse_unsigned<std::size_t>(opt.n, "n");
    if (cfg.n == 0) throw ConfigError("--n must be >= 1");
  }
  if (!opt.format.empty()) cfg.format = parse_format(opt.format);
  return cfg;
}

std::string payload(const Outcome& o, OutputFormat f) {
  switch (f) {
    case OutputFormat::Json:
      return o.json.dump(2) + "\n";
    case OutputFormat::Csv:
      return o.csv;
    case OutputFormat::Text:
      break;
  }
  return o.text;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--config", opt.config_path, "JSON experiment config");
  sub->add_option("--seed", opt.seed, "master seed (u64)");
  sub->add_option("--n", opt.n, "Monte Carlo replications");
  sub->add_option("--format", opt.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
  sub->add_option("--out", opt.out_path, "write the payload here; a text summary goes to stdout");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Signal detection in Gaussian sequence models: detectors, maxisets, Monte Carlo checks", "sigdet"};
  app.require_subcommand(1);
  Options opt;
  std::map<CLI::App*, std::function<Outcome(const ExperimentConfig&)>> commands;

  auto* simulate = app.add_subcommand("simulate", "Type-I and Type-II errors at the configured eps");
  commands[simulate] = cmd_simulate;
  auto* calibrate = app.add_subcommand("calibrate", "C1, C2, Cmax, Cmin, Cmax', Cmin'");
  commands[calibrate] = cmd_calibrate;
  auto* maxiset = app.add_subcommand("maxiset", "maxiset membership of the configured signal");
  commands[maxiset] = cmd_maxiset;
  auto* power = app.add_subcommand("power", "power curve over the energy scales in rho");
  commands[power] = cmd_power;
  auto* compare = app.add_subcommand("compare", "inverse versus direct detector under the minimax schedules");
  commands[compare] = cmd_compare;
  auto* verify = app.add_subcommand("verify", "check a stated bound; nonzero exit on failure");
  verify->add_option("which", opt.which, "prop61 | prop62 | sandwich | embedding | besov")
      ->required()
      ->check(CLI::IsMember({"prop61", "prop62", "sandwich", "embedding", "besov"}));
  commands[verify] = [&opt](const ExperimentConfig& cfg) {
    if (opt.which == "prop61") return verify_bounds(cfg, Detector::Inverse);
    if (opt.which == "prop62") return verify_bounds(cfg, Detector::Direct);
    if (opt.which == "sandwich") return verify_sandwich(cfg);
    if (opt.which == "embedding") return verify_embedding(cfg);
    return verify_besov(cfg);
  };
  for (auto& [sub, _] : commands) add_common(sub, opt);

  std::vector<const char*> argv{"sigdet"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfigError;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    const auto cfg = load_config(opt);
    Outcome o = commands.at(chosen)(cfg);
    o.text += ranges_note(cfg);
    if (opt.out_path.empty()) {
      out << payload(o, cfg.format);
    } else {
      std::ofstream file(opt.out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + opt.out_path + "'");
      file << payload(o, cfg.format);
      out << o.text;
    }
    return o.code;
  } catch (const ConstantTooSmall& e) {
    err << "error: " << e.what() << '\n';
    return kExitConstantTooSmall;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}

}  // namespace sigdet
