#include "sigdet/report.hpp"

#include <charconv>
#include <fmt/format.h>
#include <sstream>

namespace sigdet {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json to_json(const ConstantSet& c) {
  return Json{{"c1", c.c1},     {"c2", c.c2},         {"cmax", c.cmax},
              {"cmin", c.cmin}, {"cmax_p", c.cmax_p}, {"cmin_p", c.cmin_p}};
}

Json to_json(const McEstimate& e) {
  return Json{{"p_hat", e.p_hat}, {"count", e.count}, {"n", e.n}, {"se", e.se}, {"seed", e.master_seed}};
}

Json to_json(const MembershipVerdict& v) {
  Json violations = Json::array();
  for (const auto& x : v.violations) {
    violations.push_back({{"epsilon", x.epsilon}, {"lhs", x.lhs}, {"rhs", x.rhs}});
  }
  return Json{{"member", v.member}, {"grid", v.grid}, {"violations", violations}};
}

Json to_json(const AdmissibilityVerdict& v) {
  Json slack = Json::array();
  for (const auto& s : v.slack) slack.push_back({{"epsilon", s.epsilon}, {"slack", s.slack}});
  return Json{{"admissible", v.admissible}, {"slack", slack}};
}

Json to_json(const EmbeddingCheck& e) {
  Json j{{"holds", e.holds}, {"k_max", e.k_max}, {"critical_ratio", e.critical_ratio}};
  if (e.first_violation) {
    j["first_violation"] = {{"k", *e.first_violation}, {"lhs", e.lhs}, {"rhs", e.rhs}};
  } else {
    j["first_violation"] = nullptr;
  }
  return j;
}

Json to_json(const BesovReport& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows) rows.push_back({{"K", r.K}, {"value", r.value}});
  return Json{{"sup", b.sup}, {"rows", rows}};
}

Json to_json(const BoundReport& r) {
  return Json{{"detector", to_string(r.detector)},
              {"case", to_string(r.bound)},
              {"epsilon", r.epsilon},
              {"D", r.D},
              {"spike_k", r.spike_k},
              {"constant", r.constant},
              {"noise_level", r.noise_level},
              {"energy", r.energy},
              {"beta", r.beta},
              {"margin", r.margin},
              {"type2", to_json(r.type2)},
              {"limit", r.limit},
              {"pass", r.pass}};
}

Json to_json(const SandwichReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j{{"epsilon", row.epsilon},         {"D", row.D},
           {"rate", row.rate},               {"triggered", row.triggered},
           {"energy", row.energy},           {"upper_bound", row.upper_bound},
           {"lower_bound", row.lower_bound}, {"above_upper", row.above_upper},
           {"below_lower", row.below_lower}};
    j["type2"] = row.type2 ? to_json(*row.type2) : Json(nullptr);
    j["pass"] = row.pass;
    rows.push_back(std::move(j));
  }
  return Json{{"side", to_string(r.side)},
              {"member_upper", r.member_upper},
              {"member_lower", r.member_lower},
              {"member_dec_upper", r.member_dec_upper},
              {"rows", rows},
              {"pass", r.pass}};
}

Json to_json(const PowerCurve& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) rows.push_back({{"rho", r.rho}, {"reject", to_json(r.reject)}});
  return Json{{"detector", to_string(p.detector)},
              {"epsilon", p.epsilon},
              {"D", p.D},
              {"constant", p.constant},
              {"beta", p.beta},
              {"rows", rows},
              {"separation_rho", p.separation_rho ? Json(*p.separation_rho) : Json(nullptr)},
              {"flagged_drops", p.flagged_drops}};
}

Json to_json(const CompareReport& r) {
  Json design = Json::array();
  for (std::size_t i = 0; i < r.design.size(); ++i) {
    design.push_back({{"epsilon", r.design[i].epsilon},
                      {"D", r.design[i].D},
                      {"r", r.design[i].rate},
                      {"mu", r.mu[i]}});
  }
  Json cands = Json::array();
  for (const auto& c : r.candidates) {
    Json ip = Json::array();
    Json dp = Json::array();
    for (const auto& e : c.ip_power) ip.push_back(to_json(e));
    for (const auto& e : c.dp_power) dp.push_back(to_json(e));
    cands.push_back({{"name", c.name},
                     {"f_dec_cmax", to_json(c.f_dec_upper)},
                     {"f_dec_cmin", to_json(c.f_dec_lower)},
                     {"g_dec_cmax_p", to_json(c.g_dec_upper)},
                     {"g_dec_cmin_p", to_json(c.g_dec_lower)},
                     {"ip_power", ip},
                     {"dp_power", dp}});
  }
  const auto& p = r.probe;
  Json probe{{"epsilon", p.epsilon},
             {"D", p.D},
             {"k", p.k},
             {"ip_separation_energy", p.ip_separation},
             {"dp_separation_energy", p.dp_separation},
             {"energy", p.energy},
             {"ip_power", to_json(p.ip_power)},
             {"dp_power", to_json(p.dp_power)},
             {"dp_detects_ip_misses", p.dp_detects_ip_misses}};
  return Json{{"s", r.s},
              {"t", r.t},
              {"constants", to_json(r.constants)},
              {"schedule", design},
              {"candidates", cands},
              {"spike_probe", probe}};
}

std::string power_curve_csv(const PowerCurve& p) {
  std::string out = "rho,p_reject,se,n,seed\r\n";
  for (const auto& r : p.rows) {
    out += format_double(r.rho) + "," + format_double(r.reject.p_hat) + "," + format_double(r.reject.se) +
           "," + std::to_string(r.reject.n) + "," + std::to_string(r.reject.master_seed) + "\r\n";
  }
  return out;
}

std::string render_text(const ConstantSet& c) {
  return fmt::format(
      "C1      {:>14.6f}\nC2      {:>14.6f}\nCmax    {:>14.6f}\nCmin    {:>14.6f}\n"
      "Cmax'   {:>14.6f}\nCmin'   {:>14.6f}\n",
      c.c1, c.c2, c.cmax, c.cmin, c.cmax_p, c.cmin_p);
}

std::string render_text(const MembershipVerdict& v, const std::string& title) {
  std::string out = fmt::format("{}: {}\n", title, v.member ? "member" : "not a member");
  out += fmt::format("  checked on {} grid points, eps in [{:.6g}, {:.6g}]\n", v.grid.size(),
                     v.grid.empty() ? 0.0 : v.grid.back(), v.grid.empty() ? 0.0 : v.grid.front());
  for (const auto& x : v.violations) {
    out += fmt::format("  violated at eps={:<12.6g} lhs={:<14.6g} rhs={:.6g}\n", x.epsilon, x.lhs, x.rhs);
  }
  return out;
}

std::string render_text(const BoundReport& r) {
  return fmt::format(
      "detector={} case=({}) eps={:.6g} D={} spike_k={}\n"
      "  constant={:.6g} energy={:.6g} (noise level {:.6g}, margin {:.3g})\n"
      "  type-II={:.6f} se={:.6f} n={} limit={:.6f} -> {}\n",
      to_string(r.detector), to_string(r.bound), r.epsilon, r.D, r.spike_k, r.constant, r.energy,
      r.noise_level, r.margin, r.type2.p_hat, r.type2.se, r.type2.n, r.limit, r.pass ? "PASS" : "FAIL");
}

std::string render_text(const SandwichReport& r) {
  std::string out = fmt::format("side={} member(Cmax)={} member(Cmin)={} member_dec(Cmax)={}\n",
                                to_string(r.side), r.member_upper, r.member_lower, r.member_dec_upper);
  out += fmt::format("  {:>10} {:>6} {:>10} {:>5} {:>12} {:>12} {:>12} {:>9} {:>5}\n", "eps", "D", "rate",
                     "trig", "energy", "Cmax-bound", "Cmin-bound", "type-II", "ok");
  for (const auto& row : r.rows) {
    out += fmt::format("  {:>10.5g} {:>6} {:>10.5g} {:>5} {:>12.5g} {:>12.5g} {:>12.5g} {:>9} {:>5}\n",
                       row.epsilon, row.D, row.rate, row.triggered ? "yes" : "no", row.energy,
                       row.upper_bound, row.lower_bound,
                       row.type2 ? fmt::format("{:.5f}", row.type2->p_hat) : std::string("-"),
                       row.pass ? "yes" : "NO");
  }
  out += fmt::format("  eps grid of {} points stands in for all eps in (0,1)\n", r.rows.size());
  return out;
}

std::string render_text(const PowerCurve& p) {
  std::string out = fmt::format("detector={} eps={:.6g} D={} constant={:.6g}\n", to_string(p.detector),
                                p.epsilon, p.D, p.constant);
  out += fmt::format("  {:>12} {:>10} {:>10}\n", "rho", "p_reject", "se");
  for (const auto& r : p.rows) {
    out += fmt::format("  {:>12.6g} {:>10.5f} {:>10.5f}\n", r.rho, r.reject.p_hat, r.reject.se);
  }
  if (p.separation_rho) {
    out += fmt::format("  power reaches 1-beta={:.3g} at rho={:.6g}\n", 1.0 - p.beta, *p.separation_rho);
  } else {
    out += fmt::format("  power never reaches 1-beta={:.3g}\n", 1.0 - p.beta);
  }
  for (std::size_t i : p.flagged_drops) out += fmt::format("  FLAG: power drop at rho={:.6g}\n", p.rows[i].rho);
  return out;
}

std::string render_text(const CompareReport& r) {
  std::string out = fmt::format("s={} t={}\n", r.s, r.t);
  out += render_text(r.constants);
  for (const auto& c : r.candidates) {
    out += fmt::format("\n{}\n", c.name);
    out += fmt::format("  F^dec(Cmax)={} F^dec(Cmin)={} G^dec(Cmax')={} G^dec(Cmin')={}\n", c.f_dec_upper.member,
                       c.f_dec_lower.member, c.g_dec_upper.member, c.g_dec_lower.member);
    out += fmt::format("  {:>10} {:>6} {:>10} {:>10} {:>9} {:>9}\n", "eps", "D", "r", "mu", "IP power",
                       "DP power");
    for (std::size_t i = 0; i < r.design.size(); ++i) {
      out += fmt::format("  {:>10.5g} {:>6} {:>10.5g} {:>10.5g} {:>9.4f} {:>9.4f}\n", r.design[i].epsilon,
                         r.design[i].D, r.design[i].rate, r.mu[i], c.ip_power[i].p_hat, c.dp_power[i].p_hat);
    }
  }
  const auto& p = r.probe;
  out += fmt::format(
      "\nspike probe at k={} eps={:.5g} D={}: separation energy IP={:.6g} DP={:.6g}\n"
      "  at energy {:.6g}: IP power={:.4f} DP power={:.4f} -> DP detects, IP misses: {}\n",
      p.k, p.epsilon, p.D, p.ip_separation, p.dp_separation, p.energy, p.ip_power.p_hat, p.dp_power.p_hat,
      p.dp_detects_ip_misses ? "yes" : "no");
  return out;
}

std::string render_text(const EmbeddingCheck& e) {
  std::string out = fmt::format("embedding condition on k <= {}: {}\n", e.k_max, e.holds ? "holds" : "violated");
  if (e.first_violation) {
    out += fmt::format("  first violation at k={}: Cmax' sqrt(k)={:.6g} > Cmin b_k^2 sqrt(sum b^-4)={:.6g}\n",
                       *e.first_violation, e.lhs, e.rhs);
  }
  out += fmt::format("  largest admissible Cmax'/Cmin on this range: {:.6g}\n", e.critical_ratio);
  return out;
}

std::string render_text(const BesovReport& b, const std::string& title) {
  std::string out = fmt::format("{} (sup over listed K = {:.6g})\n", title, b.sup);
  for (const auto& r : b.rows) out += fmt::format("  K={:<9} {:.10g}\n", r.K, r.value);
  return out;
}

}  // namespace sigdet
