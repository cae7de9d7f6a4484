#pragma once

#include <json.hpp>
#include <string>

#include "sigdet/detectors.hpp"
#include "sigdet/maxisets.hpp"
#include "sigdet/montecarlo.hpp"

namespace sigdet {

using Json = nlohmann::ordered_json;

Json to_json(const ConstantSet& c);
Json to_json(const McEstimate& e);
/// {member, grid, violations: [{epsilon, lhs, rhs}]}
Json to_json(const MembershipVerdict& v);
Json to_json(const AdmissibilityVerdict& v);
Json to_json(const EmbeddingCheck& e);
Json to_json(const BesovReport& b);
Json to_json(const BoundReport& r);
Json to_json(const SandwichReport& r);
Json to_json(const PowerCurve& p);
Json to_json(const CompareReport& r);

/// RFC-4180 CSV with header "rho,p_reject,se,n,seed".
std::string power_curve_csv(const PowerCurve& p);

/// Shortest round-trip decimal form, independent of the C locale.
std::string format_double(double x);

std::string render_text(const ConstantSet& c);
std::string render_text(const MembershipVerdict& v, const std::string& title);
std::string render_text(const BoundReport& r);
std::string render_text(const SandwichReport& r);
std::string render_text(const PowerCurve& p);
std::string render_text(const CompareReport& r);
std::string render_text(const EmbeddingCheck& e);
std::string render_text(const BesovReport& b, const std::string& title);

}  // namespace sigdet
