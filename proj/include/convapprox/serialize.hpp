#ifndef CONVAPPROX_SERIALIZE_HPP
#define CONVAPPROX_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "convapprox/bounds.hpp"
#include "convapprox/netbuild.hpp"
#include "convapprox/neteval.hpp"
#include "convapprox/polyfactor.hpp"

namespace convapprox {

using json = nlohmann::json;

json filter_to_json(const Filter& f);
Filter filter_from_json(const json& j);

json factorization_to_json(const Factorization& fac);

/// Monomial map keyed by multi-index strings, e.g. {"[2,0,0]": 1.0}.
json feature_polynomial_to_json(const FeaturePolynomial& poly);
FeaturePolynomial feature_polynomial_from_json(const json& j, int dim);

/// Versioned network document: {version, d, s, N, J1, J2, layers, fc_row,
/// fc_bias, c, meta}. Round-trips to a spec whose forward pass is bit-equal.
json network_to_json(const NetworkSpec& spec);
NetworkSpec network_from_json(const json& j);

json membership_to_json(const MembershipReport& report);
json bound_report_to_json(const BoundReport& report);

/// Target descriptors: {"name": "identity"|"constant"|"abs"|"sqrt"|"sin",
/// "a": shift, "value": constant, "freq": frequency}. The native domain is
/// supplied by the caller (it depends on B_Q).
TargetFunction target_from_json(const json& j, double lo, double hi);

json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace convapprox

#endif
