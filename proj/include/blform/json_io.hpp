#pragma once

#include <string>

#include "json.hpp"

#include "blform/cauchy_family.hpp"
#include "blform/estimator.hpp"
#include "blform/polytope.hpp"
#include "blform/test_function.hpp"
#include "blform/vector_matroid.hpp"

namespace blform::jsonio {

using json = nlohmann::json;

// Exact rationals cross the boundary as strings ("p/q" or "p"); doubles are
// carried as strings with 17 significant digits so output is byte-stable and
// round-trips losslessly.
std::string format_double(double v);
double parse_double(const json& j, const std::string& context);

Rational rational_from_json(const json& j, const std::string& context);
json rational_to_json(const Rational& r);

const json& require(const json& j, const std::string& key, const std::string& context);

VectorMatroid matroid_from_json(const json& j);
json matroid_to_json(const VectorMatroid& m);

SubsetMask subset_from_json(const json& j, std::size_t m, const std::string& context);
json subset_to_json(SubsetMask s);

// Accepts either a bare array of rationals or {"theta": [...], "lorentz_q": [...]}
// (secondary indices are rationals or "inf").
ExponentTuple exponent_tuple_from_json(const json& j);
json exponent_tuple_to_json(const ExponentTuple& t);

json verdict_to_json(const MembershipVerdict& v);

TestFunction function_from_json(const json& j, unsigned default_ell = 2);
json function_to_json(const TestFunction& f);

json estimate_to_json(const EstimateResult& r);
json ratio_report_to_json(const RatioReport& r);

}  // namespace blform::jsonio
