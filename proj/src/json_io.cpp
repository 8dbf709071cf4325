#include "blform/json_io.hpp"

#include <cstdio>
#include <cstdlib>

#include "blform/errors.hpp"

namespace blform::jsonio {

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

double parse_double(const json& j, const std::string& context) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end == s.c_str() || *end != '\0')
            throw InputError(context + ": not a number: '" + s + "'");
        return v;
    }
    throw InputError(context + ": expected a number");
}

Rational rational_from_json(const json& j, const std::string& context) {
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const InputError& e) {
            throw InputError(context + ": " + e.what());
        }
    }
    throw InputError(context + ": expected a rational string");
}

json rational_to_json(const Rational& r) { return to_string(r); }

const json& require(const json& j, const std::string& key, const std::string& context) {
    if (!j.is_object()) throw InputError(context + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw InputError(context + ": missing field '" + key + "'");
    return *it;
}

VectorMatroid matroid_from_json(const json& j) {
    const json& dim = require(j, "dimension", "matroid");
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0)
        throw InputError("matroid: 'dimension' must be a positive integer");
    const std::size_t k = dim.get<std::size_t>();
    const json& vecs = require(j, "vectors", "matroid");
    if (!vecs.is_array() || vecs.empty())
        throw InputError("matroid: 'vectors' must be a nonempty array");
    std::vector<std::vector<Rational>> vectors;
    for (const json& row : vecs) {
        if (!row.is_array() || row.size() != k)
            throw InputError("matroid: each vector needs exactly 'dimension' entries");
        std::vector<Rational> v;
        for (const json& entry : row) v.push_back(rational_from_json(entry, "matroid vector"));
        vectors.push_back(std::move(v));
    }
    if (vectors.size() > 64) throw InputError("matroid: at most 64 vectors are supported");
    return VectorMatroid(k, std::move(vectors));
}

json matroid_to_json(const VectorMatroid& m) {
    json vecs = json::array();
    for (const auto& v : m.vectors()) {
        json row = json::array();
        for (const auto& x : v) row.push_back(rational_to_json(x));
        vecs.push_back(std::move(row));
    }
    return json{{"dimension", m.dimension()}, {"vectors", std::move(vecs)}};
}

SubsetMask subset_from_json(const json& j, std::size_t m, const std::string& context) {
    if (!j.is_array()) throw InputError(context + ": expected an array of indices");
    SubsetMask s;
    for (const json& entry : j) {
        if (!entry.is_number_unsigned())
            throw InputError(context + ": indices must be nonnegative integers");
        const std::size_t i = entry.get<std::size_t>();
        if (i >= m) throw InputError(context + ": index out of range");
        s = s.with(i);
    }
    return s;
}

json subset_to_json(SubsetMask s) {
    json out = json::array();
    for (std::size_t i : s.indices()) out.push_back(i);
    return out;
}

ExponentTuple exponent_tuple_from_json(const json& j) {
    ExponentTuple t;
    const json* theta = &j;
    if (j.is_object()) theta = &require(j, "theta", "exponent tuple");
    if (!theta->is_array()) throw InputError("exponent tuple: expected an array of rationals");
    for (const json& entry : *theta) t.theta.push_back(rational_from_json(entry, "theta"));

    if (j.is_object() && j.contains("lorentz_q")) {
        const json& lor = j.at("lorentz_q");
        if (!lor.is_array() || lor.size() != t.theta.size())
            throw InputError("exponent tuple: 'lorentz_q' must match theta in length");
        std::vector<LorentzIndex> qs;
        for (const json& entry : lor) {
            if (entry.is_string() && entry.get<std::string>() == "inf") {
                qs.push_back(LorentzIndex::inf());
            } else {
                Rational v = rational_from_json(entry, "lorentz_q");
                if (v <= 0) throw InputError("exponent tuple: secondary indices must be positive");
                qs.push_back(LorentzIndex::finite(std::move(v)));
            }
        }
        t.lorentz_q = std::move(qs);
    }
    return t;
}

json exponent_tuple_to_json(const ExponentTuple& t) {
    json theta = json::array();
    for (const auto& x : t.theta) theta.push_back(rational_to_json(x));
    json out{{"theta", std::move(theta)}};
    if (t.lorentz_q) {
        json lor = json::array();
        for (const auto& q : *t.lorentz_q)
            lor.push_back(q.infinite ? json("inf") : rational_to_json(q.value));
        out["lorentz_q"] = std::move(lor);
    }
    return out;
}

json verdict_to_json(const MembershipVerdict& v) {
    json out{{"member", v.member}};
    if (v.margin) out["margin"] = rational_to_json(*v.margin);
    if (v.violation) {
        json violation;
        if (const auto* box = std::get_if<BoxViolation>(&*v.violation)) {
            violation = {{"kind", "box"},
                         {"index", box->index},
                         {"value", rational_to_json(box->value)}};
        } else if (const auto* hp = std::get_if<HyperplaneViolation>(&*v.violation)) {
            violation = {{"kind", "hyperplane"},
                         {"sum", rational_to_json(hp->sum)},
                         {"k", hp->expected}};
        } else if (const auto* rank = std::get_if<RankViolation>(&*v.violation)) {
            violation = {{"kind", "rank"},
                         {"subset", subset_to_json(rank->subset)},
                         {"rank", rank->rank},
                         {"theta_sum", rational_to_json(rank->theta_sum)}};
        }
        out["violation"] = std::move(violation);
    }
    return out;
}

TestFunction function_from_json(const json& j, unsigned default_ell) {
    const json& kind = require(j, "kind", "test function");
    if (!kind.is_string()) throw InputError("test function: 'kind' must be a string");
    const std::string name = kind.get<std::string>();

    TestFunction f;
    f.ell = default_ell;
    if (name == "gaussian") {
        f.kind = FunctionKind::gaussian;
        f.width = rational_from_json(require(j, "width", "gaussian"), "gaussian width");
    } else if (name == "disk") {
        f.kind = FunctionKind::disk;
        f.radius = rational_from_json(require(j, "radius", "disk"), "disk radius");
        if (j.contains("center")) {
            const json& c = j.at("center");
            if (!c.is_array() || c.empty() || c.size() > 2)
                throw InputError("disk: 'center' must have one or two entries");
            for (std::size_t i = 0; i < c.size(); ++i)
                f.center[i] = rational_from_json(c[i], "disk center");
        }
    } else if (name == "cauchy") {
        f.kind = FunctionKind::cauchy_kernel;
    } else if (name == "conj-cauchy") {
        f.kind = FunctionKind::conj_cauchy_kernel;
    } else {
        throw InputError("test function: unknown kind '" + name + "'");
    }

    if (j.contains("ell")) {
        const json& ell = j.at("ell");
        if (!ell.is_number_unsigned()) throw InputError("test function: 'ell' must be 1 or 2");
        f.ell = ell.get<unsigned>();
    }
    if (j.contains("amplitude"))
        f.amplitude = rational_from_json(j.at("amplitude"), "test function amplitude");

    try {
        f.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return f;
}

json function_to_json(const TestFunction& f) {
    json out{{"kind", kind_name(f.kind)}};
    if (f.kind == FunctionKind::gaussian) out["width"] = rational_to_json(f.width);
    if (f.kind == FunctionKind::disk) {
        out["radius"] = rational_to_json(f.radius);
        json center = json::array();
        for (unsigned i = 0; i < f.ell; ++i) center.push_back(rational_to_json(f.center[i]));
        out["center"] = std::move(center);
    }
    out["ell"] = f.ell;
    if (f.amplitude != 1) out["amplitude"] = rational_to_json(f.amplitude);
    return out;
}

json estimate_to_json(const EstimateResult& r) {
    json out{{"value", format_double(r.value)},
             {"stderr", format_double(r.std_error)},
             {"value_re", format_double(r.value_re)},
             {"value_im", format_double(r.value_im)},
             {"samples", r.samples},
             {"seed", r.seed},
             {"method", method_name(r.method)}};
    if (!r.warning.empty()) out["warning"] = r.warning;
    return out;
}

json ratio_report_to_json(const RatioReport& r) {
    json out{{"lambda", estimate_to_json(r.lambda)},
             {"norm_product", format_double(r.norm_product)},
             {"ratio", format_double(r.ratio)},
             {"ratio_stderr", format_double(r.ratio_std_error)}};
    if (r.per_step_c) out["per_step_c"] = format_double(*r.per_step_c);
    return out;
}

}  // namespace blform::jsonio
