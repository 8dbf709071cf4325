// blform -- exact boundedness region of multilinear forms via matroid
// polytopes, structural checks of the Cauchy-kernel family, and Monte Carlo
// estimates of the singular form. JSON in, JSON out; see the README for the
// subcommand schemas.
//
// Exit codes: 0 success, 1 domain error, 2 malformed input, 3 a verified
// mathematical property failed.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "blform/cauchy_family.hpp"
#include "blform/errors.hpp"
#include "blform/estimator.hpp"
#include "blform/json_io.hpp"
#include "blform/polytope.hpp"

namespace {

using blform::Rational;
using blform::jsonio::json;

struct Options {
    std::string input_path;   // file path, or "-" for stdin
    std::string inline_json;  // takes precedence over input_path
    std::string output_path;  // empty = stdout

    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<std::size_t> seg_samples;
    std::optional<std::string> delta;
    std::optional<std::size_t> n;
    std::optional<unsigned> ell;
    std::optional<std::string> p_recip;
    std::optional<double> kernel_radius;
    std::uint64_t grid_denominator = 1000;
    unsigned threads = 0;
    bool allow_large_n = false;
};

json load_input(const Options& opts) {
    std::string text;
    if (!opts.inline_json.empty()) {
        text = opts.inline_json;
    } else if (opts.input_path == "-") {
        std::ostringstream buffer;
        buffer << std::cin.rdbuf();
        text = buffer.str();
    } else if (!opts.input_path.empty()) {
        std::ifstream file(opts.input_path);
        if (!file) throw blform::InputError("cannot open input file: " + opts.input_path);
        std::ostringstream buffer;
        buffer << file.rdbuf();
        text = buffer.str();
    } else {
        return json::object();
    }
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw blform::InputError(std::string("input is not valid JSON: ") + e.what());
    }
}

void emit(const json& out, const Options& opts) {
    const std::string text = out.dump(2) + "\n";
    if (opts.output_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream file(opts.output_path);
        if (!file) throw blform::InputError("cannot open output file: " + opts.output_path);
        file << text;
    }
}

std::uint64_t seed_of(const Options& opts, const json& input) {
    if (opts.seed) return *opts.seed;
    if (input.contains("seed")) {
        const json& s = input.at("seed");
        if (!s.is_number_unsigned()) throw blform::InputError("'seed' must be a nonnegative integer");
        return s.get<std::uint64_t>();
    }
    return 0;
}

std::size_t samples_of(const Options& opts, const json& input, std::size_t fallback) {
    if (opts.samples) return *opts.samples;
    if (input.contains("samples")) {
        const json& s = input.at("samples");
        if (!s.is_number_unsigned() || s.get<std::size_t>() == 0)
            throw blform::InputError("'samples' must be a positive integer");
        return s.get<std::size_t>();
    }
    return fallback;
}

Rational delta_of(const Options& opts, const json& input, const char* fallback) {
    if (opts.delta) return blform::parse_rational(*opts.delta);
    if (input.contains("delta"))
        return blform::jsonio::rational_from_json(input.at("delta"), "delta");
    return blform::parse_rational(fallback);
}

std::size_t n_of(const Options& opts, const json& input) {
    if (opts.n) return *opts.n;
    if (input.contains("n")) {
        const json& v = input.at("n");
        if (!v.is_number_unsigned()) throw blform::InputError("'n' must be a nonnegative integer");
        return v.get<std::size_t>();
    }
    throw blform::InputError("missing 'n' (provide it in the input JSON or with --n)");
}

blform::VectorMatroid matroid_of(const json& input) {
    return blform::jsonio::matroid_from_json(
        blform::jsonio::require(input, "matroid", "input"));
}

blform::ExponentTuple theta_of(const json& input, const blform::VectorMatroid& m) {
    auto tuple = blform::jsonio::exponent_tuple_from_json(input);
    if (tuple.theta.size() != m.size())
        throw blform::InputError("'theta' length does not match the ground-set size");
    return tuple;
}

// --- subcommand handlers ---------------------------------------------------

int cmd_rank(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto s = blform::jsonio::subset_from_json(
        blform::jsonio::require(input, "subset", "input"), m.size(), "subset");
    emit(json{{"rank", m.rank_of(s)}}, opts);
    return 0;
}

int cmd_closure(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto s = blform::jsonio::subset_from_json(
        blform::jsonio::require(input, "subset", "input"), m.size(), "subset");
    emit(json{{"closure", blform::jsonio::subset_to_json(m.closure_of(s))}}, opts);
    return 0;
}

int cmd_bases(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto bases = m.enumerate_bases();
    json list = json::array();
    for (const auto b : bases) list.push_back(blform::jsonio::subset_to_json(b));
    emit(json{{"count", bases.size()}, {"bases", std::move(list)}}, opts);
    return 0;
}

int cmd_flats(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto& flats = m.enumerate_flats();
    json list = json::array();
    for (const auto& f : flats)
        list.push_back(json{{"subset", blform::jsonio::subset_to_json(f.set)}, {"rank", f.rank}});
    emit(json{{"count", flats.size()}, {"flats", std::move(list)}}, opts);
    return 0;
}

int cmd_membership(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto theta = theta_of(input, m);
    emit(blform::jsonio::verdict_to_json(blform::membership(m, theta)), opts);
    return 0;
}

int cmd_margin(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    const auto theta = theta_of(input, m);
    emit(json{{"margin", blform::jsonio::rational_to_json(blform::margin(m, theta))}}, opts);
    return 0;
}

int cmd_vertices(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    json list = json::array();
    for (const auto& v : blform::vertices(m)) {
        json row = json::array();
        for (const auto& x : v.theta) row.push_back(blform::jsonio::rational_to_json(x));
        list.push_back(std::move(row));
    }
    emit(json{{"count", list.size()}, {"vertices", std::move(list)}}, opts);
    return 0;
}

int cmd_constant(const Options& opts) {
    const json input = load_input(opts);
    const auto m = matroid_of(input);
    unsigned ell = 0;
    if (opts.ell) {
        ell = *opts.ell;
    } else if (input.contains("ell")) {
        const json& e = input.at("ell");
        if (!e.is_number_unsigned() || e.get<unsigned>() == 0)
            throw blform::InputError("'ell' must be a positive integer");
        ell = e.get<unsigned>();
    } else {
        throw blform::InputError("missing 'ell' (provide it in the input JSON or with --ell)");
    }
    emit(json{{"constant", blform::jsonio::rational_to_json(blform::bl_constant(m, ell))}}, opts);
    return 0;
}

int cmd_family_build(const Options& opts) {
    const json input = load_input(opts);
    const auto inst = blform::build_family(n_of(opts, input), opts.allow_large_n);
    emit(json{{"n", inst.n},
              {"k", inst.k},
              {"m", inst.m},
              {"ell", inst.ell},
              {"matroid", blform::jsonio::matroid_to_json(inst.matroid)}},
         opts);
    return 0;
}

int cmd_family_verify(const Options& opts) {
    const json input = load_input(opts);
    const auto inst = blform::build_family(n_of(opts, input), opts.allow_large_n);
    const Rational delta = delta_of(opts, input, "1/10");
    const std::size_t sample_count = samples_of(opts, input, 1000);
    const std::uint64_t seed = seed_of(opts, input);
    std::size_t seg_count = opts.seg_samples.value_or(100);
    if (!opts.seg_samples && input.contains("seg_samples"))
        seg_count = input.at("seg_samples").get<std::size_t>();

    bool property_failed = false;

    const auto dets = blform::verify_all_base_dets(inst, opts.threads);
    if (!dets.all_unit) property_failed = true;

    const auto center_verdict = blform::membership(
        inst.matroid, blform::ExponentTuple::constant(inst.m, Rational(1, 2)));
    if (!center_verdict.member || *center_verdict.margin <= 0) property_failed = true;

    const auto samples =
        blform::sample_p_delta(inst, delta, sample_count, seed, opts.grid_denominator);
    const auto report = blform::verify_p_delta_inclusion(inst, delta, samples, opts.threads);
    if (report.violations > 0 && delta <= Rational(1, 10)) property_failed = true;

    json p_delta{{"delta", blform::jsonio::rational_to_json(delta)},
                 {"samples", report.samples},
                 {"seed", seed},
                 {"violations", report.violations}};
    if (report.min_margin)
        p_delta["min_margin"] = blform::jsonio::rational_to_json(*report.min_margin);
    if (report.first_violation) {
        p_delta["first_violation"] = blform::jsonio::verdict_to_json(*report.first_violation);
        p_delta["first_violation_index"] = *report.first_violation_index;
    }

    // Segment estimate across every interval and the first seg_count samples.
    const auto intervals = blform::all_intervals(inst);
    std::optional<Rational> min_slack;
    std::size_t seg_violations = 0;
    const std::size_t seg_used = std::min(seg_count, samples.size());
    for (std::size_t i = 0; i < seg_used; ++i) {
        for (const auto& interval : intervals) {
            const auto bound = blform::verify_interval_bound(inst, samples[i], interval);
            if (!bound.holds) ++seg_violations;
            if (!min_slack || bound.slack < *min_slack) min_slack = bound.slack;
        }
    }
    if (seg_violations > 0) property_failed = true;

    // Six-point induction geometry at the center of every block.
    const blform::PDeltaPoint center{
        blform::ExponentTuple::constant(inst.m, Rational(1, 2)), Rational(1, 10)};
    bool induction_ok = true;
    for (std::size_t block = 0; block < inst.n; ++block) {
        const auto hood = blform::induction_neighborhood(inst, block, center);
        if (hood.tau != Rational(1, 10)) induction_ok = false;
        for (const auto& p : hood.points)
            if (!blform::membership(inst.matroid, p.theta).member) induction_ok = false;
    }
    if (!induction_ok) property_failed = true;

    json out{{"n", inst.n},
             {"k", inst.k},
             {"m", inst.m},
             {"bases", dets.count},
             {"all_unit_det", dets.all_unit},
             {"interior_margin",
              center_verdict.margin ? blform::jsonio::rational_to_json(*center_verdict.margin)
                                    : json()},
             {"p_delta", std::move(p_delta)},
             {"seg_est", json{{"intervals", intervals.size()},
                              {"samples", seg_used},
                              {"violations", seg_violations}}},
             {"seg_est_min_slack",
              min_slack ? blform::jsonio::rational_to_json(*min_slack) : json()},
             {"induction",
              json{{"blocks", inst.n}, {"points", 6 * inst.n}, {"all_member", induction_ok}}}};
    emit(out, opts);
    return property_failed ? 3 : 0;
}

blform::LambdaOptions lambda_options(const Options& opts, const json& input) {
    blform::LambdaOptions lo;
    lo.threads = opts.threads;
    if (opts.kernel_radius) {
        lo.kernel_radius = *opts.kernel_radius;
    } else if (input.contains("kernel_radius")) {
        lo.kernel_radius = blform::jsonio::parse_double(input.at("kernel_radius"), "kernel_radius");
    }
    return lo;
}

int cmd_estimate(const Options& opts) {
    const json input = load_input(opts);
    const std::uint64_t seed = seed_of(opts, input);
    const std::size_t samples = samples_of(opts, input, 100000);

    if (input.contains("vectors")) {
        // General (kernel-free) form.
        blform::FormInstance form;
        const json& kj = blform::jsonio::require(input, "k", "general form");
        if (!kj.is_number_unsigned()) throw blform::InputError("general form: 'k' must be an integer");
        form.k = kj.get<std::size_t>();
        if (input.contains("ell")) form.ell = input.at("ell").get<unsigned>();
        for (const json& row : blform::jsonio::require(input, "vectors", "general form")) {
            std::vector<Rational> v;
            for (const json& entry : row)
                v.push_back(blform::jsonio::rational_from_json(entry, "form vector"));
            form.vectors.push_back(std::move(v));
        }
        for (const json& fj : blform::jsonio::require(input, "functions", "general form"))
            form.functions.push_back(blform::jsonio::function_from_json(fj, form.ell));
        try {
            form.validate();
        } catch (const std::invalid_argument& e) {
            throw blform::InputError(e.what());
        }
        emit(blform::jsonio::estimate_to_json(
                 blform::eval_general_form(form, samples, seed, opts.threads)),
             opts);
        return 0;
    }

    const std::size_t n = n_of(opts, input);
    const auto t = blform::jsonio::function_from_json(
        blform::jsonio::require(input, "t", "singular form"));
    std::vector<blform::TestFunction> q;
    for (const json& fj : blform::jsonio::require(input, "q", "singular form"))
        q.push_back(blform::jsonio::function_from_json(fj));
    if (q.size() != 2 * n + 1)
        throw blform::InputError("singular form: 'q' must list exactly 2n+1 functions");
    emit(blform::jsonio::estimate_to_json(
             blform::eval_lambda_n(n, t, q, samples, seed, lambda_options(opts, input))),
         opts);
    return 0;
}

int cmd_verify_estimate(const Options& opts) {
    const json input = load_input(opts);
    const std::uint64_t seed = seed_of(opts, input);
    const std::size_t samples = samples_of(opts, input, 100000);
    const std::size_t n = n_of(opts, input);

    Rational p_recip(1, 2);
    if (opts.p_recip) {
        p_recip = blform::parse_rational(*opts.p_recip);
    } else if (input.contains("p_recip")) {
        p_recip = blform::jsonio::rational_from_json(input.at("p_recip"), "p_recip");
    }

    const auto t = blform::jsonio::function_from_json(
        blform::jsonio::require(input, "t", "singular form"));
    std::vector<blform::TestFunction> q;
    for (const json& fj : blform::jsonio::require(input, "q", "singular form"))
        q.push_back(blform::jsonio::function_from_json(fj));
    if (q.size() != 2 * n + 1)
        throw blform::InputError("singular form: 'q' must list exactly 2n+1 functions");

    const auto report =
        blform::verify_main_estimate(n, t, q, p_recip, samples, seed, lambda_options(opts, input));
    json out = blform::jsonio::ratio_report_to_json(report);
    out["n"] = n;
    out["p_recip"] = blform::jsonio::rational_to_json(p_recip);
    emit(out, opts);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact matroid-polytope boundedness checks and singular-form estimates"};
    app.require_subcommand(1);

    Options opts;
    int (*handler)(const Options&) = nullptr;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("input", opts.input_path, "input JSON file ('-' for stdin)");
        sub->add_option("--json", opts.inline_json, "inline input JSON");
        sub->add_option("-o,--output", opts.output_path, "output path (default stdout)");
        sub->add_option("--threads", opts.threads, "worker threads (0 = hardware)")
            ->envname("BLFORM_THREADS");
    };
    auto add_seeded = [&](CLI::App* sub) {
        sub->add_option("--seed", opts.seed, "override the RNG seed");
        sub->add_option("--samples", opts.samples, "override the sample count");
    };

    struct SubSpec {
        const char* name;
        const char* help;
        int (*fn)(const Options&);
        bool seeded;
        bool family;
        bool estimator;
    };
    const SubSpec specs[] = {
        {"rank", "rank of a subset of the ground set", cmd_rank, false, false, false},
        {"closure", "closure (span) of a subset", cmd_closure, false, false, false},
        {"bases", "enumerate all bases", cmd_bases, false, false, false},
        {"flats", "enumerate all flats with their ranks", cmd_flats, false, false, false},
        {"membership", "decide whether theta lies in the basis polytope", cmd_membership, false,
         false, false},
        {"margin", "exact slack of theta against the polytope constraints", cmd_margin, false,
         false, false},
        {"vertices", "indicator vertices of the basis polytope", cmd_vertices, false, false,
         false},
        {"constant", "interpolation constant max |det|^-ell over bases", cmd_constant, false,
         false, false},
        {"family-build", "construct the Cauchy-kernel family matroid", cmd_family_build, false,
         true, false},
        {"family-verify", "run every structural check of the family", cmd_family_verify, true,
         true, false},
        {"estimate", "Monte Carlo estimate of a multilinear form", cmd_estimate, true, false,
         true},
        {"verify-estimate", "estimate and compare against the norm product", cmd_verify_estimate,
         true, false, true},
    };

    for (const auto& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        add_common(sub);
        if (spec.seeded) add_seeded(sub);
        if (spec.family) {
            sub->add_option("--n", opts.n, "family size parameter n");
            sub->add_option("--delta", opts.delta, "box half-width delta (rational)");
            sub->add_option("--seg-samples", opts.seg_samples,
                            "samples for the segment-estimate sweep");
            sub->add_option("--grid-denominator", opts.grid_denominator,
                            "denominator of the exact sampling grid");
            sub->add_flag("--allow-large-n", opts.allow_large_n,
                          "lift the default cap on n");
        }
        if (spec.estimator) {
            sub->add_option("--n", opts.n, "number of kernel pairs n");
            sub->add_option("--ell", opts.ell, "ell override for the interpolation constant");
            sub->add_option("--p-recip", opts.p_recip, "reciprocal exponent for t (rational)");
            sub->add_option("--kernel-radius", opts.kernel_radius,
                            "truncation radius for kernel variables");
        }
        if (std::string(spec.name) == "constant")
            sub->add_option("--ell", opts.ell, "power of the inverse determinant");
        sub->callback([&handler, fn = spec.fn] { handler = fn; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return handler(opts);
    } catch (const blform::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const blform::jsonio::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const blform::PropertyViolation& e) {
        std::cerr << "property violation: " << e.what() << "\n";
        return 3;
    } catch (const blform::DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
