#include "doctest.h"

#include <cmath>
#include <numbers>

#include "blform/errors.hpp"
#include "blform/estimator.hpp"
#include "blform/test_function.hpp"

using namespace blform;

namespace {

constexpr double kPi = std::numbers::pi;

FormInstance gaussian_triple() {
    FormInstance form;
    form.k = 2;
    form.ell = 1;
    form.vectors = {{1, 0}, {0, 1}, {1, 1}};
    form.functions = {TestFunction::make_gaussian(1, 1), TestFunction::make_gaussian(1, 1),
                      TestFunction::make_gaussian(1, 1)};
    return form;
}

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

}  // namespace

TEST_CASE("lp_norm closed forms") {
    const auto disk = TestFunction::make_disk(1);
    CHECK(lp_norm(disk, Rational(1, 2)) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK(lp_norm(disk, 1) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(lp_norm(disk, 0) == 1.0);

    const auto gauss = TestFunction::make_gaussian(1);
    CHECK(lp_norm(gauss, Rational(1, 2)) ==
          doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
    CHECK(lp_norm(gauss, 1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lp_norm(gauss, 0) == 1.0);

    // One-dimensional variants.
    const auto gauss1 = TestFunction::make_gaussian(1, 1);
    CHECK(lp_norm(gauss1, 1) == doctest::Approx(1.0).epsilon(1e-14));
    const auto seg = TestFunction::make_disk(2, {0, 0}, 1);
    CHECK(lp_norm(seg, 1) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("lp_norm kernel cases") {
    const auto kernel = TestFunction::make_cauchy();
    CHECK(lp_norm(kernel, Rational(1, 2), LorentzIndex::inf()) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK(lp_norm(TestFunction::make_conj_cauchy(), Rational(1, 2), LorentzIndex::inf()) ==
          doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
    CHECK_THROWS_AS(lp_norm(kernel, Rational(1, 2), LorentzIndex::finite(2)), DomainError);
    CHECK_THROWS_AS(lp_norm(kernel, Rational(1, 3), LorentzIndex::inf()), DomainError);
    CHECK_THROWS_AS(lp_norm(kernel, Rational(1, 2)), DomainError);
    CHECK_THROWS_AS(lp_norm(TestFunction::make_gaussian(1), Rational(1, 2), LorentzIndex::inf()),
                    std::invalid_argument);
}

TEST_CASE("lp_norm closed forms agree with radial quadrature") {
    const std::vector<TestFunction> functions = {
        TestFunction::make_gaussian(1), TestFunction::make_gaussian(Rational(3, 2)),
        TestFunction::make_gaussian(1, 1), TestFunction::make_disk(1),
        TestFunction::make_disk(Rational(2, 3), {0, 0}, 1)};
    const std::vector<Rational> exponents = {Rational(1), Rational(1, 2), Rational(1, 3),
                                             Rational(2, 3), Rational(9, 10)};
    for (const auto& f : functions)
        for (const auto& theta : exponents)
            CHECK(lp_norm(f, theta) ==
                  doctest::Approx(lp_norm_quadrature(f, theta)).epsilon(1e-9));
}

TEST_CASE("scaling the amplitude scales norms and estimates linearly") {
    auto f = TestFunction::make_gaussian(1);
    f.amplitude = Rational(3, 2);
    CHECK(lp_norm(f, Rational(1, 2)) ==
          doctest::Approx(1.5 * std::sqrt(0.5)).epsilon(1e-14));

    // Power-of-two amplitudes keep floating-point scaling exact bit for bit.
    auto form = gaussian_triple();
    const auto base = eval_general_form(form, 20000, 11);
    form.functions[0].amplitude = 2;
    form.functions[2].amplitude = Rational(1, 4);
    const auto scaled = eval_general_form(form, 20000, 11);
    CHECK(scaled.value == base.value * 0.5);
    CHECK(scaled.std_error == base.std_error * 0.5);
}

TEST_CASE("general form matches the separable closed form") {
    FormInstance form;
    form.k = 2;
    form.ell = 1;
    form.vectors = {{0, 1}, {1, 0}};
    form.functions = {TestFunction::make_gaussian(2, 1),
                      TestFunction::make_disk(1, {0, 0}, 1)};
    const auto exact = separable_closed_form(form);
    CHECK(exact.value == doctest::Approx(2.0 * 2.0).epsilon(1e-14));
    CHECK(exact.method == EstimateMethod::closed_form);

    const auto mc = eval_general_form(form, 200000, 3);
    CHECK(within(mc.value, exact.value, 3.0 * mc.std_error));
}

TEST_CASE("gaussian triple integral has the closed det form") {
    const auto form = gaussian_triple();
    const auto mc = eval_general_form(form, 400000, 5);
    const double target = 1.0 / std::sqrt(3.0);
    CHECK(within(mc.value, target, std::max(3.0 * mc.std_error, 0.01 * target)));

    // Tensor quadrature cross-check on the same instance.
    const auto quad = eval_general_form_quadrature(form);
    CHECK(quad.method == EstimateMethod::tensor_quadrature);
    CHECK(within(quad.value, target, 1e-6));
}

TEST_CASE("general form estimates are deterministic and thread-stable") {
    const auto form = gaussian_triple();
    const auto a = eval_general_form(form, 150000, 7, 1);
    const auto b = eval_general_form(form, 150000, 7, 4);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const auto c = eval_general_form(form, 150000, 8, 2);
    CHECK(a.value != c.value);
}

TEST_CASE("general form rejects kernels and degenerate spans") {
    FormInstance form;
    form.k = 2;
    form.ell = 2;
    form.vectors = {{1, 0}, {0, 1}};
    form.functions = {TestFunction::make_cauchy(), TestFunction::make_gaussian(1)};
    CHECK_THROWS_AS(eval_general_form(form, 100, 0), std::invalid_argument);

    FormInstance degenerate;
    degenerate.k = 2;
    degenerate.ell = 1;
    degenerate.vectors = {{1, 0}, {1, 0}};
    degenerate.functions = {TestFunction::make_gaussian(1, 1), TestFunction::make_gaussian(1, 1)};
    CHECK_THROWS_AS(eval_general_form(degenerate, 100, 0), DomainError);
}

TEST_CASE("basis bound holds for the gaussian triple") {
    // Vertex bound: estimate <= |det|^{-ell} * prod ||a_j||_{theta_j} within
    // Monte Carlo noise, at every 0/1 vertex of the instance's polytope.
    const auto form = gaussian_triple();
    const auto mc = eval_general_form(form, 200000, 17);
    const double l1 = lp_norm(form.functions[0], 1);
    const double sup = lp_norm(form.functions[0], 0);
    // All three basis determinants are unit; bound = l1 * l1 * sup.
    CHECK(mc.value <= l1 * l1 * sup + 3.0 * mc.std_error);
}

TEST_CASE("lambda_0 on unit disks integrates to pi") {
    const auto disk = TestFunction::make_disk(1);
    const auto result = eval_lambda_n(0, disk, {disk}, 400000, 23);
    CHECK(within(result.value, kPi, 3.0 * result.std_error));
    CHECK(result.std_error > 0.0);
    CHECK(result.value_im == 0.0);
}

TEST_CASE("lambda_0 obeys the bilinear norm bound") {
    const auto t = TestFunction::make_gaussian(1);
    const auto q0 = TestFunction::make_disk(1);
    const auto result = eval_lambda_n(0, t, {q0}, 200000, 29);
    const double bound = lp_norm(t, Rational(1, 2)) * lp_norm(q0, Rational(1, 2));
    CHECK(result.value <= bound + 3.0 * result.std_error);
}

TEST_CASE("lambda_1 is seed-stable and reproducible") {
    const auto g = TestFunction::make_gaussian(1);
    const std::vector<TestFunction> q = {g, g, g};
    const auto a = eval_lambda_n(1, g, q, 300000, 101);
    const auto b = eval_lambda_n(1, g, q, 300000, 202);
    const double combined = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.value - b.value) <= 3.0 * combined);

    const auto a_again = eval_lambda_n(1, g, q, 300000, 101);
    CHECK(a.value == a_again.value);
    CHECK(a.std_error == a_again.std_error);

    LambdaOptions two_threads;
    two_threads.threads = 2;
    const auto a_parallel = eval_lambda_n(1, g, q, 300000, 101, two_threads);
    CHECK(a.value == a_parallel.value);
}

TEST_CASE("lambda_1 of radial inputs is essentially real") {
    const auto g = TestFunction::make_gaussian(1);
    const auto r = eval_lambda_n(1, g, {g, g, g}, 400000, 303);
    // Conjugate reflection fixes radial instances, so the imaginary part is
    // pure noise around zero.
    CHECK(std::abs(r.value_im) <= 4.0 * r.std_error);
}

TEST_CASE("lambda_1 conjugate-reflection symmetry for off-center disks") {
    auto t = TestFunction::make_disk(2);
    auto mk = [](Rational cx, Rational cy) {
        return TestFunction::make_disk(1, {std::move(cx), std::move(cy)});
    };
    const std::vector<TestFunction> q = {mk(Rational(1, 2), Rational(1, 3)), mk(0, Rational(-1, 2)),
                                         mk(Rational(-1, 4), Rational(1, 4))};
    std::vector<TestFunction> q_reflected = q;
    for (auto& f : q_reflected) f.center[1] = -f.center[1];

    const auto a = eval_lambda_n(1, t, q, 500000, 404);
    const auto b = eval_lambda_n(1, t, q_reflected, 500000, 505);
    const double combined = std::hypot(a.std_error, b.std_error);
    CHECK(std::abs(a.value - b.value) <= 3.0 * combined);
}

TEST_CASE("lambda options surface truncation warnings") {
    const auto g = TestFunction::make_gaussian(1);
    LambdaOptions tight;
    tight.kernel_radius = 0.5;
    const auto r = eval_lambda_n(1, g, {g, g, g}, 1000, 1, tight);
    CHECK_FALSE(r.warning.empty());
    const auto clean = eval_lambda_n(1, g, {g, g, g}, 1000, 1);
    CHECK(clean.warning.empty());
}

TEST_CASE("eval_lambda_n validates its inputs") {
    const auto g = TestFunction::make_gaussian(1);
    CHECK_THROWS_AS(eval_lambda_n(1, g, {g}, 100, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_lambda_n(0, TestFunction::make_cauchy(), {g}, 100, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(eval_lambda_n(0, g, {g}, 0, 0), std::invalid_argument);
}

TEST_CASE("verify_main_estimate ratios") {
    const auto disk = TestFunction::make_disk(1);
    const auto equal_case = verify_main_estimate(0, disk, {disk}, Rational(1, 2), 300000, 31);
    CHECK(within(equal_case.ratio, 1.0, 3.0 * equal_case.ratio_std_error));
    CHECK_FALSE(equal_case.per_step_c.has_value());

    const auto mixed = verify_main_estimate(0, TestFunction::make_gaussian(1), {disk},
                                            Rational(1, 2), 300000, 37);
    CHECK(mixed.ratio < 1.0);

    const auto g = TestFunction::make_gaussian(1);
    const auto n1 = verify_main_estimate(1, g, {g, g, g}, Rational(1, 2), 300000, 41);
    CHECK(n1.ratio > 0.0);
    CHECK(std::isfinite(n1.ratio));
    REQUIRE(n1.per_step_c.has_value());
    CHECK(*n1.per_step_c == doctest::Approx(n1.ratio));

    CHECK_THROWS_AS(verify_main_estimate(0, disk, {disk}, Rational(2, 3), 100, 0),
                    std::invalid_argument);
}

TEST_CASE("verify ratio is invariant under amplitude scaling") {
    const auto g = TestFunction::make_gaussian(1);
    auto scaled = g;
    scaled.amplitude = 4;  // power of two: exact in floating point
    const auto base = verify_main_estimate(1, g, {g, g, g}, Rational(1, 2), 50000, 53);
    const auto big = verify_main_estimate(1, scaled, {scaled, g, g}, Rational(1, 2), 50000, 53);
    CHECK(base.ratio == big.ratio);
}
