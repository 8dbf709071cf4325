#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blform/rational.hpp"
#include "blform/test_function.hpp"

namespace blform {

enum class EstimateMethod { monte_carlo, tensor_quadrature, closed_form };

std::string method_name(EstimateMethod method);

struct EstimateResult {
    double value = 0.0;  // modulus of the (possibly complex) mean estimate
    double std_error = 0.0;
    double value_re = 0.0;
    double value_im = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    EstimateMethod method = EstimateMethod::monte_carlo;
    std::string warning;  // nonempty when the result carries a caveat
};

// A concrete multilinear form: m vectors in Q^k paired with m test
// functions on R^ell. Rational data is converted to double at evaluation.
struct FormInstance {
    std::size_t k = 0;
    unsigned ell = 2;
    std::vector<std::vector<Rational>> vectors;
    std::vector<TestFunction> functions;

    void validate() const;
    bool has_kernel() const;
};

// Monte Carlo estimate of the integral of prod_j a_j(f_j . x) over R^{k*ell},
// with a Gaussian importance proposal matched to the integrand's decay.
// Kernels are rejected (use eval_lambda_n). Sampling is chunked; chunk c
// draws from stream (seed, c) and chunks are combined in index order, so the
// result is bit-identical for fixed (seed, samples) regardless of threads.
EstimateResult eval_general_form(const FormInstance& form, std::size_t samples,
                                 std::uint64_t seed, unsigned threads = 0);

// Tensor-product Simpson cross-check; only for ell = 1, k <= 3, kernel-free
// instances with smooth (gaussian) factors.
EstimateResult eval_general_form_quadrature(const FormInstance& form,
                                            std::size_t points_per_dim = 129);

// Exact product value for separable instances (vectors = distinct standard
// basis vectors, m = k).
EstimateResult separable_closed_form(const FormInstance& form);

struct LambdaOptions {
    double kernel_radius = 0.0;  // 0 = auto (6x the largest function scale)
    unsigned threads = 0;        // 0 = hardware concurrency
};

// Monte Carlo estimate of the singular form on C^{2n+1} with 2n alternating
// Cauchy-kernel factors (the first unconjugated, the rest conjugated),
// evaluated after the difference substitution y_0 = x_0, y_j = x_{j-1} - x_j
// (unit Jacobian). Each kernel variable is drawn from the density
// 1/(2 pi R |y|) on the disk |y| <= R, which cancels the kernel modulus in
// the weight. t and the q_j must be gaussian or disk kinds.
EstimateResult eval_lambda_n(std::size_t n, const TestFunction& t,
                             const std::vector<TestFunction>& q, std::size_t samples,
                             std::uint64_t seed, const LambdaOptions& options = {});

struct RatioReport {
    EstimateResult lambda;
    double norm_product = 0.0;
    double ratio = 0.0;
    double ratio_std_error = 0.0;
    std::optional<double> per_step_c;  // ratio^{1/n}, defined for n >= 1
};

// Ratio of |Lambda_n| against the norm product
//   ||t||_{p_recip} * ||q_0||_{1 - p_recip} * prod_{j>=1} ||q_j||_{1/2},
// reported with its standard error; requires |p_recip - 1/2| < 1/10.
RatioReport verify_main_estimate(std::size_t n, const TestFunction& t,
                                 const std::vector<TestFunction>& q, const Rational& p_recip,
                                 std::size_t samples, std::uint64_t seed,
                                 const LambdaOptions& options = {});

}  // namespace blform
