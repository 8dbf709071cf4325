#include "blform/estimator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "blform/errors.hpp"
#include "blform/rng.hpp"

namespace blform {

namespace {

constexpr std::size_t kChunk = 1 << 16;
constexpr double kPi = std::numbers::pi;

struct ChunkSums {
    double sum_re = 0.0;
    double sum_im = 0.0;
    double sq_re = 0.0;
    double sq_im = 0.0;

    void add(std::complex<double> w) {
        sum_re += w.real();
        sum_im += w.imag();
        sq_re += w.real() * w.real();
        sq_im += w.imag() * w.imag();
    }
};

// Runs the chunked, order-independent accumulation. sample_one must be a
// pure function of the stream it is handed.
template <typename Sampler>
EstimateResult run_monte_carlo(std::size_t samples, std::uint64_t seed, unsigned threads,
                               const Sampler& sample_one) {
    if (samples == 0) throw std::invalid_argument("monte carlo: sample count must be positive");

    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<ChunkSums> partial(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        RngStream rng(seed, c);
        const std::size_t begin = c * kChunk;
        const std::size_t count = std::min(kChunk, samples - begin);
        ChunkSums sums;
        for (std::size_t i = 0; i < count; ++i) sums.add(sample_one(rng));
        partial[c] = sums;
    });

    ChunkSums total;
    for (const ChunkSums& p : partial) {
        total.sum_re += p.sum_re;
        total.sum_im += p.sum_im;
        total.sq_re += p.sq_re;
        total.sq_im += p.sq_im;
    }

    const double n = static_cast<double>(samples);
    const double mean_re = total.sum_re / n;
    const double mean_im = total.sum_im / n;
    double var = 0.0;
    if (samples > 1) {
        const double var_re = std::max(0.0, (total.sq_re - n * mean_re * mean_re) / (n - 1.0));
        const double var_im = std::max(0.0, (total.sq_im - n * mean_im * mean_im) / (n - 1.0));
        var = var_re + var_im;
    }

    EstimateResult result;
    result.value_re = mean_re;
    result.value_im = mean_im;
    result.value = std::hypot(mean_re, mean_im);
    result.std_error = std::sqrt(var / n);
    result.samples = samples;
    result.seed = seed;
    result.method = EstimateMethod::monte_carlo;
    return result;
}

// Lower-triangular Cholesky factor of a symmetric positive definite matrix;
// DomainError when the matrix is not (numerically) positive definite.
std::vector<double> cholesky(const std::vector<double>& a, std::size_t k) {
    std::vector<double> l(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= l[i * k + p] * l[j * k + p];
            if (i == j) {
                if (s <= 0.0)
                    throw DomainError(
                        "integrand is not integrable: the vectors do not span the space");
                l[i * k + i] = std::sqrt(s);
            } else {
                l[i * k + j] = s / l[j * k + j];
            }
        }
    }
    return l;
}

// Gaussian proposal with density det(C)^{ell/2} exp(-pi sum_s x_s^T C x_s),
// applied slice-wise to the ell coordinate slices of (R^ell)^k.
struct GaussianProposal {
    std::size_t k;
    std::vector<double> chol;  // C = L L^T
    double log_det_c;

    static GaussianProposal from_form_matrix(const std::vector<double>& c, std::size_t k) {
        GaussianProposal p;
        p.k = k;
        p.chol = cholesky(c, k);
        p.log_det_c = 0.0;
        for (std::size_t i = 0; i < k; ++i) p.log_det_c += 2.0 * std::log(p.chol[i * k + i]);
        return p;
    }

    // One slice: z with density exp(-pi |z|^2), then solve L^T x = z.
    void sample_slice(RngStream& rng, std::vector<double>& x) const {
        thread_local std::vector<double> z;
        z.assign(k, 0.0);
        for (std::size_t i = 0; i < k; ++i)
            z[i] = rng.next_gaussian() / std::sqrt(2.0 * kPi);
        for (std::size_t i = k; i-- > 0;) {
            double s = z[i];
            for (std::size_t j = i + 1; j < k; ++j) s -= chol[j * k + i] * x[j];
            x[i] = s / chol[i * k + i];
        }
    }

    double quad_form(const std::vector<double>& x) const {
        // x^T C x = |L^T x|^2
        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = i; j < k; ++j) s += chol[j * k + i] * x[j];
            total += s * s;
        }
        return total;
    }
};

}  // namespace

std::string method_name(EstimateMethod method) {
    switch (method) {
        case EstimateMethod::monte_carlo: return "monte-carlo";
        case EstimateMethod::tensor_quadrature: return "tensor-quadrature";
        case EstimateMethod::closed_form: return "closed-form";
    }
    return "?";
}

void FormInstance::validate() const {
    if (k == 0) throw std::invalid_argument("form: dimension k must be positive");
    if (ell != 1 && ell != 2) throw std::invalid_argument("form: ell must be 1 or 2");
    if (vectors.size() != functions.size())
        throw std::invalid_argument("form: one function per vector required");
    if (vectors.empty()) throw std::invalid_argument("form: empty instance");
    for (const auto& v : vectors)
        if (v.size() != k) throw std::invalid_argument("form: vector length does not match k");
    for (const auto& f : functions) {
        f.validate();
        if (f.ell != ell) throw std::invalid_argument("form: function ell mismatch");
    }
}

bool FormInstance::has_kernel() const {
    for (const auto& f : functions)
        if (f.is_kernel()) return true;
    return false;
}

EstimateResult eval_general_form(const FormInstance& form, std::size_t samples,
                                 std::uint64_t seed, unsigned threads) {
    form.validate();
    if (form.has_kernel())
        throw std::invalid_argument(
            "eval_general_form: Cauchy kernels are singular; use eval_lambda_n");

    const std::size_t k = form.k;
    const std::size_t m = form.vectors.size();
    std::vector<double> vecs(m * k);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c = 0; c < k; ++c) vecs[j * k + c] = to_double(form.vectors[j][c]);

    // Proposal form C = (1/2) sum_j f_j f_j^T / scale_j^2: half the matched
    // decay so the weights keep finite variance for gaussian inputs, and the
    // compactly supported inputs are covered regardless.
    std::vector<double> c(k * k, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        const double s = form.functions[j].scale();
        const double inv = 0.5 / (s * s);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) c[a * k + b] += inv * vecs[j * k + a] * vecs[j * k + b];
    }
    const GaussianProposal proposal = GaussianProposal::from_form_matrix(c, k);
    const unsigned ell = form.ell;
    const double log_norm = 0.5 * static_cast<double>(ell) * proposal.log_det_c;

    auto sample_one = [&](RngStream& rng) -> std::complex<double> {
        thread_local std::vector<double> x1, x2;
        x1.assign(k, 0.0);
        x2.assign(k, 0.0);
        proposal.sample_slice(rng, x1);
        double quad = proposal.quad_form(x1);
        if (ell == 2) {
            proposal.sample_slice(rng, x2);
            quad += proposal.quad_form(x2);
        }
        double product = 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            double ax = 0.0, ay = 0.0;
            for (std::size_t cc = 0; cc < k; ++cc) {
                ax += vecs[j * k + cc] * x1[cc];
                if (ell == 2) ay += vecs[j * k + cc] * x2[cc];
            }
            product *= form.functions[j].eval(ax, ay);
            if (product == 0.0) return 0.0;
        }
        // weight = integrand / proposal density
        return product * std::exp(kPi * quad - log_norm);
    };

    return run_monte_carlo(samples, seed, threads, sample_one);
}

EstimateResult eval_general_form_quadrature(const FormInstance& form, std::size_t points_per_dim) {
    form.validate();
    if (form.has_kernel() || form.ell != 1 || form.k > 3)
        throw std::invalid_argument(
            "eval_general_form_quadrature: only kernel-free ell = 1 instances with k <= 3");
    if (points_per_dim < 3 || points_per_dim % 2 == 0)
        throw std::invalid_argument("eval_general_form_quadrature: need an odd point count >= 3");

    double max_scale = 0.0;
    for (const auto& f : form.functions) max_scale = std::max(max_scale, f.scale());
    const double limit = 6.0 * max_scale;
    const std::size_t n = points_per_dim;
    const double h = 2.0 * limit / static_cast<double>(n - 1);

    auto simpson_coeff = [&](std::size_t i) {
        if (i == 0 || i == n - 1) return 1.0;
        return (i % 2 == 1) ? 4.0 : 2.0;
    };

    std::vector<double> x(form.k, 0.0);
    double total = 0.0;
    const std::size_t grid = [&] {
        std::size_t g = 1;
        for (std::size_t d = 0; d < form.k; ++d) g *= n;
        return g;
    }();
    for (std::size_t cell = 0; cell < grid; ++cell) {
        std::size_t rest = cell;
        double coeff = 1.0;
        for (std::size_t d = 0; d < form.k; ++d) {
            const std::size_t i = rest % n;
            rest /= n;
            x[d] = -limit + static_cast<double>(i) * h;
            coeff *= simpson_coeff(i) * h / 3.0;
        }
        double product = 1.0;
        for (std::size_t j = 0; j < form.vectors.size() && product != 0.0; ++j) {
            double a = 0.0;
            for (std::size_t cc = 0; cc < form.k; ++cc)
                a += to_double(form.vectors[j][cc]) * x[cc];
            product *= form.functions[j].eval(a, 0.0);
        }
        total += coeff * product;
    }

    EstimateResult result;
    result.value = std::abs(total);
    result.value_re = total;
    result.samples = grid;
    result.method = EstimateMethod::tensor_quadrature;
    return result;
}

EstimateResult separable_closed_form(const FormInstance& form) {
    form.validate();
    if (form.has_kernel())
        throw std::invalid_argument("separable_closed_form: kernels are not integrable");
    if (form.vectors.size() != form.k)
        throw std::invalid_argument("separable_closed_form: need exactly k functions");
    std::vector<bool> used(form.k, false);
    for (const auto& v : form.vectors) {
        std::size_t hits = 0, axis = 0;
        for (std::size_t c = 0; c < form.k; ++c) {
            if (v[c] == 0) continue;
            ++hits;
            axis = c;
        }
        if (hits != 1 || v[axis] != 1 || used[axis])
            throw std::invalid_argument(
                "separable_closed_form: vectors must be distinct standard basis vectors");
        used[axis] = true;
    }

    double product = 1.0;
    for (const auto& f : form.functions) {
        const double amp = to_double(f.amplitude);
        if (f.kind == FunctionKind::gaussian) {
            const double w = to_double(f.width);
            product *= amp * ((form.ell == 2) ? w * w : w);
        } else {
            const double r = to_double(f.radius);
            product *= amp * ((form.ell == 2) ? kPi * r * r : 2.0 * r);
        }
    }

    EstimateResult result;
    result.value = std::abs(product);
    result.value_re = product;
    result.method = EstimateMethod::closed_form;
    return result;
}

EstimateResult eval_lambda_n(std::size_t n, const TestFunction& t,
                             const std::vector<TestFunction>& q, std::size_t samples,
                             std::uint64_t seed, const LambdaOptions& options) {
    if (q.size() != 2 * n + 1)
        throw std::invalid_argument("eval_lambda_n: expected 2n+1 companion functions");
    t.validate();
    if (t.is_kernel() || t.ell != 2)
        throw std::invalid_argument("eval_lambda_n: t must be a gaussian or disk on C");
    for (const auto& f : q) {
        f.validate();
        if (f.is_kernel() || f.ell != 2)
            throw std::invalid_argument("eval_lambda_n: q_j must be gaussians or disks on C");
    }

    double max_scale = t.scale();
    for (const auto& f : q) max_scale = std::max(max_scale, f.scale());

    if (n == 0) {
        // No kernel factors: plain two-function integral over C.
        const double a0 = 0.5 * (1.0 / (t.scale() * t.scale()) + 1.0 / (q[0].scale() * q[0].scale()));
        auto sample_one = [&](RngStream& rng) -> std::complex<double> {
            const double sx = rng.next_gaussian() / std::sqrt(2.0 * kPi * a0);
            const double sy = rng.next_gaussian() / std::sqrt(2.0 * kPi * a0);
            const double density = a0 * std::exp(-kPi * a0 * (sx * sx + sy * sy));
            return t.eval(sx, sy) * q[0].eval(sx, sy) / density;
        };
        return run_monte_carlo(samples, seed, options.threads, sample_one);
    }

    double radius = options.kernel_radius;
    std::string warning;
    if (radius <= 0.0) {
        radius = 6.0 * max_scale;
    } else if (radius < 2.0 * max_scale) {
        warning =
            "kernel truncation radius below twice the largest function scale; "
            "the estimate may miss integrand support";
    }

    // Proposal: y_0 gaussian with half the summed decay of every factor
    // (each factor's argument is y_0 shifted by kernel variables); y_j on
    // the disk of the truncation radius with density 1/(2 pi R |y|).
    double a0 = 1.0 / (t.scale() * t.scale());
    for (const auto& f : q) a0 += 1.0 / (f.scale() * f.scale());
    a0 *= 0.5;

    const std::size_t kernel_count = 2 * n;
    auto sample_one = [&, radius, a0](RngStream& rng) -> std::complex<double> {
        const double y0x = rng.next_gaussian() / std::sqrt(2.0 * kPi * a0);
        const double y0y = rng.next_gaussian() / std::sqrt(2.0 * kPi * a0);

        thread_local std::vector<std::complex<double>> ys;
        ys.assign(kernel_count, {});
        // weight starts as 1 / proposal density of y_0
        double log_weight = kPi * a0 * (y0x * y0x + y0y * y0y) - std::log(a0);
        std::complex<double> kernel_phase(1.0, 0.0);
        for (std::size_t j = 0; j < kernel_count; ++j) {
            const double r = radius * rng.next_double_positive();
            const double phi = 2.0 * kPi * rng.next_double();
            const std::complex<double> y(r * std::cos(phi), r * std::sin(phi));
            ys[j] = y;
            // kernel factor / proposal density: (1/y or 1/conj(y)) * 2 pi R r
            log_weight += std::log(2.0 * kPi * radius * r);
            kernel_phase /= (j == 0) ? y : std::conj(y);
        }

        // t(y_0 - y_2 - y_4 - ...) and q_j(y_0 - y_1 - ... - y_j).
        std::complex<double> t_arg(y0x, y0y);
        for (std::size_t j = 1; j < kernel_count; j += 2) t_arg -= ys[j];
        double magnitude = t.eval(t_arg.real(), t_arg.imag()) * q[0].eval(y0x, y0y);
        std::complex<double> x(y0x, y0y);
        for (std::size_t j = 0; j < kernel_count && magnitude != 0.0; ++j) {
            x -= ys[j];
            magnitude *= q[j + 1].eval(x.real(), x.imag());
        }
        if (magnitude == 0.0) return 0.0;
        return magnitude * std::exp(log_weight) * kernel_phase;
    };

    EstimateResult result = run_monte_carlo(samples, seed, options.threads, sample_one);
    result.warning = warning;
    return result;
}

RatioReport verify_main_estimate(std::size_t n, const TestFunction& t,
                                 const std::vector<TestFunction>& q, const Rational& p_recip,
                                 std::size_t samples, std::uint64_t seed,
                                 const LambdaOptions& options) {
    Rational gap = p_recip - Rational(1, 2);
    if (gap < 0) gap = -gap;
    if (gap >= Rational(1, 10))
        throw std::invalid_argument("verify_main_estimate: |p_recip - 1/2| must be below 1/10");
    if (q.size() != 2 * n + 1)
        throw std::invalid_argument("verify_main_estimate: expected 2n+1 companion functions");

    RatioReport report;
    report.lambda = eval_lambda_n(n, t, q, samples, seed, options);

    double product = lp_norm(t, p_recip);
    product *= lp_norm(q[0], Rational(1) - p_recip);
    for (std::size_t j = 1; j < q.size(); ++j) product *= lp_norm(q[j], Rational(1, 2));
    if (!(product > 0.0))
        throw DomainError("verify_main_estimate: norm product vanishes");

    report.norm_product = product;
    report.ratio = report.lambda.value / product;
    report.ratio_std_error = report.lambda.std_error / product;
    if (n >= 1) report.per_step_c = std::pow(report.ratio, 1.0 / static_cast<double>(n));
    return report;
}

}  // namespace blform
