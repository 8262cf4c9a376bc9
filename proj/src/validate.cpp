#include "pptcert/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "pptcert/certify.hpp"
#include "pptcert/error.hpp"
#include "pptcert/perturbation.hpp"

namespace pptcert {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x)
{
    std::ostringstream out;
    out.precision(6);
    out << x;
    return out.str();
}

void note_ratio(double value, double allowed, double& worst)
{
    if (allowed > 0.0) {
        worst = std::isnan(worst) ? value / allowed : std::max(worst, value / allowed);
    }
}

/// Largest beta with c(beta) <= c_max, by bisection (c is increasing in beta).
double beta_for_series_parameter(double a, double b, double c_max)
{
    if (a <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    double hi = 1.0;
    while (series_parameter(a, b, hi) < c_max && hi < 1e6) {
        hi *= 2.0;
    }
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (series_parameter(a, b, mid) <= c_max ? lo : hi) = mid;
    }
    return lo;
}

struct Context {
    const RunConfig& config;
    BuiltModel model;
    SpectralDecomposition h0;
    SpectralDecomposition h;
    Certificate certificate;
    std::vector<double> dyson_betas;
    std::vector<FOperator> f_ops;  // one per dyson beta
};

Finding check_assumption(const Context& ctx)
{
    Finding f{"assumption_bound", true, "", kNaN};
    const AssumptionConstants& c = ctx.certificate.constants;
    const double top = std::min(ctx.config.validate_s_max, c.s_star);
    std::size_t checked = 0;
    const std::vector<double> grid = make_grid(0.0, top, ctx.config.validate_points, false);
    const std::vector<double> norms = interaction_norms(ctx.h0, ctx.model.v, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double s = grid[k];
        const double dense = norms[k];
        const double bound = c.a * std::exp(c.b * s);
        note_ratio(dense, bound, f.worst_ratio);
        if (dense > bound * (1.0 + 1e-12) + 1e-13) {
            f.passed = false;
            f.detail = "s = " + fmt(s) + ": " + fmt(dense) + " > " + fmt(bound);
            return f;
        }
        ++checked;
    }
    f.detail = std::to_string(checked) + " points on [0, " + fmt(top) + "], a = " + fmt(c.a) + ", b = " + fmt(c.b)
               + ", worst ratio " + fmt(f.worst_ratio);
    return f;
}

Finding check_dyson(const Context& ctx)
{
    Finding f{"dyson_bound", true, "", kNaN};
    const AssumptionConstants& c = ctx.certificate.constants;
    const double hs_tol = ctx.config.hs_tol;
    for (std::size_t i = 0; i < ctx.dyson_betas.size(); ++i) {
        const double beta = ctx.dyson_betas[i];
        const DysonResult d = dyson_series(ctx.h0, ctx.model.v, beta, hs_tol, c);
        const double slack = hs_tol + d.tail_bound + d.quadrature_estimate;
        const double bound = dyson_norm_bound(c.a, c.b, beta);
        const double norm_d = d.d.matrix().norm();
        note_ratio(norm_d, bound + slack, f.worst_ratio);
        if (norm_d > bound + slack) {
            f.passed = false;
            f.detail = "||D(" + fmt(beta) + ")||_2 = " + fmt(norm_d) + " > " + fmt(bound);
            return f;
        }
        double term_bound = 1.0;
        for (std::size_t n = 1; n <= d.term_norms.size(); ++n) {
            term_bound *= d.c / static_cast<double>(n);
            if (d.term_norms[n - 1] > term_bound * (1.0 + 1e-10) + hs_tol + d.quadrature_estimate) {
                f.passed = false;
                f.detail = "order " + std::to_string(n) + " term at beta = " + fmt(beta) + ": "
                           + fmt(d.term_norms[n - 1]) + " > c^n/n! = " + fmt(term_bound);
                return f;
            }
            if (d.partial_sum_norms[n - 1] > bound + slack) {
                f.passed = false;
                f.detail = "partial sum to order " + std::to_string(n) + " at beta = " + fmt(beta) + " exceeds "
                           + fmt(bound);
                return f;
            }
        }
        const FOperator& fop = ctx.f_ops[i];
        const double norm_f = fop.f.matrix().norm();
        const double f_slack = (2.0 + fop.half.d.matrix().norm())
                               * (hs_tol + fop.half.tail_bound + fop.half.quadrature_estimate);
        note_ratio(norm_f, fop.norm_bound + f_slack, f.worst_ratio);
        if (norm_f > fop.norm_bound + f_slack) {
            f.passed = false;
            f.detail = "||F(" + fmt(beta) + ")||_2 = " + fmt(norm_f) + " > " + fmt(fop.norm_bound);
            return f;
        }
    }
    f.detail = std::to_string(ctx.dyson_betas.size()) + " betas up to " + fmt(ctx.dyson_betas.back())
               + ", worst ratio " + fmt(f.worst_ratio);
    return f;
}

Finding check_factorization(const Context& ctx)
{
    Finding f{"factorization", true, "", kNaN};
    const double hs_tol = ctx.config.hs_tol;
    const auto n = static_cast<Eigen::Index>(ctx.model.h0.dim());
    for (std::size_t i = 0; i < ctx.dyson_betas.size(); ++i) {
        const double beta = ctx.dyson_betas[i];
        const FOperator& fop = ctx.f_ops[i];
        const Matrix half = ctx.h0.exponential(-0.5 * beta);
        const Matrix exact = ctx.h.exponential(-beta);
        const Matrix sandwich = half * (Matrix::Identity(n, n) + fop.f.matrix()) * half;
        const double residual = (exact - sandwich).norm();
        const double half_norm = std::exp(-0.5 * beta * ctx.h0.eigenvalues(0));
        const double allowed = 10.0 * (hs_tol + fop.half.quadrature_estimate + fop.half.tail_bound)
                               * std::max(1.0, half_norm * half_norm * (2.0 + fop.half.d.matrix().norm()));
        note_ratio(residual, allowed, f.worst_ratio);
        if (residual > allowed) {
            f.passed = false;
            f.detail = "beta = " + fmt(beta) + ": residual " + fmt(residual) + " > " + fmt(allowed);
            return f;
        }
    }
    f.detail = std::to_string(ctx.dyson_betas.size()) + " betas, worst residual/allowed " + fmt(f.worst_ratio);
    return f;
}

Finding check_sign_equivalence(const Context& ctx, const ValidationHooks& hooks)
{
    Finding sign{"pt_sign_equivalence", true, "", kNaN};
    const auto n = static_cast<Eigen::Index>(ctx.model.h0.dim());
    for (std::size_t i = 0; i < ctx.dyson_betas.size(); ++i) {
        const double beta = ctx.dyson_betas[i];
        const FOperator& fop = ctx.f_ops[i];
        const Matrix exact = ctx.h.exponential(-beta);
        const Matrix pt_exact = hooks.partial_transpose(exact, ctx.model.space);
        const Matrix pt_f = hooks.partial_transpose(Matrix::Identity(n, n) + fop.f.matrix(), ctx.model.space);
        const double m_exact = min_eigenvalue(pt_exact, 1e-9) / pt_exact.cwiseAbs().maxCoeff();
        const double m_f = min_eigenvalue(pt_f, 1e-9) / pt_f.cwiseAbs().maxCoeff();
        const double zero_band = 1e-6;
        const bool agree = std::abs(m_exact) <= zero_band || std::abs(m_f) <= zero_band || ((m_exact < 0.0) == (m_f < 0.0));
        if (!agree) {
            sign.passed = false;
            sign.detail = "beta = " + fmt(beta) + ": normalized lowest eigenvalues " + fmt(m_exact) + " vs " + fmt(m_f);
            return sign;
        }
    }
    sign.detail = std::to_string(ctx.dyson_betas.size()) + " betas, signs agree";
    return sign;
}

Finding check_isometry(const Context& ctx, const ValidationHooks& hooks)
{
    Finding f{"pt_isometry", true, "", kNaN};
    std::mt19937_64 rng(ctx.config.seed);
    std::normal_distribution<double> normal;
    const auto n = static_cast<Eigen::Index>(ctx.model.space.dim());
    double worst = 0.0;
    for (std::size_t sample = 0; sample < ctx.config.validate_samples; ++sample) {
        Matrix x(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                x(i, j) = Complex(normal(rng), normal(rng));
            }
        }
        const Matrix y = hooks.partial_transpose(x, ctx.model.space);
        const double rel = std::abs(y.norm() - x.norm()) / x.norm();
        worst = std::max(worst, rel);
        if (rel > 1e-13) {
            f.passed = false;
            f.detail = "sample " + std::to_string(sample) + ": relative norm change " + fmt(rel);
            break;
        }
        if (hooks.partial_transpose(y, ctx.model.space) != x) {
            f.passed = false;
            f.detail = "sample " + std::to_string(sample) + ": T_B is not an involution";
            break;
        }
        if (hooks.partial_transpose(Matrix(x.adjoint()), ctx.model.space) != Matrix(y.adjoint())) {
            f.passed = false;
            f.detail = "sample " + std::to_string(sample) + ": T_B does not commute with the adjoint";
            break;
        }
        const auto da = static_cast<Eigen::Index>(ctx.model.space.dim_a);
        const auto db = static_cast<Eigen::Index>(ctx.model.space.dim_b);
        const Matrix a = x.topLeftCorner(da, da);
        const Matrix b = x.bottomRightCorner(db, db);
        const Matrix expected = tensor(a, Matrix(b.transpose()));
        if ((hooks.partial_transpose(tensor(a, b), ctx.model.space) - expected).norm() > 1e-14 * expected.norm()) {
            f.passed = false;
            f.detail = "sample " + std::to_string(sample) + ": T_B[A (x) B] differs from A (x) B^T";
            break;
        }
    }
    f.worst_ratio = worst / 1e-13;
    if (f.passed) {
        f.detail = std::to_string(ctx.config.validate_samples) + " random operators, worst relative norm change "
                   + fmt(worst);
    }
    return f;
}

Finding check_consistency(const Context& ctx)
{
    Finding f{"consistency", true, "", kNaN};
    CheckOptions options;
    options.hs_tol = ctx.config.hs_tol;
    options.psd_tol = ctx.config.psd_tol;
    const double top = std::isfinite(ctx.certificate.beta_max) ? ctx.certificate.beta_max : 20.0;
    const std::vector<double> betas = make_grid(top / 20.0, top, 20, false);
    std::size_t ppt = 0;
    for (double beta : betas) {
        const PPTReport r = check_prepared(ctx.model, ctx.h, ctx.certificate, beta, options);
        if (r.certificate_verdict == CertificateVerdict::certified_ppt) {
            if (!r.consistent()) {
                f.passed = false;
                f.detail = "certified beta = " + fmt(beta) + " is NPT (min PT eigenvalue "
                           + fmt(r.min_pt_eigenvalue) + ")";
                return f;
            }
        }
        if (r.direct_verdict == Verdict::ppt) {
            ++ppt;
        }
    }
    f.detail = std::to_string(betas.size()) + " betas in (0, " + fmt(top) + "], " + std::to_string(ppt) + " PPT";
    return f;
}

Finding check_appendix(const OscillatorStarCutoff& spec, const RunConfig& config)
{
    Finding f{"appendix_bound", true, "", kNaN};
    try {
        const std::vector<double> grid = make_grid(0.0, config.validate_s_max, config.validate_points, false);
        const AppendixReport report = validate_appendix_bound(spec, grid);
        f.worst_ratio = report.max_ratio;
        const ShellCount shell = count_shell(spec);
        if (static_cast<double>(shell.count) > shell.bound) {
            f.passed = false;
            f.detail = "shell count " + std::to_string(shell.count) + " > " + fmt(shell.bound);
            return f;
        }
        f.detail = std::to_string(report.points.size()) + " points, max dense/bound " + fmt(report.max_ratio)
                   + ", shell count " + std::to_string(shell.count) + " <= " + fmt(shell.bound);
    } catch (const PropertyViolation& e) {
        f.passed = false;
        f.detail = e.what();
    }
    return f;
}

Finding check_jc_elements(const JaynesCummingsCutoff& spec)
{
    Finding f{"jc_element_bound", true, "", kNaN};
    const double ratio = jaynes_cummings_element_ratio(spec);
    f.worst_ratio = ratio;
    if (ratio > 1.0 + 1e-12) {
        f.passed = false;
    }
    f.detail = std::isnan(ratio) ? "no coupling" : "max |V_jk| / (|g| 2 sqrt(k)) = " + fmt(ratio);
    return f;
}

} // namespace

bool ValidationReport::ok() const
{
    return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.passed; });
}

ValidationReport run_validation(const RunConfig& config, DecompositionCache& cache, const ValidationHooks& hooks_in)
{
    ValidationHooks hooks = hooks_in;
    if (!hooks.partial_transpose) {
        hooks.partial_transpose = [](const Matrix& x, const BipartiteSpace& s) { return partial_transpose(x, s); };
    }
    validate_model(config.model);
    const std::string key = canonical_key(config.model);
    Context ctx{config, build(config.model), {}, {}, {}, {}, {}};
    ctx.h0 = cache.get_or_compute("H0|" + key, ctx.model.h0);
    ctx.h = cache.get_or_compute("H|" + key, ctx.model.hamiltonian());

    CheckOptions options;
    options.empirical_constants = config.empirical_constants;
    options.empirical_b = config.empirical_b;
    if (config.empirical_constants) {
        options.empirical_grid =
            make_grid(0.0, config.empirical_s_max.value_or(config.validate_s_max), config.empirical_points, false);
    }
    ctx.certificate = make_certificate(select_constants(config.model, ctx.model, {}, options));

    const AssumptionConstants& c = ctx.certificate.constants;
    double top = std::min(ctx.certificate.beta_max, beta_for_series_parameter(c.a, c.b, 8.0));
    if (!std::isfinite(top)) {
        top = 1.0;
    }
    ctx.dyson_betas = make_grid(top / 4.0, top, 4, false);
    for (double beta : ctx.dyson_betas) {
        ctx.f_ops.push_back(f_operator(ctx.h0, ctx.model.v, beta, config.hs_tol, c));
    }

    ValidationReport report;
    report.findings.push_back(check_assumption(ctx));
    report.findings.push_back(check_dyson(ctx));
    report.findings.push_back(check_factorization(ctx));
    report.findings.push_back(check_sign_equivalence(ctx, hooks));
    report.findings.push_back(check_isometry(ctx, hooks));
    report.findings.push_back(check_consistency(ctx));
    if (const auto* star = std::get_if<OscillatorStarCutoff>(&config.model)) {
        report.findings.push_back(check_appendix(*star, config));
    }
    if (const auto* jc = std::get_if<JaynesCummingsCutoff>(&config.model)) {
        report.findings.push_back(check_jc_elements(*jc));
    }
    return report;
}

} // namespace pptcert
