#include "pptcert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "pptcert/error.hpp"

namespace pptcert {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::ppt:
        return "PPT";
    case Verdict::npt:
        return "NPT";
    case Verdict::inconclusive:
        break;
    }
    return "inconclusive";
}

std::string_view to_string(CertificateVerdict v)
{
    return v == CertificateVerdict::certified_ppt ? "certified-PPT" : "not-certified";
}

double beta_star(const AssumptionConstants& constants)
{
    const double a = constants.a;
    const double b = constants.b;
    if (a <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double half_ln2 = 0.5 * std::numbers::ln2;
    if (b < 1e-12) {
        return std::numbers::ln2 / a;
    }
    return (2.0 / b) * std::log1p((b / a) * half_ln2);
}

Certificate make_certificate(const AssumptionConstants& constants)
{
    Certificate c;
    c.constants = constants;
    c.beta_star = beta_star(constants);
    c.beta_max = std::min(c.beta_star, 2.0 * constants.s_star);
    return c;
}

HermitianOperator thermal_state(const SpectralDecomposition& h, double beta)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InputError("thermal_state: beta must be positive and finite");
    }
    const double shift = h.eigenvalues(0);
    const RealVector weights = (-beta * (h.eigenvalues.array() - shift)).exp().matrix();
    const double z = weights.sum();
    if (!std::isfinite(z) || !(z > 0.0)) {
        throw NumericalError("thermal_state: partition function is not finite");
    }
    Matrix rho = h.eigenvectors * (weights / z).cast<Complex>().asDiagonal() * h.eigenvectors.adjoint();
    if (!rho.allFinite()) {
        throw NumericalError("thermal_state: non-finite density matrix entries");
    }
    return HermitianOperator(0.5 * (rho + rho.adjoint()));
}

HermitianOperator thermal_state(const HermitianOperator& h, double beta)
{
    return thermal_state(decompose(h), beta);
}

PptCheck ppt_check(const HermitianOperator& rho, const BipartiteSpace& space, double psd_tol, double truncation_tail)
{
    space.require_matches(rho.dim());
    if (!(psd_tol >= 0.0)) {
        throw InputError("ppt_check: psd_tol must be nonnegative");
    }
    const double trace = rho.matrix().trace().real();
    if (std::abs(trace - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "ppt_check: input is not a density matrix (trace " << trace << ")";
        throw InputError(msg.str());
    }
    const RealVector rho_ev = eigenvalues(rho);
    if (rho_ev(0) < -psd_tol * rho_ev.cwiseAbs().maxCoeff()) {
        std::ostringstream msg;
        msg << "ppt_check: input is not positive semidefinite (min eigenvalue " << rho_ev(0) << ")";
        throw InputError(msg.str());
    }

    const RealVector ev = eigenvalues(partial_transpose(rho, space));
    PptCheck out;
    out.min_pt_eigenvalue = ev(0);
    out.threshold = psd_tol * ev.cwiseAbs().maxCoeff();
    double negative = 0.0;
    for (Eigen::Index i = 0; i < ev.size() && ev(i) < 0.0; ++i) {
        negative -= ev(i);
    }
    out.negativity = negative;
    if (out.min_pt_eigenvalue >= -out.threshold) {
        out.verdict = Verdict::ppt;
    } else if (out.min_pt_eigenvalue < -(out.threshold + truncation_tail)) {
        out.verdict = Verdict::npt;
    } else {
        out.verdict = Verdict::inconclusive;
    }
    return out;
}

std::vector<double> make_grid(double lo, double hi, std::size_t n, bool logarithmic)
{
    if (n == 0) {
        return {};
    }
    if (n == 1) {
        return {lo};
    }
    if (logarithmic && !(lo > 0.0 && hi > 0.0)) {
        throw InputError("make_grid: logarithmic grid needs positive endpoints");
    }
    std::vector<double> out(n);
    const double last = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / last;
        out[i] = logarithmic ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

AssumptionConstants select_constants(const ModelSpec& spec, const BuiltModel& model, std::span<const double> betas,
                                     const CheckOptions& options)
{
    const AssumptionConstants analytic = analytic_constants(spec);
    if (!options.empirical_constants) {
        return analytic;
    }
    std::vector<double> grid = options.empirical_grid;
    if (grid.empty()) {
        double top = 1e-3;
        for (double beta : betas) {
            top = std::max(top, 0.5 * beta);
        }
        grid = make_grid(0.0, top, 65, false);
    }
    return empirical_constants(model.h0, model.v, grid, options.empirical_b.value_or(analytic.b));
}

PPTReport check_prepared(const BuiltModel& model, const SpectralDecomposition& h, const Certificate& certificate,
                         double beta, const CheckOptions& options)
{
    PPTReport report;
    report.beta = beta;
    report.certificate = certificate;
    report.truncation_tail = model.truncation_tail(beta);
    report.psd_tol = options.psd_tol;
    report.hs_tol = options.hs_tol;
    report.assumption_range_exceeded = certificate.assumption_range_exceeded(beta);
    report.certificate_verdict =
        certificate.applies_at(beta) ? CertificateVerdict::certified_ppt : CertificateVerdict::not_certified;

    const PptCheck direct = ppt_check(thermal_state(h, beta), model.space, options.psd_tol, report.truncation_tail);
    report.min_pt_eigenvalue = direct.min_pt_eigenvalue;
    report.negativity = direct.negativity;
    report.direct_verdict = direct.verdict;
    report.psd_threshold = direct.threshold;
    return report;
}

void enforce_consistency(const PPTReport& report)
{
    if (!report.consistent()) {
        std::ostringstream msg;
        msg << "consistency contract violated at beta = " << report.beta << ": certified PPT (beta_max = "
            << report.certificate.beta_max << ") but min PT eigenvalue = " << report.min_pt_eigenvalue
            << " < -(" << report.psd_threshold << " + " << report.truncation_tail << ")";
        throw PropertyViolation(msg.str());
    }
}

PPTReport certify_and_check(const ModelSpec& spec, double beta, const CheckOptions& options)
{
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw InputError("certify_and_check: beta must be positive and finite");
    }
    const BuiltModel model = build(spec);
    const double betas[] = {beta};
    const Certificate certificate = make_certificate(select_constants(spec, model, betas, options));
    const PPTReport report = check_prepared(model, decompose(model.hamiltonian()), certificate, beta, options);
    enforce_consistency(report);
    return report;
}

WeakCouplingScan weak_coupling_scan(const ModelSpec& spec, std::span<const double> lambda_grid)
{
    WeakCouplingScan scan;
    double smallest = std::numeric_limits<double>::infinity();
    for (double lambda : lambda_grid) {
        const AssumptionConstants c = analytic_constants(with_coupling(spec, lambda));
        scan.b = c.b;
        WeakCouplingRow row;
        row.lambda = lambda;
        row.beta_star = beta_star(c);
        const double mag = std::abs(lambda);
        if (mag > 0.0 && mag < 1.0 && c.b >= 1e-12) {
            row.asymptotic_ratio = row.beta_star * c.b / (2.0 * std::log(1.0 / mag));
            smallest = std::min(smallest, mag);
        } else {
            row.asymptotic_ratio = std::numeric_limits<double>::quiet_NaN();
        }
        scan.rows.push_back(row);
    }
    if (std::isfinite(smallest)) {
        scan.asymptotics_hold = true;
        for (const auto& row : scan.rows) {
            const double mag = std::abs(row.lambda);
            if (mag > 0.0 && mag <= 10.0 * smallest * (1.0 + 1e-12)) {
                if (!(row.asymptotic_ratio >= 0.9 && row.asymptotic_ratio <= 1.1)) {
                    scan.asymptotics_hold = false;
                }
            }
        }
    }
    return scan;
}

} // namespace pptcert
