#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pptcert/constants.hpp"
#include "pptcert/models.hpp"
#include "pptcert/operator.hpp"

namespace pptcert {

enum class Verdict { ppt, npt, inconclusive };
enum class CertificateVerdict { certified_ppt, not_certified };

std::string_view to_string(Verdict v);
std::string_view to_string(CertificateVerdict v);

/// (2/b) ln[1 + (b/a) ln(2)/2]; +inf for a = 0, ln(2)/a for b -> 0.
double beta_star(const AssumptionConstants& constants);

struct Certificate {
    AssumptionConstants constants;
    double beta_star = 0.0;
    /// Largest certified beta: min(beta_star, 2 s_star). The Dyson factor
    /// D(beta/2) only probes the assumption on [0, beta/2].
    double beta_max = 0.0;

    bool applies_at(double beta) const { return beta > 0.0 && beta <= beta_max; }
    bool assumption_range_exceeded(double beta) const { return 0.5 * beta > constants.s_star; }
};

Certificate make_certificate(const AssumptionConstants& constants);

/// e^{-beta H} / Tr e^{-beta H}, exponentiated after shifting the spectrum to start at 0.
HermitianOperator thermal_state(const SpectralDecomposition& h, double beta);
HermitianOperator thermal_state(const HermitianOperator& h, double beta);

struct PptCheck {
    double min_pt_eigenvalue = 0.0;
    /// (||T_B[rho]||_1 - Tr rho) / 2, i.e. the summed magnitude of negative PT eigenvalues.
    double negativity = 0.0;
    Verdict verdict = Verdict::inconclusive;
    /// Absolute PSD threshold: psd_tol * ||T_B[rho]||_inf.
    double threshold = 0.0;
};

/// Direct spectral PPT test.
///   PPT          min >= -threshold
///   NPT          min <  -(threshold + truncation_tail)
///   inconclusive otherwise
/// InputError when rho is not a density matrix (trace off by > 1e-10 or not PSD within psd_tol).
PptCheck ppt_check(const HermitianOperator& rho, const BipartiteSpace& space,
                   double psd_tol = kDefaultRelativePsdTol, double truncation_tail = 0.0);

struct CheckOptions {
    double hs_tol = 1e-8;
    /// Relative to ||T_B[rho]||_inf.
    double psd_tol = kDefaultRelativePsdTol;
    bool empirical_constants = false;
    /// Grid for empirical constants; when empty, 65 points on [0, max(beta/2, 1e-3)].
    std::vector<double> empirical_grid;
    /// b used with empirical constants; defaults to the analytic b.
    std::optional<double> empirical_b;
};

struct PPTReport {
    double beta = 0.0;
    double min_pt_eigenvalue = 0.0;
    double negativity = 0.0;
    Verdict direct_verdict = Verdict::inconclusive;
    CertificateVerdict certificate_verdict = CertificateVerdict::not_certified;
    double truncation_tail = 0.0;
    double psd_tol = 0.0;
    double psd_threshold = 0.0;
    double hs_tol = 0.0;
    Certificate certificate;
    bool assumption_range_exceeded = false;

    /// Certified-PPT rows must not be NPT.
    bool consistent() const
    {
        return !(certificate_verdict == CertificateVerdict::certified_ppt && direct_verdict == Verdict::npt);
    }
};

/// Constants for the model as requested by the options (analytic unless empirical is set).
AssumptionConstants select_constants(const ModelSpec& spec, const BuiltModel& model,
                                     std::span<const double> betas, const CheckOptions& options);

/// Check at one beta with a prepared model, H = H0 + V decomposition and certificate.
PPTReport check_prepared(const BuiltModel& model, const SpectralDecomposition& h, const Certificate& certificate,
                         double beta, const CheckOptions& options);

/// Build the model, certify, run the direct PPT check, and enforce consistency:
/// PropertyViolation when the certificate says PPT but the direct check finds NPT.
PPTReport certify_and_check(const ModelSpec& spec, double beta, const CheckOptions& options = {});

/// Throws PropertyViolation when !report.consistent().
void enforce_consistency(const PPTReport& report);

struct WeakCouplingRow {
    double lambda = 0.0;
    double beta_star = 0.0;
    /// beta_star * b / (2 ln(1/|lambda|)); NaN for lambda = 0, |lambda| >= 1 or b = 0.
    double asymptotic_ratio = 0.0;
};

struct WeakCouplingScan {
    std::vector<WeakCouplingRow> rows;
    double b = 0.0;
    /// Every row within one decade of the smallest nonzero |lambda| has ratio in [0.9, 1.1].
    bool asymptotics_hold = false;
};

WeakCouplingScan weak_coupling_scan(const ModelSpec& spec, std::span<const double> lambda_grid);

/// n points from lo to hi, linear or logarithmic spacing; endpoints exact.
std::vector<double> make_grid(double lo, double hi, std::size_t n, bool logarithmic);

} // namespace pptcert
