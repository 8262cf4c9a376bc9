#include "pptcert/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "pptcert/error.hpp"

namespace pptcert {

namespace {

struct Prepared {
    std::optional<double> lambda;
    BuiltModel model;
    SpectralDecomposition h;
    Certificate certificate;
};

CheckOptions check_options(const RunConfig& config, std::span<const double> betas)
{
    CheckOptions options;
    options.hs_tol = config.hs_tol;
    options.psd_tol = config.psd_tol;
    options.empirical_constants = config.empirical_constants;
    options.empirical_b = config.empirical_b;
    if (config.empirical_constants) {
        double top = config.empirical_s_max.value_or(0.0);
        if (!config.empirical_s_max) {
            top = 1e-3;
            for (double beta : betas) {
                if (std::isfinite(beta)) {
                    top = std::max(top, 0.5 * beta);
                }
            }
        }
        options.empirical_grid = make_grid(0.0, top, config.empirical_points, false);
    }
    return options;
}

std::vector<std::optional<double>> couplings(const RunConfig& config)
{
    std::vector<std::optional<double>> out;
    if (config.lambda_grid.empty()) {
        out.emplace_back();
        return out;
    }
    std::vector<double> sorted = config.lambda_grid;
    std::sort(sorted.begin(), sorted.end());
    for (double l : sorted) {
        out.emplace_back(l);
    }
    return out;
}

Prepared prepare(const RunConfig& config, std::optional<double> lambda, const CheckOptions& options,
                 std::span<const double> betas, DecompositionCache& cache)
{
    const ModelSpec spec = lambda ? with_coupling(config.model, *lambda) : config.model;
    validate_model(spec);
    Prepared p{lambda, build(spec), {}, {}};
    p.h = cache.get_or_compute("H|" + canonical_key(spec), p.model.hamiltonian());
    p.certificate = make_certificate(select_constants(spec, p.model, betas, options));
    return p;
}

SweepRow evaluate(const Prepared& p, double beta, const CheckOptions& options, bool timing)
{
    SweepRow row;
    row.beta = beta;
    row.lambda = p.lambda;
    row.beta_star = p.certificate.beta_star;
    row.certified = p.certificate.applies_at(beta);
    row.assumption_range_exceeded = p.certificate.assumption_range_exceeded(beta);
    const auto start = std::chrono::steady_clock::now();
    try {
        row.truncation_tail = p.model.truncation_tail(beta);
        const PPTReport report = check_prepared(p.model, p.h, p.certificate, beta, options);
        row.min_pt_eigenvalue = report.min_pt_eigenvalue;
        row.negativity = report.negativity;
        row.direct_verdict = std::string(to_string(report.direct_verdict));
    } catch (const std::exception& e) {
        row.min_pt_eigenvalue = std::numeric_limits<double>::quiet_NaN();
        row.negativity = std::numeric_limits<double>::quiet_NaN();
        row.direct_verdict = "error";
        row.error = e.what();
    }
    if (timing) {
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return row;
}

/// Evaluates tasks[i] into rows[i] on up to `jobs` threads.
void evaluate_all(const std::vector<std::pair<const Prepared*, double>>& tasks, std::vector<SweepRow>& rows,
                  const CheckOptions& options, bool timing, std::size_t jobs)
{
    rows.resize(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            rows[i] = evaluate(*tasks[i].first, tasks[i].second, options, timing);
        }
    };
    const std::size_t threads = std::min(jobs, tasks.size());
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back(worker);
    }
}

SweepResult run_grid(const RunConfig& config, const std::vector<double>& betas, DecompositionCache& cache)
{
    const CheckOptions options = check_options(config, betas);
    std::vector<Prepared> prepared;
    for (const auto& lambda : couplings(config)) {
        prepared.push_back(prepare(config, lambda, options, betas, cache));
    }
    std::vector<std::pair<const Prepared*, double>> tasks;
    for (const Prepared& p : prepared) {
        for (double beta : betas) {
            tasks.emplace_back(&p, beta);
        }
    }
    SweepResult result;
    evaluate_all(tasks, result.rows, options, config.timing, config.jobs);

    for (std::size_t k = 0; k < prepared.size(); ++k) {
        CouplingSummary s;
        s.lambda = prepared[k].lambda;
        s.beta_star = prepared[k].certificate.beta_star;
        s.beta_max = prepared[k].certificate.beta_max;
        s.constants = prepared[k].certificate.constants;
        const auto first = result.rows.begin() + static_cast<std::ptrdiff_t>(k * betas.size());
        s.crossing = find_crossing(std::vector<SweepRow>(first, first + static_cast<std::ptrdiff_t>(betas.size())));
        result.summary.couplings.push_back(s);
    }
    for (const SweepRow& row : result.rows) {
        if (!row.error.empty()) {
            ++result.summary.errors;
        }
        if (row.certified && row.direct_verdict == "NPT") {
            ++result.summary.violations;
        }
    }
    return result;
}

} // namespace

std::vector<double> sweep_grid(const RunConfig& config)
{
    if (!config.beta_min || !config.beta_max) {
        throw InputError("sweep needs beta_min and beta_max");
    }
    return make_grid(*config.beta_min, *config.beta_max, config.steps, config.scale == GridScale::log);
}

SweepResult run_sweep(const RunConfig& config, DecompositionCache& cache)
{
    return run_grid(config, sweep_grid(config), cache);
}

SweepResult run_check(const RunConfig& config, DecompositionCache& cache)
{
    if (!config.beta) {
        throw InputError("config key 'beta': required by the check command");
    }
    return run_grid(config, {*config.beta}, cache);
}

SweepResult run_certify(const RunConfig& config, DecompositionCache& cache)
{
    std::vector<double> hint;
    if (config.beta) {
        hint.push_back(*config.beta);
    }
    const CheckOptions options = check_options(config, hint);
    SweepResult result;
    for (const auto& lambda : couplings(config)) {
        const Prepared p = prepare(config, lambda, options, hint, cache);
        const double beta = p.certificate.beta_max;
        SweepRow row;
        if (std::isfinite(beta) && beta > 0.0) {
            row = evaluate(p, beta, options, config.timing);
        } else {
            row.beta = beta;
            row.lambda = lambda;
            row.beta_star = p.certificate.beta_star;
            row.certified = true;
            row.min_pt_eigenvalue = std::numeric_limits<double>::quiet_NaN();
            row.negativity = std::numeric_limits<double>::quiet_NaN();
            row.direct_verdict = "not-run";
        }
        CouplingSummary s;
        s.lambda = lambda;
        s.beta_star = p.certificate.beta_star;
        s.beta_max = p.certificate.beta_max;
        s.constants = p.certificate.constants;
        result.summary.couplings.push_back(s);
        if (!row.error.empty()) {
            ++result.summary.errors;
        }
        if (row.certified && row.direct_verdict == "NPT") {
            ++result.summary.violations;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::optional<Crossing> find_crossing(const std::vector<SweepRow>& rows)
{
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const SweepRow& lo = rows[i];
        const SweepRow& hi = rows[i + 1];
        if (lo.direct_verdict != "PPT" || hi.direct_verdict != "NPT") {
            continue;
        }
        Crossing c;
        c.beta_lo = lo.beta;
        c.beta_hi = hi.beta;
        const double m0 = lo.min_pt_eigenvalue;
        const double m1 = hi.min_pt_eigenvalue;
        if (m0 <= 0.0) {
            c.estimate = lo.beta;
        } else {
            c.estimate = lo.beta + (hi.beta - lo.beta) * m0 / (m0 - m1);
        }
        return c;
    }
    return std::nullopt;
}

} // namespace pptcert
