#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pptcert/cache.hpp"
#include "pptcert/certify.hpp"
#include "pptcert/config.hpp"

namespace pptcert {

struct SweepRow {
    double beta = 0.0;
    std::optional<double> lambda;
    double beta_star = 0.0;
    bool certified = false;
    double min_pt_eigenvalue = 0.0;
    double negativity = 0.0;
    /// "PPT", "NPT", "inconclusive", "error" or "not-run".
    std::string direct_verdict;
    double truncation_tail = 0.0;
    /// Seconds; only measured when timing is enabled, 0 otherwise.
    double wall_time = 0.0;
    std::string error;
    bool assumption_range_exceeded = false;
};

/// First PPT -> NPT change along the beta grid of one coupling.
struct Crossing {
    double beta_lo = 0.0;
    double beta_hi = 0.0;
    /// Zero of the linear interpolant of min_pt_eigenvalue on [beta_lo, beta_hi].
    double estimate = 0.0;
};

struct CouplingSummary {
    std::optional<double> lambda;
    double beta_star = 0.0;
    double beta_max = 0.0;
    AssumptionConstants constants;
    std::optional<Crossing> crossing;
};

struct SweepSummary {
    std::vector<CouplingSummary> couplings;
    std::size_t errors = 0;
    /// Certified rows whose direct verdict is NPT.
    std::size_t violations = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SweepSummary summary;
};

/// Beta grid of a sweep config.
std::vector<double> sweep_grid(const RunConfig& config);

/// One row per (lambda, beta) grid point, ordered by lambda then beta.
/// Per-row failures are recorded in the row.
SweepResult run_sweep(const RunConfig& config, DecompositionCache& cache);

/// Single row at config.beta (one per lambda when a lambda grid is set).
SweepResult run_check(const RunConfig& config, DecompositionCache& cache);

/// One row per coupling at beta = beta_max, with the direct check run there;
/// when beta_max is infinite the direct check is skipped.
SweepResult run_certify(const RunConfig& config, DecompositionCache& cache);

/// Crossing search over rows sorted by beta for one coupling.
std::optional<Crossing> find_crossing(const std::vector<SweepRow>& rows);

} // namespace pptcert
