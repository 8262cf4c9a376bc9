#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pptcert/config.hpp"
#include "pptcert/sweep.hpp"

namespace pptcert {

inline constexpr std::string_view kVersion = "1.0.0";
inline constexpr std::string_view kCsvHeader =
    "beta,lambda,beta_star,certified,min_pt_eigenvalue,negativity,direct_verdict,truncation_tail,wall_time";

std::string render_csv(const std::vector<SweepRow>& rows);

/// {"rows": [...], "meta": {"config": {...}, "version", "eigen", "seed", "summary"}}.
/// Non-finite numbers become null.
std::string render_json(const SweepResult& result, const RunConfig& config);

/// Writes the rendered report to `path`, or stdout when `path` is empty.
/// InputError when there are no rows or, naming the path, on I/O failure.
void emit_report(const SweepResult& result, const RunConfig& config, OutputFormat format, const std::string& path);

} // namespace pptcert
