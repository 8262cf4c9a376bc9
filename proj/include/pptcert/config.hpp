#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pptcert/models.hpp"

namespace pptcert {

enum class Command { certify, check, sweep, validate };
enum class OutputFormat { csv, json };
enum class GridScale { linear, log };

std::string_view to_string(Command c);
std::string_view to_string(OutputFormat f);
std::string_view to_string(GridScale s);
Command parse_command(std::string_view text);
OutputFormat parse_format(std::string_view text);

/// Everything one CLI invocation needs. Defaults are filled in by parse_config.
struct RunConfig {
    ModelSpec model;
    std::optional<Command> command;

    std::optional<double> beta;
    std::optional<double> beta_min;
    std::optional<double> beta_max;
    std::size_t steps = 20;
    GridScale scale = GridScale::linear;
    std::vector<double> lambda_grid;

    double hs_tol = 1e-8;
    double psd_tol = 1e-10;

    std::string out_path;
    OutputFormat format = OutputFormat::csv;
    bool timing = false;
    std::uint64_t seed = 0;

    bool empirical_constants = false;
    std::optional<double> empirical_s_max;
    std::size_t empirical_points = 65;
    std::optional<double> empirical_b;

    std::string cache_dir;
    bool audit_cache = false;
    std::size_t jobs = 1;

    double validate_s_max = 3.0;
    std::size_t validate_points = 20;
    std::size_t validate_samples = 20;
};

/// Parse the flat `key = value` config format.
///
///     # comment
///     model.variant = two_qubit_xx
///     model.omega_a = 1.0
///     lambda_grid   = 0, 1e-3, 1e-2
///
/// Lists are comma separated, complex numbers are written `re`, `re+imi` or `imi`,
/// banded couplings as `level:offset:value`. Unknown or duplicate keys, type
/// mismatches and invariant violations raise InputError naming the key.
RunConfig parse_config(std::string_view text);

/// Check the keys the selected command requires (beta for check, the beta
/// range for sweep) and the cross-key invariants. Throws InputError.
void finalize_config(RunConfig& config);

/// Canonical flat echo of every effective setting, keyed by config path.
std::map<std::string, std::string> flatten(const RunConfig& config);

/// Shortest decimal that round-trips; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double x);

} // namespace pptcert
