#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "pptcert/cache.hpp"
#include "pptcert/config.hpp"
#include "pptcert/error.hpp"
#include "pptcert/report.hpp"
#include "pptcert/sweep.hpp"
#include "pptcert/validate.hpp"

namespace {

enum Exit { ok = 0, usage = 1, property = 2, numerical = 3 };

struct Options {
    std::string config_path;
    std::string format;
    std::string out;
    std::string cache_dir;
    bool empirical = false;
    bool audit = false;
    bool timing = false;
    std::size_t jobs = 0;
    double beta = 0.0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    std::size_t steps = 0;
    bool log = false;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw pptcert::InputError("cannot read config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

int run(pptcert::RunConfig config, const Options& opt)
{
    using namespace pptcert;
    finalize_config(config);
    DecompositionCache cache(resolve_cache_dir(opt.cache_dir, config.cache_dir), config.audit_cache);

    if (*config.command == Command::validate) {
        const ValidationReport report = run_validation(config, cache);
        std::ostringstream text;
        for (const Finding& f : report.findings) {
            text << (f.passed ? "PASS " : "FAIL ") << f.name << ": " << f.detail << '\n';
        }
        text << (report.ok() ? "validation passed\n" : "validation FAILED\n");
        if (config.out_path.empty()) {
            std::cout << text.str();
        } else {
            std::ofstream out(config.out_path, std::ios::binary | std::ios::trunc);
            if (!(out << text.str())) {
                throw InputError("cannot write output file '" + config.out_path + "'");
            }
        }
        return report.ok() ? ok : property;
    }

    SweepResult result;
    switch (*config.command) {
    case Command::certify:
        result = run_certify(config, cache);
        break;
    case Command::check:
        result = run_check(config, cache);
        break;
    default:
        result = run_sweep(config, cache);
        break;
    }
    emit_report(result, config, config.format, config.out_path);
    for (const SweepRow& row : result.rows) {
        if (!row.error.empty()) {
            std::cerr << "pptcert: row beta = " << format_double(row.beta) << ": " << row.error << '\n';
        }
    }
    if (result.summary.violations > 0) {
        std::cerr << "pptcert: " << result.summary.violations
                  << " certified row(s) are NPT beyond psd_tol + truncation_tail\n";
        return property;
    }
    return result.summary.errors > 0 ? numerical : ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Certify and check positive partial transpose of bipartite thermal states"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--config", opt.config_path, "Config file")->required();
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", opt.out, "Output path (stdout when omitted)");
    app.add_option("--cache-dir", opt.cache_dir, "Decomposition cache directory (overrides PPTCERT_CACHE_DIR)");
    app.add_flag("--empirical-constants", opt.empirical, "Fit the assumption constants numerically");
    app.add_flag("--audit-cache", opt.audit, "Recompute cache hits and require bit-identical results");
    app.add_flag("--timing", opt.timing, "Record per-row wall time");
    app.add_option("--jobs", opt.jobs, "Worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* certify = app.add_subcommand("certify", "Compute the certified inverse-temperature range");
    auto* check = app.add_subcommand("check", "Certify and directly check one beta");
    check->add_option("--beta", opt.beta, "Inverse temperature")->check(CLI::PositiveNumber);
    auto* sweep = app.add_subcommand("sweep", "Check a grid of betas");
    sweep->add_option("--beta-min", opt.beta_min, "Lower end of the beta grid");
    sweep->add_option("--beta-max", opt.beta_max, "Upper end of the beta grid");
    sweep->add_option("--steps", opt.steps, "Grid size");
    sweep->add_flag("--log", opt.log, "Logarithmic spacing");
    auto* validate = app.add_subcommand("validate", "Run the property suite on the configured model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        pptcert::RunConfig config = pptcert::parse_config(read_file(opt.config_path));
        if (certify->parsed()) {
            config.command = pptcert::Command::certify;
        } else if (check->parsed()) {
            config.command = pptcert::Command::check;
            if (check->count("--beta") > 0) {
                config.beta = opt.beta;
            }
        } else if (sweep->parsed()) {
            config.command = pptcert::Command::sweep;
            if (sweep->count("--beta-min") > 0) {
                config.beta_min = opt.beta_min;
            }
            if (sweep->count("--beta-max") > 0) {
                config.beta_max = opt.beta_max;
            }
            if (sweep->count("--steps") > 0) {
                config.steps = opt.steps;
            }
            if (opt.log) {
                config.scale = pptcert::GridScale::log;
            }
        } else if (validate->parsed()) {
            config.command = pptcert::Command::validate;
        }
        if (!opt.format.empty()) {
            config.format = pptcert::parse_format(opt.format);
        }
        if (!opt.out.empty()) {
            config.out_path = opt.out;
        }
        if (opt.empirical) {
            config.empirical_constants = true;
        }
        if (opt.audit) {
            config.audit_cache = true;
        }
        if (opt.timing) {
            config.timing = true;
        }
        if (opt.jobs > 0) {
            config.jobs = opt.jobs;
        }
        return run(std::move(config), opt);
    } catch (const pptcert::InputError& e) {
        std::cerr << "pptcert: " << e.what() << '\n';
        return usage;
    } catch (const pptcert::PropertyViolation& e) {
        std::cerr << "pptcert: property violation: " << e.what() << '\n';
        return property;
    } catch (const pptcert::NumericalError& e) {
        std::cerr << "pptcert: numerical failure: " << e.what() << '\n';
        return numerical;
    } catch (const std::exception& e) {
        std::cerr << "pptcert: " << e.what() << '\n';
        return numerical;
    }
}
