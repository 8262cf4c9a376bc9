#include "pptcert/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pptcert/error.hpp"

namespace pptcert {

namespace {

using nlohmann::json;

json number(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

json optional_number(const std::optional<double>& x)
{
    return x ? number(*x) : json(nullptr);
}

json row_json(const SweepRow& r)
{
    json j;
    j["beta"] = number(r.beta);
    j["lambda"] = optional_number(r.lambda);
    j["beta_star"] = number(r.beta_star);
    j["certified"] = r.certified;
    j["min_pt_eigenvalue"] = number(r.min_pt_eigenvalue);
    j["negativity"] = number(r.negativity);
    j["direct_verdict"] = r.direct_verdict;
    j["truncation_tail"] = number(r.truncation_tail);
    j["wall_time"] = number(r.wall_time);
    j["assumption_range_exceeded"] = r.assumption_range_exceeded;
    j["error"] = r.error.empty() ? json(nullptr) : json(r.error);
    return j;
}

json summary_json(const SweepSummary& s)
{
    json j;
    j["errors"] = s.errors;
    j["violations"] = s.violations;
    json list = json::array();
    for (const auto& c : s.couplings) {
        json e;
        e["lambda"] = optional_number(c.lambda);
        e["beta_star"] = number(c.beta_star);
        e["beta_max"] = number(c.beta_max);
        e["a"] = number(c.constants.a);
        e["b"] = number(c.constants.b);
        e["s_star"] = number(c.constants.s_star);
        e["constants"] = std::string(to_string(c.constants.provenance));
        if (c.crossing) {
            e["crossing"] = {{"beta_lo", number(c.crossing->beta_lo)},
                             {"beta_hi", number(c.crossing->beta_hi)},
                             {"estimate", number(c.crossing->estimate)}};
        } else {
            e["crossing"] = nullptr;
        }
        list.push_back(e);
    }
    j["couplings"] = list;
    return j;
}

} // namespace

std::string render_csv(const std::vector<SweepRow>& rows)
{
    std::string out(kCsvHeader);
    out += '\n';
    for (const SweepRow& r : rows) {
        out += format_double(r.beta);
        out += ',';
        if (r.lambda) {
            out += format_double(*r.lambda);
        }
        out += ',';
        out += format_double(r.beta_star);
        out += ',';
        out += r.certified ? "true" : "false";
        out += ',';
        out += format_double(r.min_pt_eigenvalue);
        out += ',';
        out += format_double(r.negativity);
        out += ',';
        out += r.direct_verdict;
        out += ',';
        out += format_double(r.truncation_tail);
        out += ',';
        out += format_double(r.wall_time);
        out += '\n';
    }
    return out;
}

std::string render_json(const SweepResult& result, const RunConfig& config)
{
    json rows = json::array();
    for (const SweepRow& r : result.rows) {
        rows.push_back(row_json(r));
    }
    json meta;
    json echo = json::object();
    for (const auto& [key, value] : flatten(config)) {
        echo[key] = value;
    }
    meta["config"] = echo;
    meta["version"] = std::string(kVersion);
    meta["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "."
                    + std::to_string(EIGEN_MINOR_VERSION);
    meta["seed"] = config.seed;
    meta["summary"] = summary_json(result.summary);
    json doc;
    doc["rows"] = rows;
    doc["meta"] = meta;
    return doc.dump(2) + "\n";
}

void emit_report(const SweepResult& result, const RunConfig& config, OutputFormat format, const std::string& path)
{
    if (result.rows.empty()) {
        throw InputError("emit_report: no rows to write");
    }
    const std::string text = format == OutputFormat::csv ? render_csv(result.rows) : render_json(result, config);
    if (path.empty()) {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open output file '" + path + "'");
    }
    out << text;
    out.flush();
    if (!out) {
        throw InputError("write failed for output file '" + path + "'");
    }
}

} // namespace pptcert
