#include "pptcert/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "pptcert/error.hpp"

namespace pptcert {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw InputError("config key '" + key + "': " + what);
}

std::optional<double> to_double(std::string_view s)
{
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    if (s == "inf" || s == "-inf") {
        return s.front() == '-' ? -INFINITY : INFINITY;
    }
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return x;
}

std::optional<Complex> to_complex(std::string_view s)
{
    s = trim(s);
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.back() != 'i') {
        if (auto re = to_double(s)) {
            return Complex(*re, 0.0);
        }
        return std::nullopt;
    }
    s.remove_suffix(1);
    // Split at the last sign that is not a leading sign or an exponent sign.
    std::size_t split_at = std::string_view::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            split_at = i;
            break;
        }
    }
    if (split_at == std::string_view::npos) {
        std::string_view im = s;
        if (im.empty() || im == "+" || im == "-") {
            return Complex(0.0, im == "-" ? -1.0 : 1.0);
        }
        if (auto v = to_double(im)) {
            return Complex(0.0, *v);
        }
        return std::nullopt;
    }
    const auto re = to_double(s.substr(0, split_at));
    std::string_view im_text = s.substr(split_at);
    std::optional<double> im;
    if (im_text == "+" || im_text == "-") {
        im = im_text == "-" ? -1.0 : 1.0;
    } else {
        im = to_double(im_text);
    }
    if (!re || !im) {
        return std::nullopt;
    }
    return Complex(*re, *im);
}

std::string format_complex(const Complex& z)
{
    if (z.imag() == 0.0) {
        return format_double(z.real());
    }
    std::string im = format_double(z.imag());
    if (im.front() != '-') {
        im = "+" + im;
    }
    return format_double(z.real()) + im + "i";
}

/// Raw key/value table with consumption tracking for strict parsing.
class Table {
public:
    explicit Table(std::string_view text)
    {
        std::size_t line_no = 0;
        for (std::string_view line : split(text, '\n')) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string_view::npos) {
                line = trim(line.substr(0, hash));
            }
            if (line.empty()) {
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                throw InputError("config line " + std::to_string(line_no) + ": expected 'key = value'");
            }
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty()) {
                throw InputError("config line " + std::to_string(line_no) + ": empty key");
            }
            if (!entries_.emplace(key, value).second) {
                fail(key, "duplicate key");
            }
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> take(const std::string& key)
    {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        used_.insert(key);
        return it->second;
    }

    std::string require(const std::string& key)
    {
        auto v = take(key);
        if (!v) {
            fail(key, "missing required key");
        }
        return *v;
    }

    std::optional<double> real(const std::string& key)
    {
        const auto v = take(key);
        if (!v) {
            return std::nullopt;
        }
        const auto x = to_double(*v);
        if (!x) {
            fail(key, "expected a real number, got '" + *v + "'");
        }
        return x;
    }

    double require_real(const std::string& key)
    {
        if (!has(key)) {
            fail(key, "missing required key");
        }
        return *real(key);
    }

    std::optional<std::size_t> count(const std::string& key)
    {
        const auto v = take(key);
        if (!v) {
            return std::nullopt;
        }
        std::size_t n = 0;
        const std::string_view s = trim(*v);
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
        if (ec != std::errc() || ptr != s.data() + s.size()) {
            fail(key, "expected a nonnegative integer, got '" + *v + "'");
        }
        return n;
    }

    std::size_t require_count(const std::string& key)
    {
        if (!has(key)) {
            fail(key, "missing required key");
        }
        return *count(key);
    }

    std::optional<bool> flag(const std::string& key)
    {
        const auto v = take(key);
        if (!v) {
            return std::nullopt;
        }
        if (*v == "true" || *v == "1") {
            return true;
        }
        if (*v == "false" || *v == "0") {
            return false;
        }
        fail(key, "expected true or false, got '" + *v + "'");
    }

    std::optional<std::vector<double>> reals(const std::string& key)
    {
        const auto v = take(key);
        if (!v) {
            return std::nullopt;
        }
        std::vector<double> out;
        if (trim(*v).empty()) {
            return out;
        }
        for (auto item : split(*v, ',')) {
            const auto x = to_double(item);
            if (!x) {
                fail(key, "expected a comma-separated list of reals, bad item '" + std::string(item) + "'");
            }
            out.push_back(*x);
        }
        return out;
    }

    std::vector<double> require_reals(const std::string& key)
    {
        if (!has(key)) {
            fail(key, "missing required key");
        }
        return *reals(key);
    }

    std::vector<Complex> require_complexes(const std::string& key)
    {
        const std::string v = require(key);
        std::vector<Complex> out;
        for (auto item : split(v, ',')) {
            const auto z = to_complex(item);
            if (!z) {
                fail(key, "expected a comma-separated list of complex numbers, bad item '" + std::string(item) + "'");
            }
            out.push_back(*z);
        }
        return out;
    }

    std::vector<BandCoupling> band(const std::string& key)
    {
        const auto v = take(key);
        std::vector<BandCoupling> out;
        if (!v || trim(*v).empty()) {
            return out;
        }
        for (auto item : split(*v, ',')) {
            const auto parts = split(item, ':');
            if (parts.size() != 3) {
                fail(key, "expected level:offset:value, got '" + std::string(item) + "'");
            }
            BandCoupling c;
            const auto parse_index = [&](std::string_view s, std::size_t& dst) {
                const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), dst);
                if (ec != std::errc() || ptr != s.data() + s.size()) {
                    fail(key, "bad index '" + std::string(s) + "' in '" + std::string(item) + "'");
                }
            };
            parse_index(parts[0], c.level);
            parse_index(parts[1], c.offset);
            const auto z = to_complex(parts[2]);
            if (!z) {
                fail(key, "bad value '" + std::string(parts[2]) + "' in '" + std::string(item) + "'");
            }
            c.value = *z;
            out.push_back(c);
        }
        return out;
    }

    void reject_unused() const
    {
        std::vector<std::string> unknown;
        for (const auto& [key, value] : entries_) {
            if (!used_.count(key)) {
                unknown.push_back(key);
            }
        }
        if (!unknown.empty()) {
            std::string list;
            for (const auto& k : unknown) {
                list += (list.empty() ? "" : ", ") + k;
            }
            throw InputError("unknown config key(s): " + list);
        }
    }

private:
    std::map<std::string, std::string> entries_;
    std::set<std::string> used_;
};

ModelSpec parse_model(Table& t)
{
    const std::string variant = t.require("model.variant");
    if (variant == "two_qubit_xx") {
        TwoQubitXX m;
        m.omega_a = t.require_real("model.omega_a");
        m.omega_b = t.require_real("model.omega_b");
        m.lambda = t.require_real("model.lambda");
        return m;
    }
    if (variant == "banded") {
        BandedInteraction m;
        m.energies_a = t.require_reals("model.energies_a");
        m.energies_b = t.require_reals("model.energies_b");
        m.couplings = t.band("model.couplings");
        return m;
    }
    if (variant == "jaynes_cummings") {
        JaynesCummingsCutoff m;
        m.omega = t.require_real("model.omega");
        m.omega_mode = t.require_real("model.omega_mode");
        m.g = t.require_real("model.g");
        m.cutoff = t.require_real("model.cutoff");
        m.n_max = t.require_count("model.n_max");
        return m;
    }
    if (variant == "oscillator_star") {
        OscillatorStarCutoff m;
        m.omega0 = t.require_real("model.omega0");
        m.bath_omegas = t.require_reals("model.bath_omegas");
        m.couplings = t.require_complexes("model.couplings");
        m.cutoff = t.require_real("model.cutoff");
        m.n_max = t.require_count("model.n_max");
        return m;
    }
    fail("model.variant", "unknown variant '" + variant
                              + "' (expected two_qubit_xx, banded, jaynes_cummings or oscillator_star)");
}

void check_positive(double x, const std::string& key)
{
    if (!(x > 0.0) || !std::isfinite(x)) {
        fail(key, "must be positive and finite");
    }
}

void check_invariants(const RunConfig& c)
{
    if (c.beta) {
        check_positive(*c.beta, "beta");
    }
    if (c.beta_min) {
        check_positive(*c.beta_min, "beta_min");
    }
    if (c.beta_max) {
        check_positive(*c.beta_max, "beta_max");
    }
    if (c.beta_min && c.beta_max && !(*c.beta_min < *c.beta_max)) {
        throw InputError("config keys 'beta_min' and 'beta_max': beta_min (" + format_double(*c.beta_min)
                         + ") must be < beta_max (" + format_double(*c.beta_max) + ")");
    }
    if (c.steps < 2) {
        fail("steps", "must be >= 2");
    }
    check_positive(c.hs_tol, "tolerances.hs_tol");
    check_positive(c.psd_tol, "tolerances.psd_tol");
    if (c.empirical_s_max) {
        check_positive(*c.empirical_s_max, "empirical.s_max");
    }
    if (c.empirical_points < 2) {
        fail("empirical.points", "must be >= 2");
    }
    if (c.empirical_b && !(*c.empirical_b >= 0.0)) {
        fail("empirical.b", "must be >= 0");
    }
    if (c.jobs < 1) {
        fail("jobs", "must be >= 1");
    }
    check_positive(c.validate_s_max, "validate.s_max");
    if (c.validate_points < 2) {
        fail("validate.points", "must be >= 2");
    }
    if (c.validate_samples < 1) {
        fail("validate.samples", "must be >= 1");
    }
    for (double l : c.lambda_grid) {
        if (!std::isfinite(l)) {
            fail("lambda_grid", "entries must be finite");
        }
    }
    try {
        validate_model(c.model);
    } catch (const InputError& e) {
        throw InputError(std::string("config key 'model': ") + e.what());
    }
}

} // namespace

std::string_view to_string(Command c)
{
    switch (c) {
    case Command::certify:
        return "certify";
    case Command::check:
        return "check";
    case Command::sweep:
        return "sweep";
    case Command::validate:
        break;
    }
    return "validate";
}

std::string_view to_string(OutputFormat f)
{
    return f == OutputFormat::csv ? "csv" : "json";
}

std::string_view to_string(GridScale s)
{
    return s == GridScale::linear ? "linear" : "log";
}

Command parse_command(std::string_view text)
{
    if (text == "certify") {
        return Command::certify;
    }
    if (text == "check") {
        return Command::check;
    }
    if (text == "sweep") {
        return Command::sweep;
    }
    if (text == "validate") {
        return Command::validate;
    }
    throw InputError("unknown command '" + std::string(text) + "' (expected certify, check, sweep or validate)");
}

OutputFormat parse_format(std::string_view text)
{
    if (text == "csv") {
        return OutputFormat::csv;
    }
    if (text == "json") {
        return OutputFormat::json;
    }
    throw InputError("unknown output format '" + std::string(text) + "' (expected csv or json)");
}

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

RunConfig parse_config(std::string_view text)
{
    Table t(text);
    RunConfig c;
    c.model = parse_model(t);

    if (auto v = t.take("command")) {
        try {
            c.command = parse_command(*v);
        } catch (const InputError& e) {
            fail("command", e.what());
        }
    }
    c.beta = t.real("beta");
    c.beta_min = t.real("beta_min");
    c.beta_max = t.real("beta_max");
    if (auto v = t.count("steps")) {
        c.steps = *v;
    }
    if (auto v = t.take("scale")) {
        if (*v == "linear") {
            c.scale = GridScale::linear;
        } else if (*v == "log") {
            c.scale = GridScale::log;
        } else {
            fail("scale", "expected linear or log, got '" + *v + "'");
        }
    }
    if (auto v = t.reals("lambda_grid")) {
        c.lambda_grid = *v;
    }
    if (auto v = t.real("tolerances.hs_tol")) {
        c.hs_tol = *v;
    }
    if (auto v = t.real("tolerances.psd_tol")) {
        c.psd_tol = *v;
    }
    if (auto v = t.take("output.path")) {
        c.out_path = *v;
    }
    if (auto v = t.take("output.format")) {
        try {
            c.format = parse_format(*v);
        } catch (const InputError& e) {
            fail("output.format", e.what());
        }
    }
    if (auto v = t.flag("output.timing")) {
        c.timing = *v;
    }
    if (auto v = t.count("seed")) {
        c.seed = *v;
    }
    if (auto v = t.take("constants")) {
        if (*v == "analytic") {
            c.empirical_constants = false;
        } else if (*v == "empirical") {
            c.empirical_constants = true;
        } else {
            fail("constants", "expected analytic or empirical, got '" + *v + "'");
        }
    }
    c.empirical_s_max = t.real("empirical.s_max");
    if (auto v = t.count("empirical.points")) {
        c.empirical_points = *v;
    }
    c.empirical_b = t.real("empirical.b");
    if (auto v = t.take("cache.dir")) {
        c.cache_dir = *v;
    }
    if (auto v = t.flag("cache.audit")) {
        c.audit_cache = *v;
    }
    if (auto v = t.count("jobs")) {
        c.jobs = *v;
    }
    if (auto v = t.real("validate.s_max")) {
        c.validate_s_max = *v;
    }
    if (auto v = t.count("validate.points")) {
        c.validate_points = *v;
    }
    if (auto v = t.count("validate.samples")) {
        c.validate_samples = *v;
    }
    t.reject_unused();
    check_invariants(c);
    return c;
}

void finalize_config(RunConfig& c)
{
    if (!c.command) {
        throw InputError("config key 'command': no command given (set it in the config or on the command line)");
    }
    check_invariants(c);
    switch (*c.command) {
    case Command::check:
        if (!c.beta) {
            fail("beta", "required by the check command");
        }
        break;
    case Command::sweep:
        if (!c.beta_min) {
            fail("beta_min", "required by the sweep command");
        }
        if (!c.beta_max) {
            fail("beta_max", "required by the sweep command");
        }
        break;
    case Command::certify:
    case Command::validate:
        break;
    }
}

std::map<std::string, std::string> flatten(const RunConfig& c)
{
    std::map<std::string, std::string> out;
    const auto list = [](const std::vector<double>& xs) {
        std::string s;
        for (double x : xs) {
            s += (s.empty() ? "" : ", ") + format_double(x);
        }
        return s;
    };
    out["model.variant"] = std::string(variant_name(c.model));
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TwoQubitXX>) {
                out["model.omega_a"] = format_double(m.omega_a);
                out["model.omega_b"] = format_double(m.omega_b);
                out["model.lambda"] = format_double(m.lambda);
            } else if constexpr (std::is_same_v<T, BandedInteraction>) {
                out["model.energies_a"] = list(m.energies_a);
                out["model.energies_b"] = list(m.energies_b);
                std::string s;
                for (const auto& b : m.couplings) {
                    s += (s.empty() ? "" : ", ") + std::to_string(b.level) + ":" + std::to_string(b.offset) + ":"
                         + format_complex(b.value);
                }
                out["model.couplings"] = s;
            } else if constexpr (std::is_same_v<T, JaynesCummingsCutoff>) {
                out["model.omega"] = format_double(m.omega);
                out["model.omega_mode"] = format_double(m.omega_mode);
                out["model.g"] = format_double(m.g);
                out["model.cutoff"] = format_double(m.cutoff);
                out["model.n_max"] = std::to_string(m.n_max);
            } else {
                out["model.omega0"] = format_double(m.omega0);
                out["model.bath_omegas"] = list(m.bath_omegas);
                std::string s;
                for (const auto& g : m.couplings) {
                    s += (s.empty() ? "" : ", ") + format_complex(g);
                }
                out["model.couplings"] = s;
                out["model.cutoff"] = format_double(m.cutoff);
                out["model.n_max"] = std::to_string(m.n_max);
            }
        },
        c.model);

    if (c.command) {
        out["command"] = std::string(to_string(*c.command));
    }
    if (c.beta) {
        out["beta"] = format_double(*c.beta);
    }
    if (c.beta_min) {
        out["beta_min"] = format_double(*c.beta_min);
    }
    if (c.beta_max) {
        out["beta_max"] = format_double(*c.beta_max);
    }
    out["steps"] = std::to_string(c.steps);
    out["scale"] = std::string(to_string(c.scale));
    out["lambda_grid"] = list(c.lambda_grid);
    out["tolerances.hs_tol"] = format_double(c.hs_tol);
    out["tolerances.psd_tol"] = format_double(c.psd_tol);
    out["output.path"] = c.out_path;
    out["output.format"] = std::string(to_string(c.format));
    out["output.timing"] = c.timing ? "true" : "false";
    out["seed"] = std::to_string(c.seed);
    out["constants"] = c.empirical_constants ? "empirical" : "analytic";
    if (c.empirical_s_max) {
        out["empirical.s_max"] = format_double(*c.empirical_s_max);
    }
    out["empirical.points"] = std::to_string(c.empirical_points);
    if (c.empirical_b) {
        out["empirical.b"] = format_double(*c.empirical_b);
    }
    out["cache.dir"] = c.cache_dir;
    out["cache.audit"] = c.audit_cache ? "true" : "false";
    out["jobs"] = std::to_string(c.jobs);
    out["validate.s_max"] = format_double(c.validate_s_max);
    out["validate.points"] = std::to_string(c.validate_points);
    out["validate.samples"] = std::to_string(c.validate_samples);
    return out;
}

} // namespace pptcert
