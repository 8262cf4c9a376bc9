#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pptcert/validate.hpp"

using namespace pptcert;

namespace {

const Finding* find(const ValidationReport& r, const std::string& name)
{
    for (const auto& f : r.findings) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

RunConfig config_for(const ModelSpec& spec)
{
    RunConfig c;
    c.model = spec;
    c.command = Command::validate;
    c.seed = 11;
    return c;
}

} // namespace

TEST_CASE("two-qubit model passes every check")
{
    DecompositionCache cache;
    const ValidationReport r = run_validation(config_for(TwoQubitXX{1.0, 1.0, 0.1}), cache);
    for (const auto& f : r.findings) {
        INFO(f.name << ": " << f.detail);
        CHECK(f.passed);
    }
    CHECK(r.ok());
    for (const char* name : {"assumption_bound", "dyson_bound", "factorization", "pt_sign_equivalence", "pt_isometry",
                             "consistency"}) {
        CHECK(find(r, name) != nullptr);
    }
    // a = 2|lambda| is attained at s = 0
    CHECK(find(r, "assumption_bound")->worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("corrupted partial transpose is caught")
{
    DecompositionCache cache;
    ValidationHooks hooks;
    hooks.partial_transpose = [](const Matrix& x, const BipartiteSpace& s) {
        Matrix y = partial_transpose(x, s);
        y(0, 0) *= 1.0 + 1e-6;
        return y;
    };
    const ValidationReport r = run_validation(config_for(TwoQubitXX{1.0, 1.0, 0.1}), cache, hooks);
    CHECK_FALSE(r.ok());
    CHECK_FALSE(find(r, "pt_isometry")->passed);

    ValidationHooks plain_transpose;
    plain_transpose.partial_transpose = [](const Matrix& x, const BipartiteSpace&) { return Matrix(x.transpose()); };
    const ValidationReport full = run_validation(config_for(TwoQubitXX{1.0, 1.0, 0.1}), cache, plain_transpose);
    CHECK_FALSE(find(full, "pt_isometry")->passed);
}

TEST_CASE("oscillator star appendix bound with slack")
{
    DecompositionCache cache;
    const ValidationReport r = run_validation(config_for(OscillatorStarCutoff{1.0, {1.2}, {0.05}, 2.0, 2}), cache);
    const Finding* f = find(r, "appendix_bound");
    REQUIRE(f != nullptr);
    CHECK(f->passed);
    CHECK(f->worst_ratio > 0.0);
    CHECK(f->worst_ratio < 1.0);
    CHECK(r.ok());
}

TEST_CASE("Jaynes-Cummings and banded models pass")
{
    DecompositionCache cache;
    const ValidationReport jc = run_validation(config_for(JaynesCummingsCutoff{0.2, 1.0, 0.05, 3.0, 4}), cache);
    CHECK(find(jc, "jc_element_bound")->passed);
    CHECK(jc.ok());
    const ValidationReport banded = run_validation(
        config_for(BandedInteraction{{0.0, 1.0, 2.5}, {0.0, 0.7}, {{0, 1, 0.05}, {1, 2, {0.02, -0.01}}}}), cache);
    CHECK(banded.ok());
}

TEST_CASE("empirical constants and zero coupling validate")
{
    DecompositionCache cache;
    RunConfig c = config_for(TwoQubitXX{1.0, 0.5, 0.2});
    c.empirical_constants = true;
    c.empirical_s_max = 1.0;
    const ValidationReport r = run_validation(c, cache);
    CHECK(r.ok());
    const ValidationReport zero = run_validation(config_for(TwoQubitXX{1.0, 0.5, 0.0}), cache);
    CHECK(zero.ok());
}
