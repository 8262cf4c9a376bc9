#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "pptcert/config.hpp"
#include "pptcert/error.hpp"

using namespace pptcert;

namespace {

const char* kTwoQubit = R"(
# minimal certify config
model.variant = two_qubit_xx
model.omega_a = 1.0
model.omega_b = 0.5
model.lambda  = 0.1
command = certify
)";

std::string error_of(const std::string& text)
{
    try {
        RunConfig c = parse_config(text);
        finalize_config(c);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("minimal config gets defaults")
{
    RunConfig c = parse_config(kTwoQubit);
    finalize_config(c);
    const auto& m = std::get<TwoQubitXX>(c.model);
    CHECK(m.omega_a == 1.0);
    CHECK(m.omega_b == 0.5);
    CHECK(m.lambda == 0.1);
    CHECK(c.command == Command::certify);
    CHECK(c.hs_tol == 1e-8);
    CHECK(c.psd_tol == 1e-10);
    CHECK(c.format == OutputFormat::csv);
    CHECK(c.steps == 20);
    CHECK(c.scale == GridScale::linear);
    CHECK_FALSE(c.empirical_constants);
}

TEST_CASE("every variant parses")
{
    const RunConfig jc = parse_config(R"(
model.variant = jaynes_cummings
model.omega = 0.2
model.omega_mode = 1
model.g = 0.05
model.cutoff = 3
model.n_max = 4
)");
    CHECK(std::get<JaynesCummingsCutoff>(jc.model).n_max == 4);

    const RunConfig star = parse_config(R"(
model.variant = oscillator_star
model.omega0 = 1
model.bath_omegas = 0.8, 1.3
model.couplings = 0.05+0.02i, -0.01i
model.cutoff = 2
model.n_max = 3
)");
    const auto& s = std::get<OscillatorStarCutoff>(star.model);
    REQUIRE(s.couplings.size() == 2);
    CHECK(s.couplings[0] == Complex(0.05, 0.02));
    CHECK(s.couplings[1] == Complex(0.0, -0.01));
    CHECK(s.bath_omegas[1] == 1.3);

    const RunConfig banded = parse_config(R"(
model.variant = banded
model.energies_a = 0, 1
model.energies_b = 0, 0.5
model.couplings = 0:1:0.1, 1:2:2e-2-1e-3i
)");
    const auto& b = std::get<BandedInteraction>(banded.model);
    REQUIRE(b.couplings.size() == 2);
    CHECK(b.couplings[1].level == 1);
    CHECK(b.couplings[1].offset == 2);
    CHECK(b.couplings[1].value == Complex(2e-2, -1e-3));
}

TEST_CASE("errors name the key")
{
    CHECK(error_of(std::string(kTwoQubit) + "model.lamda = 0.2\n").find("model.lamda") != std::string::npos);
    CHECK(error_of(std::string(kTwoQubit) + "model.lambda = 0.2\n").find("duplicate") != std::string::npos);
    CHECK(error_of("model.variant = two_qubit_xx\nmodel.omega_a = 1\nmodel.lambda = 0\n").find("model.omega_b")
          != std::string::npos);
    CHECK(error_of(std::string(kTwoQubit) + "beta = fast\n").find("'beta'") != std::string::npos);
    CHECK(error_of(std::string(kTwoQubit) + "tolerances.hs_tol = 0\n").find("tolerances.hs_tol")
          != std::string::npos);
    CHECK(error_of(std::string(kTwoQubit) + "steps = 1\n").find("steps") != std::string::npos);
    CHECK(error_of("model.variant = qutrit\n").find("model.variant") != std::string::npos);
    CHECK(error_of("just text\n").find("line 1") != std::string::npos);

    const std::string range = error_of(std::string(kTwoQubit) + "beta_min = 3\nbeta_max = 1\n");
    CHECK(range.find("beta_min") != std::string::npos);
    CHECK(range.find("beta_max") != std::string::npos);
    CHECK(error_of(std::string(kTwoQubit) + "beta_min = 2\nbeta_max = 2\n").find("beta_max") != std::string::npos);
}

TEST_CASE("Jaynes-Cummings frequency condition")
{
    const std::string msg = error_of(R"(
model.variant = jaynes_cummings
model.omega = 0.6
model.omega_mode = 1
model.g = 0.05
model.cutoff = 3
model.n_max = 4
)");
    CHECK(msg.find("requires ω < Ω/2") != std::string::npos);
    CHECK(msg.find("model") != std::string::npos);
}

TEST_CASE("command requirements")
{
    RunConfig check = parse_config(std::string(kTwoQubit));
    check.command = Command::check;
    CHECK_THROWS_AS(finalize_config(check), InputError);
    check.beta = 1.0;
    CHECK_NOTHROW(finalize_config(check));

    RunConfig sweep = parse_config(std::string(kTwoQubit));
    sweep.command = Command::sweep;
    CHECK_THROWS_AS(finalize_config(sweep), InputError);
    sweep.beta_min = 0.1;
    sweep.beta_max = 2.0;
    CHECK_NOTHROW(finalize_config(sweep));

    RunConfig none = parse_config("model.variant = two_qubit_xx\nmodel.omega_a = 1\nmodel.omega_b = 1\nmodel.lambda = 0\n");
    CHECK_THROWS_AS(finalize_config(none), InputError);
}

TEST_CASE("flatten round-trips through the parser")
{
    const std::string text = R"(
model.variant = oscillator_star
model.omega0 = 1
model.bath_omegas = 0.8, 1.3
model.couplings = 0.05+0.02i, -0.01i
model.cutoff = 2
model.n_max = 3
command = sweep
beta_min = 0.1
beta_max = 3
steps = 7
scale = log
lambda_grid = 0, 0.5, 1
tolerances.hs_tol = 1e-6
output.format = json
seed = 42
constants = empirical
empirical.points = 9
)";
    const RunConfig c = parse_config(text);
    std::string echoed;
    for (const auto& [key, value] : flatten(c)) {
        if (!value.empty()) {
            echoed += key + " = " + value + "\n";
        }
    }
    const RunConfig again = parse_config(echoed);
    CHECK(flatten(again) == flatten(c));
    CHECK(flatten(c).at("seed") == "42");
    CHECK(flatten(c).at("scale") == "log");
    CHECK(flatten(c).at("model.couplings") == "0.05+0.02i, 0-0.01i");
}

TEST_CASE("shortest round-trip formatting")
{
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(1e-10) == "1e-10");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
    CHECK(format_double(NAN) == "nan");
    for (double x : {0.1, 1.0 / 7.0, 6.02214076e23, -2.5e-300}) {
        CHECK(std::stod(format_double(x)) == x);
    }
}
