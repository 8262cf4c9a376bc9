#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "oracles.hpp"
#include "pptcert/error.hpp"
#include "pptcert/models.hpp"
#include "pptcert/perturbation.hpp"

using namespace pptcert;

namespace {

std::string message_of(const ModelSpec& spec)
{
    try {
        validate_model(spec);
    } catch (const InputError& e) {
        return e.what();
    }
    return {};
}

} // namespace

TEST_CASE("two-qubit model matrices")
{
    const BuiltModel m = build(TwoQubitXX{1.0, 1.0, 0.1});
    CHECK(m.space == BipartiteSpace(2, 2));
    const Eigen::Vector4d diag = m.h0.matrix().diagonal().real();
    CHECK(diag == Eigen::Vector4d(1, 0, 0, -1));
    CHECK(m.h0.matrix().isDiagonal(0.0));
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            CHECK(m.v.matrix()(i, j) == Complex(i + j == 3 ? 0.1 : 0.0, 0.0));
        }
    }
    CHECK(m.truncation_tail(3.0) == 0.0);
}

TEST_CASE("Jaynes-Cummings low spectrum")
{
    const JaynesCummingsCutoff jc{0.2, 1.0, 0.05, 3.0, 4};
    const BuiltModel m = build(jc);
    CHECK(m.space == BipartiteSpace(2, 5));
    const auto levels = sorted_levels(m);
    const double expected[] = {-0.2, 0.2, 0.8, 1.2};
    // |-,0>, |+,0>, |-,1>, |+,1> with |+> first in the atom factor
    const std::size_t index[] = {m.space.index(1, 0), m.space.index(0, 0), m.space.index(1, 1), m.space.index(0, 1)};
    for (int k = 0; k < 4; ++k) {
        CHECK(levels[static_cast<std::size_t>(k)].energy == doctest::Approx(expected[k]).epsilon(1e-14));
        CHECK(levels[static_cast<std::size_t>(k)].basis_index == index[k]);
    }
    // coupling |+,n> <-> |-,n+1> with amplitude g sqrt(n+1) inside the cutoff only
    for (std::size_t n = 0; n < 4; ++n) {
        const Complex x = m.v.matrix()(static_cast<Eigen::Index>(m.space.index(0, n)),
                                       static_cast<Eigen::Index>(m.space.index(1, n + 1)));
        const double upper = (static_cast<double>(n) + 1.0) - 0.2;
        const double expected_amp = upper <= 3.0 ? 0.05 * std::sqrt(static_cast<double>(n) + 1.0) : 0.0;
        CHECK(x.real() == doctest::Approx(expected_amp).epsilon(1e-14));
    }
    CHECK(jaynes_cummings_element_ratio(jc) <= 1.0);
    CHECK(std::isnan(jaynes_cummings_element_ratio(JaynesCummingsCutoff{0.2, 1.0, 0.0, 3.0, 4})));
}

TEST_CASE("Jaynes-Cummings validation")
{
    const std::string msg = message_of(JaynesCummingsCutoff{0.6, 1.0, 0.05, 3.0, 4});
    CHECK(msg.find("requires ω < Ω/2") != std::string::npos);
    CHECK_THROWS_AS(build(JaynesCummingsCutoff{0.6, 1.0, 0.05, 3.0, 4}), InputError);
    // n_max * Omega must reach the cutoff
    CHECK_THROWS_AS(validate_model(JaynesCummingsCutoff{0.2, 1.0, 0.05, 6.0, 3}), InputError);
}

TEST_CASE("oscillator star basics")
{
    const OscillatorStarCutoff zero{1.0, {0.9, 1.2}, {0.0, 0.0}, 2.0, 3};
    CHECK(build(zero).v.matrix().isZero(0.0));
    CHECK(analytic_constants(zero).a == 0.0);
    CHECK(has_zero_coupling(zero));

    const OscillatorStarCutoff one{1.0, {1.0}, {0.05}, 2.0, 2};
    const AssumptionConstants c = analytic_constants(one);
    CHECK(c.a == doctest::Approx(2.0 * 0.05 * 1.0 * 9.0).epsilon(1e-14));
    CHECK(c.a == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(c.b == 0.0);

    const BuiltModel m = build(one);
    CHECK(m.space == BipartiteSpace(3, 3));
    CHECK(m.truncated_modes.size() == 2);
    // geometric tail sum_{n > n_max} e^{-beta omega n} per mode
    const double beta = 0.8;
    double oracle_tail = 0.0;
    for (int mode = 0; mode < 2; ++mode) {
        for (int n = 3; n < 400; ++n) {
            oracle_tail += std::exp(-beta * n);
        }
    }
    CHECK(m.truncation_tail(beta) == doctest::Approx(oracle_tail).epsilon(1e-12));
    CHECK(m.truncation_tail(2.0) < m.truncation_tail(1.0));
}

TEST_CASE("shell counting")
{
    const ShellCount n1 = count_shell(OscillatorStarCutoff{1.0, {1.0}, {0.1}, 2.0, 2});
    CHECK(n1.count == 6);
    CHECK(n1.bound == doctest::Approx(9.0));
    const ShellCount vacuum = count_shell(OscillatorStarCutoff{1.0, {1.5}, {0.1}, 0.5, 1});
    CHECK(vacuum.count == 1);
    const ShellCount n2 = count_shell(OscillatorStarCutoff{1.0, {1.0, 1.0}, {0.1, 0.1}, 1.0, 1});
    CHECK(n2.count == 4);
    CHECK(n2.bound == doctest::Approx(8.0));
}

TEST_CASE("appendix bound")
{
    const std::vector<double> grid = {0.0, 0.5, 1.0, 2.0, 3.0};
    const AppendixReport flat = validate_appendix_bound(OscillatorStarCutoff{1.0, {1.0}, {0.05}, 2.0, 2}, grid);
    for (const auto& p : flat.points) {
        CHECK(p.dense <= p.bound);
        CHECK(p.dense == doctest::Approx(flat.points.front().dense).epsilon(1e-12));
        CHECK(p.bound == doctest::Approx(flat.points.front().bound).epsilon(1e-14));
    }
    const AppendixReport zero = validate_appendix_bound(OscillatorStarCutoff{1.0, {1.0}, {0.0}, 2.0, 2}, grid);
    CHECK(std::isnan(zero.max_ratio));
    for (const auto& p : zero.points) {
        CHECK(p.dense == 0.0);
        CHECK(std::isnan(p.slack_ratio));
    }
}

TEST_CASE("analytic constants dominate the dense norm")
{
    const std::vector<ModelSpec> specs = {
        TwoQubitXX{1.0, 0.4, 0.3},
        BandedInteraction{{0.0, 1.0, 2.5}, {0.0, 0.7}, {{0, 1, 0.05}, {1, 2, {0.02, -0.01}}, {2, 1, 0.04}}},
        JaynesCummingsCutoff{0.2, 1.0, 0.1, 4.0, 5},
        OscillatorStarCutoff{1.0, {0.8, 1.3}, {0.05, {0.03, 0.02}}, 2.5, 4},
    };
    for (const ModelSpec& spec : specs) {
        const BuiltModel m = build(spec);
        const AssumptionConstants c = analytic_constants(spec);
        for (double s : {0.0, 0.4, 1.0, 2.0, 3.0}) {
            const double dense = hs_norm(time_conjugated_interaction(m.h0, m.v, s).matrix());
            CHECK(dense <= c.a * std::exp(c.b * s) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("banded interaction")
{
    const BandedInteraction spec{{0.0, 1.0}, {0.0, 0.5}, {{0, 1, 0.1}, {1, 2, {0.0, 0.2}}}};
    const BuiltModel m = build(spec);
    const auto couplings = level_couplings(m);
    REQUIRE(couplings.size() == 2);
    CHECK(couplings[0].level == 0);
    CHECK(couplings[0].offset == 1);
    CHECK(couplings[0].value == Complex(0.1, 0.0));
    CHECK(couplings[1].value == Complex(0.0, 0.2));
    const AssumptionConstants c = analytic_constants(spec);
    CHECK(c.a == doctest::Approx(0.6));
    CHECK(c.b == doctest::Approx(1.0));
    CHECK_THROWS_AS(validate_model(BandedInteraction{{0.0}, {0.0, 1.0}, {{1, 1, 0.1}}}), InputError);
    CHECK_THROWS_AS(validate_model(BandedInteraction{{0.0}, {0.0, 1.0}, {{0, 0, 0.1}}}), InputError);
}

TEST_CASE("empirical constants")
{
    const ModelSpec spec = TwoQubitXX{1.0, 1.0, 0.2};
    const BuiltModel m = build(spec);
    const std::vector<double> grid = {0.0, 0.25, 0.5};
    const AssumptionConstants c = empirical_constants(m.h0, m.v, grid, 2.0);
    CHECK(c.provenance == Provenance::empirical);
    CHECK(c.s_star == 0.5);
    CHECK(c.a <= analytic_constants(spec).a * (1 + 1e-12));
    CHECK(c.a >= 0.4 * (1 - 1e-12));
    const std::vector<double> empty;
    CHECK_THROWS_AS(empirical_constants(m.h0, m.v, empty, 2.0), InputError);
    const std::vector<double> origin = {0.0};
    CHECK_THROWS_AS(empirical_constants(m.h0, m.v, origin, 2.0), InputError);
}

TEST_CASE("coupling replacement and keys")
{
    const ModelSpec jc = JaynesCummingsCutoff{0.2, 1.0, 0.05, 3.0, 4};
    CHECK(std::get<JaynesCummingsCutoff>(with_coupling(jc, 0.1)).g == 0.1);
    CHECK(has_zero_coupling(with_coupling(jc, 0.0)));
    CHECK(canonical_key(jc) != canonical_key(with_coupling(jc, 0.1)));
    CHECK(canonical_key(jc) == canonical_key(JaynesCummingsCutoff{0.2, 1.0, 0.05, 3.0, 4}));
    CHECK(variant_name(jc) == "jaynes_cummings");
}
