#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pptcert/error.hpp"
#include "pptcert/models.hpp"
#include "pptcert/perturbation.hpp"

using namespace pptcert;

namespace {

BuiltModel two_qubit(double wa, double wb, double lambda)
{
    return build(TwoQubitXX{wa, wb, lambda});
}

Matrix one_qubit_factor(double omega, double s)
{
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = std::exp(-s * omega);
    m(1, 0) = std::exp(s * omega);
    return m;
}

} // namespace

TEST_CASE("time-conjugated interaction, two qubits")
{
    const double wa = 1.0, wb = 0.6, lambda = 0.25;
    const BuiltModel m = two_qubit(wa, wb, lambda);
    CHECK(time_conjugated_interaction(m.h0, m.v, 0.0).matrix() == m.v.matrix());
    for (double s : {0.0, 0.3, 1.1, 2.5}) {
        const Matrix dense = time_conjugated_interaction(m.h0, m.v, s).matrix();
        const Matrix expected = lambda * oracle::kron(one_qubit_factor(wa, s), one_qubit_factor(wb, s));
        CHECK(oracle::max_abs(dense - expected) <= 1e-12 * std::max(1.0, oracle::max_abs(expected)));
        const double closed = 2.0 * lambda * std::sqrt(std::cosh(2 * s * wa) * std::cosh(2 * s * wb));
        CHECK(hs_norm(dense) == doctest::Approx(closed).epsilon(1e-12));
    }
    const BuiltModel strong = two_qubit(1.0, 1.0, 1.0);
    CHECK(hs_norm(time_conjugated_interaction(strong.h0, strong.v, 0.5).matrix())
          == doctest::Approx(2.0 * std::cosh(1.0)).epsilon(1e-12));
    CHECK(2.0 * std::cosh(1.0) == doctest::Approx(3.08616).epsilon(1e-5));
}

TEST_CASE("commuting interaction is time independent")
{
    const BuiltModel m = two_qubit(1.0, 0.4, 0.0);
    const HermitianOperator v = m.h0 * 0.3;
    for (double s : {0.5, 2.0}) {
        CHECK(oracle::max_abs(time_conjugated_interaction(m.h0, v, s).matrix() - v.matrix()) <= 1e-13);
    }
}

TEST_CASE("series parameter and norm bound")
{
    CHECK(dyson_norm_bound(0.0, 2.0, 1.0) == 0.0);
    CHECK(dyson_norm_bound(1.0, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
    CHECK(dyson_norm_bound(1.0, 0.0, 1.0) == doctest::Approx(1.71828).epsilon(1e-5));
    const double oracle_value = std::exp(0.2 * (std::exp(1.0) - 1.0) / 2.0) - 1.0;
    CHECK(dyson_norm_bound(0.2, 2.0, 0.5) == doctest::Approx(oracle_value).epsilon(1e-14));
    CHECK(dyson_norm_bound(0.2, 2.0, 0.5) == doctest::Approx(0.18747).epsilon(1e-4));
    // continuity of the b -> 0 limit
    CHECK(series_parameter(0.7, 1e-9, 2.0) == doctest::Approx(1.4).epsilon(1e-8));
}

TEST_CASE("exponential tail")
{
    for (double c : {0.01, 0.5, 3.0, 8.0}) {
        for (std::size_t order : {0u, 1u, 4u, 12u}) {
            long double sum = 0.0L, term = 1.0L;
            for (int k = 1; k <= 200; ++k) {
                term *= static_cast<long double>(c) / k;
                if (static_cast<std::size_t>(k) > order) {
                    sum += term;
                }
            }
            CHECK(exponential_tail(c, order) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
        }
    }
    CHECK(exponential_tail(0.0, 3) == 0.0);
}

TEST_CASE("dyson series: zero and commuting interactions")
{
    const BuiltModel m = two_qubit(1.0, 0.5, 0.0);
    const DysonResult zero = dyson_series(m.h0, m.v, 1.0, 1e-10);
    CHECK(zero.order == 0);
    CHECK(zero.d.matrix().isZero(0.0));

    const HermitianOperator v = m.h0 * 0.2 + HermitianOperator::identity(4) * 0.1;
    for (double beta : {0.3, 1.0, 2.0}) {
        const DysonResult d = dyson_series(m.h0, v, beta, 1e-12);
        const Matrix lhs = Matrix::Identity(4, 4) + d.d.matrix();
        const Matrix rhs = oracle::expm(-beta * v.matrix());
        CHECK(oracle::max_abs(lhs - rhs) <= 1e-9);
        CHECK(dyson_residual(m.h0, v, d) <= 1e-9);
    }
}

TEST_CASE("dyson series matches direct exponentiation")
{
    const BuiltModel m = two_qubit(1.0, 1.0, 0.1);
    const AssumptionConstants c = analytic_constants(TwoQubitXX{1.0, 1.0, 0.1});
    for (double hs_tol : {1e-4, 1e-8}) {
        const DysonResult d = dyson_series(m.h0, m.v, 0.5, hs_tol, c);
        CHECK(d.order >= 1);
        const Matrix exact = oracle::expm(-0.5 * m.hamiltonian().matrix());
        const Matrix approx = (Matrix::Identity(4, 4) + d.d.matrix()) * oracle::expm(-0.5 * m.h0.matrix());
        CHECK(hs_norm(exact - approx) <= 10.0 * (hs_tol + d.quadrature_estimate));
        CHECK(d.tail_bound <= hs_tol);
        CHECK(hs_norm(d.d.matrix()) <= dyson_norm_bound(c.a, c.b, 0.5) + hs_tol);
        double bound = 1.0;
        for (std::size_t n = 1; n <= d.order; ++n) {
            bound *= d.c / static_cast<double>(n);
            CHECK(d.term_norms[n - 1] <= bound * (1 + 1e-12));
        }
    }
}

TEST_CASE("F operator")
{
    const BuiltModel m = two_qubit(1.0, 1.0, 0.1);
    const AssumptionConstants c = analytic_constants(TwoQubitXX{1.0, 1.0, 0.1});
    const double hs_tol = 1e-10;
    const FOperator f = f_operator(m.h0, m.v, 0.5, hs_tol, c);
    const double nd = hs_norm(f.half.d.matrix());
    CHECK(hs_norm(f.f.matrix()) <= nd * (2.0 + nd) * (1.0 + 1e-12) + 1e-15);
    CHECK(hs_norm(f.f.matrix()) <= f.norm_bound);
    CHECK(f.norm_bound == doctest::Approx(std::exp(2 * c.a * (std::exp(0.5 * c.b / 2) - 1) / c.b) - 1).epsilon(1e-14));

    const Matrix half = oracle::expm(-0.25 * m.h0.matrix());
    const Matrix sandwich = half * (Matrix::Identity(4, 4) + f.f.matrix()) * half;
    const Matrix exact = oracle::expm(-0.5 * m.hamiltonian().matrix());
    CHECK(oracle::max_abs(sandwich - exact) <= 10.0 * (hs_tol + f.half.quadrature_estimate) * 3.0);
    CHECK(factorization_residual(m.h0, m.v, 0.5, f) <= 10.0 * (hs_tol + f.half.quadrature_estimate) * 3.0);

    const BuiltModel free = two_qubit(1.0, 1.0, 0.0);
    const FOperator f0 = f_operator(free.h0, free.v, 0.5, hs_tol, analytic_constants(TwoQubitXX{1.0, 1.0, 0.0}));
    CHECK(f0.f.matrix().isZero(0.0));
    CHECK(factorization_residual(free.h0, free.v, 0.5, f0) <= 1e-15);
}

TEST_CASE("factorization residual shrinks with hs_tol")
{
    const BuiltModel m = two_qubit(1.0, 1.0, 0.1);
    const AssumptionConstants c = analytic_constants(TwoQubitXX{1.0, 1.0, 0.1});
    double previous = INFINITY;
    for (double hs_tol : {1e-4, 1e-6, 1e-8}) {
        const FOperator f = f_operator(m.h0, m.v, 1.0, hs_tol, c);
        const double r = factorization_residual(m.h0, m.v, 1.0, f);
        CHECK(r <= 10.0 * (hs_tol + f.half.quadrature_estimate));
        CHECK(r < previous);
        previous = r;
    }
}

TEST_CASE("series that cannot be truncated is a numerical error")
{
    const BuiltModel m = two_qubit(1.0, 1.0, 5.0);
    const AssumptionConstants c = analytic_constants(TwoQubitXX{1.0, 1.0, 5.0});
    CHECK_THROWS_AS(dyson_series(m.h0, m.v, 3.0, 1e-8, c), NumericalError);
    CHECK_THROWS_AS(dyson_series(m.h0, m.v, -1.0, 1e-8, c), InputError);
}

TEST_CASE("eigenbasis norm curve matches the dense product")
{
    const OscillatorStarCutoff spec{1.0, {0.7, 1.4}, {0.05, {0.02, 0.03}}, 2.5, 4};
    const BuiltModel m = build(spec);
    const SpectralDecomposition h0 = decompose(m.h0);
    const std::vector<double> grid = {0.0, 0.3, 1.0, 2.5};
    const std::vector<double> fast = interaction_norms(h0, m.v, grid);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const Matrix left = oracle::expm(-grid[k] * m.h0.matrix());
        const Matrix right = oracle::expm(grid[k] * m.h0.matrix());
        CHECK(fast[k] == doctest::Approx(hs_norm(left * m.v.matrix() * right)).epsilon(1e-11));
    }
}
