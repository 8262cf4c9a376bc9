#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pptcert/constants.hpp"
#include "pptcert/operator.hpp"

namespace pptcert {

/// V(s) = e^{-s H0} V e^{s H0} as a dense triple product. V(0) is returned unchanged.
RawOperator time_conjugated_interaction(const HermitianOperator& h0, const HermitianOperator& v, double s);
RawOperator time_conjugated_interaction(const SpectralDecomposition& h0, const HermitianOperator& v, double s);

/// ||V(s)||_2 at each s, evaluated in the H0 eigenbasis where V(s)_ij = V_ij e^{-s(E_i - E_j)}.
std::vector<double> interaction_norms(const SpectralDecomposition& h0, const HermitianOperator& v,
                                      std::span<const double> s_grid);

/// a = ||V||_2, b = max spec(H0) - min spec(H0). Valid for every s >= 0 on a finite-dimensional space.
AssumptionConstants finite_dimensional_constants(const SpectralDecomposition& h0, const HermitianOperator& v);

/// c = a (e^{beta b} - 1) / b, with the b -> 0 limit a*beta.
double series_parameter(double a, double b, double beta);

/// exp[a (e^{beta b} - 1)/b] - 1: Hilbert-Schmidt bound on the full Dyson remainder D(beta).
double dyson_norm_bound(double a, double b, double beta);

/// sum_{k > order} c^k / k!, summed directly (no cancellation against e^c).
double exponential_tail(double c, std::size_t order);

struct QuadratureOptions {
    std::size_t nodes_per_panel = 32;
    std::size_t initial_panels = 1;
    std::size_t max_panels = 32;
    std::size_t max_order = 40;
};

struct DysonResult {
    double beta = 0.0;
    std::size_t order = 0;
    RawOperator d{Matrix::Zero(1, 1)};
    double tail_bound = 0.0;
    double c = 0.0;
    /// ||D_fine - D_coarse||_2 between the last two panel doublings (0 when no quadrature ran).
    double quadrature_estimate = 0.0;
    std::size_t quadrature_nodes = 0;
    /// ||P_n(beta)||_2 of the n-th ordered integral, n = 1..order.
    std::vector<double> term_norms;
    /// ||sum_{k<=n} (-1)^k P_k(beta)||_2, n = 1..order.
    std::vector<double> partial_sum_norms;
};

/// Truncated imaginary-time Dyson series
///   D(beta) = sum_{n>=1} (-1)^n int_{0<=s_n<=...<=s_1<=beta} V(s_n)...V(s_1) ds,
/// so that e^{-beta(H0+V)} = [1 + D(beta)] e^{-beta H0}.
///
/// The truncation order is the smallest n whose certified tail
/// sum_{k>n} c^k/k!, c = a(e^{beta b}-1)/b, is <= hs_tol; a and b come from
/// `constants`. The ordered integrals are evaluated level by level with the
/// composite Gauss-Legendre running-integral rule, doubling the panel count
/// until two successive results agree to hs_tol (or max_panels is reached).
DysonResult dyson_series(const SpectralDecomposition& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const AssumptionConstants& constants, const QuadratureOptions& options = {});
DysonResult dyson_series(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const AssumptionConstants& constants, const QuadratureOptions& options = {});
/// Uses finite_dimensional_constants for the truncation order.
DysonResult dyson_series(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const QuadratureOptions& options = {});

struct FOperator {
    double beta = 0.0;
    HermitianOperator f{Matrix::Zero(1, 1)};
    /// exp[2a (e^{beta b/2} - 1)/b] - 1
    double norm_bound = 0.0;
    /// max |F - F^dagger|_ij before symmetrization.
    double asymmetry = 0.0;
    DysonResult half;
};

/// F(beta) = D(beta/2)^dagger + D(beta/2) + D(beta/2)^dagger D(beta/2), symmetrized.
FOperator f_operator(const SpectralDecomposition& h0, const HermitianOperator& v, double beta, double hs_tol,
                     const AssumptionConstants& constants, const QuadratureOptions& options = {});
FOperator f_operator(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                     const AssumptionConstants& constants, const QuadratureOptions& options = {});

/// ||e^{-beta(H0+V)} - e^{-beta H0/2} (1 + F) e^{-beta H0/2}||_2
double factorization_residual(const HermitianOperator& h0, const HermitianOperator& v, double beta,
                              const FOperator& f);

/// ||e^{-beta(H0+V)} - (1 + D) e^{-beta H0}||_2
double dyson_residual(const HermitianOperator& h0, const HermitianOperator& v, const DysonResult& d);

} // namespace pptcert
