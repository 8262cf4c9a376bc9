#include "pptcert/perturbation.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Sparse>

#include "pptcert/error.hpp"
#include "pptcert/quadrature.hpp"

namespace pptcert {

std::string_view to_string(Provenance p)
{
    return p == Provenance::analytic ? "analytic" : "empirical";
}

RawOperator time_conjugated_interaction(const SpectralDecomposition& h0, const HermitianOperator& v, double s)
{
    if (h0.dim() != v.dim()) {
        throw InputError("time_conjugated_interaction: H0 and V dimensions differ");
    }
    if (s == 0.0) {
        return RawOperator(v.matrix());
    }
    const Matrix left = h0.exponential(-s);
    const Matrix right = h0.exponential(s);
    return RawOperator(left * v.matrix() * right);
}

RawOperator time_conjugated_interaction(const HermitianOperator& h0, const HermitianOperator& v, double s)
{
    if (s == 0.0) {
        return RawOperator(v.matrix());
    }
    return time_conjugated_interaction(decompose(h0), v, s);
}

std::vector<double> interaction_norms(const SpectralDecomposition& h0, const HermitianOperator& v,
                                      std::span<const double> s_grid)
{
    if (h0.dim() != v.dim()) {
        throw InputError("interaction_norms: H0 and V dimensions differ");
    }
    const Matrix v_eig = h0.eigenvectors.adjoint() * v.matrix() * h0.eigenvectors;
    const auto n = v_eig.rows();
    const Eigen::ArrayXXd mag2 = v_eig.cwiseAbs2().array();
    std::vector<double> out;
    out.reserve(s_grid.size());
    for (double s : s_grid) {
        double sum = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (mag2(i, j) != 0.0) {
                    sum += mag2(i, j) * std::exp(-2.0 * s * (h0.eigenvalues(i) - h0.eigenvalues(j)));
                }
            }
        }
        out.push_back(std::sqrt(sum));
    }
    return out;
}

AssumptionConstants finite_dimensional_constants(const SpectralDecomposition& h0, const HermitianOperator& v)
{
    AssumptionConstants out;
    out.a = hs_norm(v.matrix());
    out.b = h0.eigenvalues(h0.eigenvalues.size() - 1) - h0.eigenvalues(0);
    out.provenance = Provenance::analytic;
    return out;
}

double series_parameter(double a, double b, double beta)
{
    if (b < 1e-12) {
        return a * beta;
    }
    return a * std::expm1(beta * b) / b;
}

double dyson_norm_bound(double a, double b, double beta)
{
    return std::expm1(series_parameter(a, b, beta));
}

double exponential_tail(double c, std::size_t order)
{
    if (c <= 0.0) {
        return 0.0;
    }
    const double first = static_cast<double>(order) + 1.0;
    double term = std::exp(first * std::log(c) - std::lgamma(first + 1.0));
    double sum = 0.0;
    for (double k = first; term > 0.0; k += 1.0) {
        sum += term;
        if (!std::isfinite(sum)) {
            return INFINITY;
        }
        if (term < 1e-17 * sum && k > c) {
            break;
        }
        term *= c / (k + 1.0);
    }
    return sum;
}

namespace {

struct SeriesOnRule {
    Matrix d;  // in the H0 eigenbasis
    std::vector<double> term_norms;
    std::vector<double> partial_sum_norms;
};

/// Level-by-level evaluation in the H0 eigenbasis, where
/// V(t)_ij = V_ij exp(-t (E_i - E_j)).
///
/// Each level is stored as an (n*n) x m stack, one column per node. On every
/// panel the running integral is the full integral over earlier panels plus a
/// local block, so the update costs m * nodes_per_panel instead of m^2.
SeriesOnRule evaluate_on_rule(const RealVector& energies, const Matrix& v_eig, std::size_t order,
                              const quadrature::SimplexRule& rule)
{
    using Sparse = Eigen::SparseMatrix<Complex>;
    const auto n = v_eig.rows();
    const auto nn = n * n;
    const auto m = static_cast<Eigen::Index>(rule.size());
    const auto q = static_cast<Eigen::Index>(rule.nodes_per_panel());
    const auto panels = static_cast<Eigen::Index>(rule.panels());
    const auto& t = rule.nodes();
    const Eigen::Map<const RealVector> w(rule.weights().data(), m);
    const Eigen::MatrixXd& running = rule.running_integral();

    // Entries below this are rotation noise of structurally zero couplings.
    const double prune = 1e-15 * v_eig.cwiseAbs().maxCoeff();
    std::vector<Eigen::Triplet<Complex>> pattern;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v_eig(i, j)) > prune) {
                pattern.emplace_back(i, j, v_eig(i, j));
            }
        }
    }
    const bool sparse = pattern.size() * 4 < static_cast<std::size_t>(nn);

    std::vector<Sparse> v_sparse;
    Matrix v_dense;
    if (sparse) {
        v_sparse.resize(static_cast<std::size_t>(m));
    } else {
        v_dense.resize(nn, m);
    }
    for (Eigen::Index k = 0; k < m; ++k) {
        const double tk = t[static_cast<std::size_t>(k)];
        if (sparse) {
            std::vector<Eigen::Triplet<Complex>> entries;
            entries.reserve(pattern.size());
            for (const auto& e : pattern) {
                entries.emplace_back(e.row(), e.col(), e.value() * std::exp(-tk * (energies(e.row()) - energies(e.col()))));
            }
            Sparse vt(n, n);
            vt.setFromTriplets(entries.begin(), entries.end());
            v_sparse[static_cast<std::size_t>(k)] = std::move(vt);
        } else {
            Eigen::Map<Matrix> vt(v_dense.col(k).data(), n, n);
            for (Eigen::Index j = 0; j < n; ++j) {
                for (Eigen::Index i = 0; i < n; ++i) {
                    vt(i, j) = v_eig(i, j) * std::exp(-tk * (energies(i) - energies(j)));
                }
            }
        }
    }

    std::vector<Matrix> local(static_cast<std::size_t>(panels));
    for (Eigen::Index p = 0; p < panels; ++p) {
        local[static_cast<std::size_t>(p)] = running.block(p * q, p * q, q, q).transpose().cast<Complex>();
    }

    SeriesOnRule out;
    out.d = Matrix::Zero(n, n);
    Matrix level(nn, m);      // P_{n-1}(t_k)
    Matrix integrand(nn, m);  // P_{n-1}(t_k) V(t_k)
    double sign = 1.0;
    for (std::size_t ord = 1; ord <= order; ++ord) {
        sign = -sign;
        for (Eigen::Index k = 0; k < m; ++k) {
            Eigen::Map<Matrix> dst(integrand.col(k).data(), n, n);
            if (ord == 1) {
                if (sparse) {
                    dst = Matrix(v_sparse[static_cast<std::size_t>(k)]);
                } else {
                    dst = Eigen::Map<const Matrix>(v_dense.col(k).data(), n, n);
                }
            } else {
                const Eigen::Map<const Matrix> prev(level.col(k).data(), n, n);
                if (sparse) {
                    dst.noalias() = prev * v_sparse[static_cast<std::size_t>(k)];
                } else {
                    dst.noalias() = prev * Eigen::Map<const Matrix>(v_dense.col(k).data(), n, n);
                }
            }
        }
        const Eigen::VectorXcd full_vec = integrand * w.cast<Complex>();
        const Eigen::Map<const Matrix> full(full_vec.data(), n, n);
        out.term_norms.push_back(full.norm());
        out.d += sign * full;
        out.partial_sum_norms.push_back(out.d.norm());
        if (ord == order) {
            break;
        }
        Eigen::VectorXcd prefix = Eigen::VectorXcd::Zero(nn);
        for (Eigen::Index p = 0; p < panels; ++p) {
            auto block = integrand.middleCols(p * q, q);
            level.middleCols(p * q, q).noalias() = block * local[static_cast<std::size_t>(p)];
            level.middleCols(p * q, q).colwise() += prefix;
            prefix.noalias() += block * w.segment(p * q, q).cast<Complex>();
        }
    }
    return out;
}

} // namespace

DysonResult dyson_series(const SpectralDecomposition& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const AssumptionConstants& constants, const QuadratureOptions& options)
{
    if (!(beta > 0.0)) {
        throw InputError("dyson_series: beta must be positive");
    }
    if (!(hs_tol > 0.0)) {
        throw InputError("dyson_series: hs_tol must be positive");
    }
    if (h0.dim() != v.dim()) {
        throw InputError("dyson_series: H0 and V dimensions differ");
    }

    DysonResult result;
    result.beta = beta;
    result.c = series_parameter(constants.a, constants.b, beta);
    if (!std::isfinite(result.c)) {
        throw NumericalError("dyson_series: series parameter c is not finite; reduce beta or the interaction");
    }

    std::size_t order = 0;
    double tail = exponential_tail(result.c, 0);
    while (tail > hs_tol) {
        ++order;
        if (order > options.max_order) {
            std::ostringstream msg;
            msg << "dyson_series: series parameter c = " << result.c << " needs more than " << options.max_order
                << " orders to reach hs_tol = " << hs_tol << "; use a smaller beta or a weaker interaction";
            throw NumericalError(msg.str());
        }
        tail = exponential_tail(result.c, order);
    }
    result.order = order;
    result.tail_bound = tail;

    const auto n = static_cast<Eigen::Index>(v.dim());
    if (order == 0) {
        result.d = RawOperator(Matrix::Zero(n, n));
        return result;
    }

    const Matrix& u = h0.eigenvectors;
    const Matrix v_eig = u.adjoint() * v.matrix() * u;

    std::size_t panels = std::max<std::size_t>(1, options.initial_panels);
    quadrature::SimplexRule coarse_rule(beta, panels, options.nodes_per_panel);
    SeriesOnRule coarse = evaluate_on_rule(h0.eigenvalues, v_eig, order, coarse_rule);
    SeriesOnRule fine;
    std::size_t fine_nodes = 0;
    double estimate = 0.0;
    for (;;) {
        quadrature::SimplexRule fine_rule(beta, 2 * panels, options.nodes_per_panel);
        fine = evaluate_on_rule(h0.eigenvalues, v_eig, order, fine_rule);
        fine_nodes = fine_rule.size();
        estimate = (fine.d - coarse.d).norm();
        panels *= 2;
        if (estimate <= hs_tol || 2 * panels > options.max_panels) {
            break;
        }
        coarse = std::move(fine);
    }

    result.d = RawOperator(u * fine.d * u.adjoint());
    result.quadrature_estimate = estimate;
    result.quadrature_nodes = fine_nodes;
    result.term_norms = std::move(fine.term_norms);
    result.partial_sum_norms = std::move(fine.partial_sum_norms);
    return result;
}

DysonResult dyson_series(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const AssumptionConstants& constants, const QuadratureOptions& options)
{
    return dyson_series(decompose(h0), v, beta, hs_tol, constants, options);
}

DysonResult dyson_series(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                         const QuadratureOptions& options)
{
    const SpectralDecomposition spec = decompose(h0);
    return dyson_series(spec, v, beta, hs_tol, finite_dimensional_constants(spec, v), options);
}

FOperator f_operator(const SpectralDecomposition& h0, const HermitianOperator& v, double beta, double hs_tol,
                     const AssumptionConstants& constants, const QuadratureOptions& options)
{
    FOperator out;
    out.beta = beta;
    out.half = dyson_series(h0, v, 0.5 * beta, hs_tol, constants, options);
    const Matrix& d = out.half.d.matrix();
    const Matrix raw = d.adjoint() + d + d.adjoint() * d;
    out.asymmetry = hermiticity_defect(raw);
    out.f = HermitianOperator(raw, std::max(kDefaultHermTol, 10.0 * hs_tol));
    out.norm_bound = std::expm1(2.0 * series_parameter(constants.a, constants.b, 0.5 * beta));
    return out;
}

FOperator f_operator(const HermitianOperator& h0, const HermitianOperator& v, double beta, double hs_tol,
                     const AssumptionConstants& constants, const QuadratureOptions& options)
{
    return f_operator(decompose(h0), v, beta, hs_tol, constants, options);
}

double factorization_residual(const HermitianOperator& h0, const HermitianOperator& v, double beta,
                              const FOperator& f)
{
    const SpectralDecomposition h0_spec = decompose(h0);
    const Matrix half = h0_spec.exponential(-0.5 * beta);
    const auto n = static_cast<Eigen::Index>(h0.dim());
    const Matrix sandwich = half * (Matrix::Identity(n, n) + f.f.matrix()) * half;
    const Matrix exact = expm_hermitian(h0 + v, -beta).matrix();
    return (exact - sandwich).norm();
}

double dyson_residual(const HermitianOperator& h0, const HermitianOperator& v, const DysonResult& d)
{
    const auto n = static_cast<Eigen::Index>(h0.dim());
    const Matrix exact = expm_hermitian(h0 + v, -d.beta).matrix();
    const Matrix approx = (Matrix::Identity(n, n) + d.d.matrix()) * expm_hermitian(h0, -d.beta).matrix();
    return (exact - approx).norm();
}

} // namespace pptcert
