#include "pptcert/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "pptcert/error.hpp"

namespace pptcert {

namespace {

void require_square(const Matrix& x, const char* what)
{
    if (x.rows() != x.cols() || x.rows() < 1) {
        std::ostringstream msg;
        msg << what << ": expected a non-empty square matrix, got " << x.rows() << "x" << x.cols();
        throw InputError(msg.str());
    }
}

void require_hermitian(const Matrix& x, double herm_tol, const char* what)
{
    const double defect = hermiticity_defect(x);
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    if (!(defect <= herm_tol * scale)) {
        std::ostringstream msg;
        msg << what << ": matrix is not Hermitian (max |X - X^dagger| = " << defect
            << ", tolerance " << herm_tol * scale << ")";
        throw InputError(msg.str());
    }
}

Eigen::SelfAdjointEigenSolver<Matrix> solve(const Matrix& x, bool vectors)
{
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        x, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("Hermitian eigendecomposition failed to converge (dim "
                             + std::to_string(x.rows()) + ")");
    }
    if (!solver.eigenvalues().allFinite()) {
        throw NumericalError("Hermitian eigendecomposition produced non-finite eigenvalues");
    }
    return solver;
}

} // namespace

double hermiticity_defect(const Matrix& x)
{
    if (x.size() == 0) {
        return 0.0;
    }
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

HermitianOperator::HermitianOperator(Matrix entries, double herm_tol)
    : entries_(std::move(entries))
    , herm_tol_(herm_tol)
{
    require_square(entries_, "HermitianOperator");
    if (!(herm_tol_ >= 0.0)) {
        throw InputError("HermitianOperator: herm_tol must be nonnegative");
    }
    require_hermitian(entries_, herm_tol_, "HermitianOperator");
    Matrix sym = 0.5 * (entries_ + entries_.adjoint());
    entries_ = std::move(sym);
}

HermitianOperator HermitianOperator::zero(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(Matrix::Zero(n, n));
}

HermitianOperator HermitianOperator::identity(std::size_t dim)
{
    const auto n = static_cast<Eigen::Index>(dim);
    return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(const RealVector& diag)
{
    return HermitianOperator(diag.cast<Complex>().asDiagonal().toDenseMatrix());
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const
{
    return HermitianOperator(entries_ + other.entries_, std::max(herm_tol_, other.herm_tol_));
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const
{
    return HermitianOperator(entries_ - other.entries_, std::max(herm_tol_, other.herm_tol_));
}

HermitianOperator HermitianOperator::operator*(double scale) const
{
    return HermitianOperator(entries_ * scale, herm_tol_);
}

RawOperator::RawOperator(Matrix entries)
    : entries_(std::move(entries))
{
    require_square(entries_, "RawOperator");
}

BipartiteSpace::BipartiteSpace(std::size_t a, std::size_t b)
    : dim_a(a)
    , dim_b(b)
{
    if (a == 0 || b == 0) {
        throw InputError("BipartiteSpace: factor dimensions must be positive");
    }
}

void BipartiteSpace::require_matches(std::size_t operator_dim) const
{
    if (operator_dim != dim()) {
        std::ostringstream msg;
        msg << "dimension mismatch: operator has dim " << operator_dim << " but the bipartite space is "
            << dim_a << " x " << dim_b << " = " << dim();
        throw InputError(msg.str());
    }
}

Matrix SpectralDecomposition::exponential(double scale) const
{
    const RealVector weights = (scale * eigenvalues.array()).exp().matrix();
    Matrix result = eigenvectors * weights.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
    return 0.5 * (result + result.adjoint());
}

Matrix SpectralDecomposition::reconstruct() const
{
    return eigenvectors * eigenvalues.cast<Complex>().asDiagonal() * eigenvectors.adjoint();
}

SpectralDecomposition decompose(const HermitianOperator& x)
{
    auto solver = solve(x.matrix(), true);
    return SpectralDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

Matrix tensor(const Matrix& x, const Matrix& y)
{
    require_square(x, "tensor");
    require_square(y, "tensor");
    const Eigen::Index dy = y.rows();
    Matrix out(x.rows() * dy, x.cols() * dy);
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
        for (Eigen::Index m = 0; m < x.cols(); ++m) {
            out.block(k * dy, m * dy, dy, dy) = x(k, m) * y;
        }
    }
    return out;
}

HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y)
{
    return HermitianOperator(tensor(x.matrix(), y.matrix()), std::max(x.herm_tol(), y.herm_tol()));
}

Norms norms(const Matrix& x)
{
    require_square(x, "norms");
    Eigen::BDCSVD<Matrix> svd(x);
    const RealVector& sv = svd.singularValues();
    Norms out;
    out.op_norm = sv.size() > 0 ? sv.maxCoeff() : 0.0;
    out.hs_norm = x.norm();
    out.trace_norm = sv.sum();
    return out;
}

double op_norm(const Matrix& x)
{
    return norms(x).op_norm;
}

HermitianOperator expm_hermitian(const HermitianOperator& x, double scale)
{
    return HermitianOperator(decompose(x).exponential(scale));
}

Matrix partial_transpose(const Matrix& x, const BipartiteSpace& space)
{
    require_square(x, "partial_transpose");
    space.require_matches(static_cast<std::size_t>(x.rows()));
    const auto db = static_cast<Eigen::Index>(space.dim_b);
    const auto da = static_cast<Eigen::Index>(space.dim_a);
    Matrix out(x.rows(), x.cols());
    // Block (k, m) of size dim_b x dim_b is transposed in place.
    for (Eigen::Index k = 0; k < da; ++k) {
        for (Eigen::Index m = 0; m < da; ++m) {
            out.block(k * db, m * db, db, db) = x.block(k * db, m * db, db, db).transpose();
        }
    }
    return out;
}

HermitianOperator partial_transpose(const HermitianOperator& x, const BipartiteSpace& space)
{
    return HermitianOperator(partial_transpose(x.matrix(), space), x.herm_tol());
}

double min_eigenvalue(const Matrix& x, double herm_tol)
{
    require_square(x, "min_eigenvalue");
    require_hermitian(x, herm_tol, "min_eigenvalue");
    const Matrix sym = 0.5 * (x + x.adjoint());
    return solve(sym, false).eigenvalues()(0);
}

double min_eigenvalue(const HermitianOperator& x)
{
    return solve(x.matrix(), false).eigenvalues()(0);
}

RealVector eigenvalues(const HermitianOperator& x)
{
    return solve(x.matrix(), false).eigenvalues();
}

bool is_psd(const HermitianOperator& x, double psd_tol)
{
    return min_eigenvalue(x) >= -psd_tol;
}

bool is_psd(const HermitianOperator& x)
{
    const RealVector ev = eigenvalues(x);
    const double norm = ev.cwiseAbs().maxCoeff();
    return ev(0) >= -kDefaultRelativePsdTol * norm;
}

namespace pauli {

Matrix identity()
{
    return Matrix::Identity(2, 2);
}

Matrix x()
{
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix y()
{
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix z()
{
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

} // namespace pauli

} // namespace pptcert
