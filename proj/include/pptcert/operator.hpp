#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace pptcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultHermTol = 1e-12;
inline constexpr double kDefaultRelativePsdTol = 1e-10;

/// Largest entrywise deviation |X - X^dagger|_ij.
double hermiticity_defect(const Matrix& x);

/// Dense square matrix checked to be Hermitian on construction.
///
/// The stored entries are the symmetrized (X + X^dagger)/2, so downstream
/// consumers see an exactly Hermitian matrix. The check is relative:
/// max|X - X^dagger|_ij <= herm_tol * max(1, max|X_ij|).
class HermitianOperator {
public:
    explicit HermitianOperator(Matrix entries, double herm_tol = kDefaultHermTol);

    static HermitianOperator zero(std::size_t dim);
    static HermitianOperator identity(std::size_t dim);
    static HermitianOperator diagonal(const RealVector& diag);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    double herm_tol() const { return herm_tol_; }
    const Matrix& matrix() const { return entries_; }

    HermitianOperator operator+(const HermitianOperator& other) const;
    HermitianOperator operator-(const HermitianOperator& other) const;
    HermitianOperator operator*(double scale) const;

private:
    Matrix entries_;
    double herm_tol_;
};

/// Square matrix with no structural guarantee beyond squareness.
class RawOperator {
public:
    explicit RawOperator(Matrix entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    Matrix& matrix() { return entries_; }

private:
    Matrix entries_;
};

/// H_A (x) H_B with the row-major product basis |e_k (x) f_l> -> k*dim_b + l.
struct BipartiteSpace {
    std::size_t dim_a = 1;
    std::size_t dim_b = 1;

    BipartiteSpace() = default;
    BipartiteSpace(std::size_t a, std::size_t b);

    std::size_t dim() const { return dim_a * dim_b; }
    std::size_t index(std::size_t k, std::size_t l) const { return k * dim_b + l; }

    /// Throws InputError unless the operator dimension equals dim_a*dim_b.
    void require_matches(std::size_t operator_dim) const;

    friend bool operator==(const BipartiteSpace&, const BipartiteSpace&) = default;
};

struct SpectralDecomposition {
    RealVector eigenvalues;   // ascending
    Matrix eigenvectors;      // columns, unitary

    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }

    /// U diag(f(lambda)) U^dagger for f(x) = exp(scale*x).
    Matrix exponential(double scale) const;
    Matrix reconstruct() const;
};

SpectralDecomposition decompose(const HermitianOperator& x);

Matrix tensor(const Matrix& x, const Matrix& y);
HermitianOperator tensor(const HermitianOperator& x, const HermitianOperator& y);

struct Norms {
    double op_norm = 0.0;     // largest singular value
    double hs_norm = 0.0;     // Frobenius
    double trace_norm = 0.0;  // sum of singular values
};

Norms norms(const Matrix& x);
inline double hs_norm(const Matrix& x) { return x.norm(); }
double op_norm(const Matrix& x);

/// exp(scale * x) through the eigendecomposition of x.
HermitianOperator expm_hermitian(const HermitianOperator& x, double scale);

/// <e_k f_l| T_B[X] |e_m f_n> = <e_k f_n| X |e_m f_l>.
Matrix partial_transpose(const Matrix& x, const BipartiteSpace& space);
HermitianOperator partial_transpose(const HermitianOperator& x, const BipartiteSpace& space);

/// Smallest eigenvalue of (X + X^dagger)/2; InputError when X is not Hermitian within herm_tol.
double min_eigenvalue(const Matrix& x, double herm_tol = kDefaultHermTol);
double min_eigenvalue(const HermitianOperator& x);

/// Ascending eigenvalues of a Hermitian operator.
RealVector eigenvalues(const HermitianOperator& x);

/// min_eigenvalue(x) >= -psd_tol; psd_tol defaults to 1e-10 * ||x||_inf.
bool is_psd(const HermitianOperator& x, double psd_tol);
bool is_psd(const HermitianOperator& x);

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
} // namespace pauli

} // namespace pptcert
