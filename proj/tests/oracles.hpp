#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "pptcert/operator.hpp"

namespace oracle {

using pptcert::Complex;
using pptcert::Matrix;

inline Matrix kron(const Matrix& x, const Matrix& y)
{
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            for (Eigen::Index k = 0; k < y.rows(); ++k) {
                for (Eigen::Index l = 0; l < y.cols(); ++l) {
                    out(i * y.rows() + k, j * y.cols() + l) = x(i, j) * y(k, l);
                }
            }
        }
    }
    return out;
}

/// Partial transpose from the defining formula on matrix units.
inline Matrix partial_transpose(const Matrix& x, Eigen::Index da, Eigen::Index db)
{
    Matrix out(x.rows(), x.cols());
    for (Eigen::Index k = 0; k < da; ++k) {
        for (Eigen::Index l = 0; l < db; ++l) {
            for (Eigen::Index m = 0; m < da; ++m) {
                for (Eigen::Index n = 0; n < db; ++n) {
                    out(k * db + l, m * db + n) = x(k * db + n, m * db + l);
                }
            }
        }
    }
    return out;
}

/// Matrix exponential by scaling and squaring (Eigen MatrixFunctions, Pade based).
inline Matrix expm(const Matrix& x)
{
    return x.exp();
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return normal_(engine_); }
    std::size_t index(std::size_t lo, std::size_t hi)
    {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
    }

    Matrix complex_matrix(Eigen::Index n)
    {
        Matrix x(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
                x(i, j) = Complex(normal(), normal());
            }
        }
        return x;
    }

    Matrix hermitian(Eigen::Index n)
    {
        const Matrix x = complex_matrix(n);
        return 0.5 * (x + x.adjoint());
    }

    /// Random density matrix X X^dagger / Tr.
    Matrix density(Eigen::Index n)
    {
        const Matrix x = complex_matrix(n);
        const Matrix rho = x * x.adjoint();
        return rho / rho.trace().real();
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

inline double max_abs(const Matrix& x)
{
    return x.cwiseAbs().maxCoeff();
}

} // namespace oracle
