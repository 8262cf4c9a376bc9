#include "pptcert/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "pptcert/error.hpp"

namespace pptcert::quadrature {

std::vector<double> legendre_values(std::size_t max_degree, double x)
{
    std::vector<double> p(max_degree + 1);
    p[0] = 1.0;
    if (max_degree >= 1) {
        p[1] = x;
    }
    for (std::size_t m = 1; m < max_degree; ++m) {
        const double md = static_cast<double>(m);
        p[m + 1] = ((2.0 * md + 1.0) * x * p[m] - md * p[m - 1]) / (md + 1.0);
    }
    return p;
}

GaussLegendreRule gauss_legendre(std::size_t n)
{
    if (n == 0) {
        throw InputError("gauss_legendre: need at least one node");
    }
    GaussLegendreRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess for the i-th largest root.
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            dp = nd * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[n - 1 - i] = w;
        rule.weights[i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

SimplexRule::SimplexRule(double upper, std::size_t panels, std::size_t nodes_per_panel)
    : upper_(upper)
    , panels_(panels)
    , nodes_per_panel_(nodes_per_panel)
{
    if (!(upper > 0.0) || panels == 0 || nodes_per_panel == 0) {
        throw InputError("SimplexRule: need upper > 0 and at least one panel and node");
    }
    const std::size_t k = nodes_per_panel;
    const GaussLegendreRule ref = gauss_legendre(k);

    // Local running integral on [-1, 1]:
    //   L_ij = int_{-1}^{x_i} l_j(x) dx,  l_j the Lagrange basis at the GL nodes.
    // With l_j(x) = w_j sum_m (2m+1)/2 P_m(x_j) P_m(x) and
    // int_{-1}^{x} P_m = (P_{m+1}(x) - P_{m-1}(x)) / (2m+1) for m >= 1.
    std::vector<std::vector<double>> p_at(k);
    for (std::size_t i = 0; i < k; ++i) {
        p_at[i] = legendre_values(k, ref.nodes[i]);
    }
    Eigen::MatrixXd local(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.5 * (ref.nodes[i] + 1.0);
            for (std::size_t m = 1; m < k; ++m) {
                acc += 0.5 * p_at[j][m] * (p_at[i][m + 1] - p_at[i][m - 1]);
            }
            local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ref.weights[j] * acc;
        }
    }

    const std::size_t total = panels * k;
    const double width = upper / static_cast<double>(panels);
    const double half = 0.5 * width;
    nodes_.resize(total);
    weights_.resize(total);
    running_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = width * static_cast<double>(p);
        for (std::size_t i = 0; i < k; ++i) {
            nodes_[p * k + i] = lo + half * (ref.nodes[i] + 1.0);
            weights_[p * k + i] = half * ref.weights[i];
        }
    }
    for (std::size_t p = 0; p < panels; ++p) {
        for (std::size_t i = 0; i < k; ++i) {
            const auto row = static_cast<Eigen::Index>(p * k + i);
            for (std::size_t q = 0; q < p; ++q) {
                for (std::size_t j = 0; j < k; ++j) {
                    running_(row, static_cast<Eigen::Index>(q * k + j)) = weights_[q * k + j];
                }
            }
            for (std::size_t j = 0; j < k; ++j) {
                running_(row, static_cast<Eigen::Index>(p * k + j)) =
                    half * local(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
}

} // namespace pptcert::quadrature
