#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace pptcert::quadrature {

struct GaussLegendreRule {
    std::vector<double> nodes;    // ascending, in (-1, 1)
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
GaussLegendreRule gauss_legendre(std::size_t n);

/// Legendre polynomials P_0..P_max_degree evaluated at x.
std::vector<double> legendre_values(std::size_t max_degree, double x);

/// Composite Gauss-Legendre discretization of [0, upper] for iterated
/// integrals over the ordered simplex 0 <= s_n <= ... <= s_1 <= upper.
///
/// Holds the flattened node list t_k, full-interval weights w_k, and the
/// running-integral matrix R with (R f)_k ~= int_0^{t_k} f(s) ds, built from
/// the degree-(K-1) Legendre interpolant on each panel. Applying R level by
/// level evaluates nested ordered integrals without an exponential blowup in
/// the node count.
class SimplexRule {
public:
    SimplexRule(double upper, std::size_t panels, std::size_t nodes_per_panel);

    std::size_t size() const { return nodes_.size(); }
    std::size_t panels() const { return panels_; }
    std::size_t nodes_per_panel() const { return nodes_per_panel_; }
    double upper() const { return upper_; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const Eigen::MatrixXd& running_integral() const { return running_; }

private:
    double upper_;
    std::size_t panels_;
    std::size_t nodes_per_panel_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    Eigen::MatrixXd running_;
};

} // namespace pptcert::quadrature
