#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pptcert/constants.hpp"
#include "pptcert/operator.hpp"

namespace pptcert {

/// H_A = (omega_a/2) sigma_z, H_B = (omega_b/2) sigma_z, V = lambda sigma_x (x) sigma_x.
struct TwoQubitXX {
    double omega_a = 1.0;
    double omega_b = 1.0;
    double lambda = 0.0;
};

/// One matrix element V_{j, j+offset} between H0 levels (0-based, ascending energy).
struct BandCoupling {
    std::size_t level = 0;
    std::size_t offset = 1;
    Complex value{0.0, 0.0};
};

/// Diagonal local Hamiltonians with an interaction given by its band of
/// matrix elements in the ascending-energy eigenbasis of H0:
///   V = sum V_{j,j+l} |phi_j><phi_{j+l}| + h.c.
/// Degenerate product energies are ordered by product-basis index.
struct BandedInteraction {
    std::vector<double> energies_a;
    std::vector<double> energies_b;
    std::vector<BandCoupling> couplings;
};

/// Atom (H_A = omega sigma_z, |+> first) coupled to one mode (H_B = omega_mode a^dagger a)
/// by V = chi_E g (sigma_+ (x) a + sigma_- (x) a^dagger) chi_E.
struct JaynesCummingsCutoff {
    double omega = 0.2;
    double omega_mode = 1.0;
    double g = 0.0;
    double cutoff = 1.0;
    std::size_t n_max = 1;
};

/// System oscillator (A) coupled to N bath oscillators (B) by
/// V = chi (sum_j g_j a^dagger b_j + h.c.) chi, chi the projection onto H0 <= cutoff.
struct OscillatorStarCutoff {
    double omega0 = 1.0;
    std::vector<double> bath_omegas;
    std::vector<Complex> couplings;
    double cutoff = 1.0;
    std::size_t n_max = 1;
};

using ModelSpec = std::variant<TwoQubitXX, BandedInteraction, JaynesCummingsCutoff, OscillatorStarCutoff>;

std::string_view variant_name(const ModelSpec& spec);

/// Throws InputError when a model invariant is violated.
void validate_model(const ModelSpec& spec);

/// Stable textual identity of the model (exact hex floats), used for cache keys.
std::string canonical_key(const ModelSpec& spec);

/// Replace the overall coupling: lambda for the two-qubit model, g for
/// Jaynes-Cummings; the oscillator-star and banded interactions are multiplied by lambda.
ModelSpec with_coupling(const ModelSpec& spec, double lambda);

/// True when the interaction is identically zero.
bool has_zero_coupling(const ModelSpec& spec);

struct TruncatedMode {
    double omega = 0.0;
    std::size_t n_max = 0;
};

struct BuiltModel {
    HermitianOperator h_a{Matrix::Zero(1, 1)};
    HermitianOperator h_b{Matrix::Zero(1, 1)};
    HermitianOperator h0{Matrix::Zero(1, 1)};
    HermitianOperator v{Matrix::Zero(1, 1)};
    BipartiteSpace space;
    std::vector<TruncatedMode> truncated_modes;

    HermitianOperator hamiltonian() const { return h0 + v; }

    /// Geometric bound on the Gibbs weight dropped by Fock truncation:
    /// sum over modes of sum_{n > n_max} e^{-beta omega n}. Zero for exact finite models.
    double truncation_tail(double beta) const;
};

BuiltModel build(const ModelSpec& spec);

/// Closed-form (a, b, s_star = inf) for each family.
AssumptionConstants analytic_constants(const ModelSpec& spec);

/// a = max_s ||e^{-sH0} V e^{sH0}||_2 e^{-b s} over the grid, s_star = max(grid).
AssumptionConstants empirical_constants(const HermitianOperator& h0, const HermitianOperator& v,
                                        std::span<const double> s_grid, double b_candidate);

/// Energies of H0 (diagonal in the product basis for every family) in ascending
/// order, with the product-basis index of each level.
struct Level {
    double energy = 0.0;
    std::size_t basis_index = 0;
};
std::vector<Level> sorted_levels(const BuiltModel& model);

/// Nonzero V_{j,k}, j < k, in the ascending-level indexing.
std::vector<BandCoupling> level_couplings(const BuiltModel& model);

struct ShellCount {
    std::size_t count = 0;
    double bound = 0.0;
};

/// #{m : omega0 m0 + sum omega_j m_j <= cutoff} by enumeration, and (cutoff/omega_min + 1)^{N+1}.
ShellCount count_shell(const OscillatorStarCutoff& spec);

/// 2 ||g||_2 sqrt(N) (cutoff/omega_min + 1)^{(N+3)/2} e^{|s| delta_omega}
double appendix_bound(const OscillatorStarCutoff& spec, double s);

struct AppendixPoint {
    double s = 0.0;
    double dense = 0.0;
    double bound = 0.0;
    /// dense / bound; NaN when the bound is zero.
    double slack_ratio = 0.0;
};

struct AppendixReport {
    std::vector<AppendixPoint> points;
    double max_ratio = 0.0;  // NaN when every ratio is undefined
};

/// Dense ||e^{-sH0} V e^{sH0}||_2 against appendix_bound at each s; PropertyViolation on any excess.
AppendixReport validate_appendix_bound(const OscillatorStarCutoff& spec, std::span<const double> s_grid);

/// max over couplings of |V_{j,j+l}| / (|g| * 2 sqrt(j+l)) with 1-based level indices.
/// Values <= 1 confirm the coarse Jaynes-Cummings element bound. NaN when g = 0.
double jaynes_cummings_element_ratio(const JaynesCummingsCutoff& spec);

} // namespace pptcert
