#include "pptcert/models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "pptcert/error.hpp"
#include "pptcert/perturbation.hpp"

namespace pptcert {

namespace {

constexpr std::size_t kMaxDim = 4096;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool within_cutoff(double energy, double cutoff)
{
    return energy <= cutoff + 1e-12 * std::max(1.0, std::abs(cutoff));
}

void require(bool ok, const std::string& message)
{
    if (!ok) {
        throw InputError(message);
    }
}

bool positive(double x)
{
    return std::isfinite(x) && x > 0.0;
}

Matrix annihilation(std::size_t n_max)
{
    const auto d = static_cast<Eigen::Index>(n_max + 1);
    Matrix a = Matrix::Zero(d, d);
    for (Eigen::Index n = 0; n + 1 < d; ++n) {
        a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    }
    return a;
}

Matrix number_operator(std::size_t n_max)
{
    RealVector diag(static_cast<Eigen::Index>(n_max + 1));
    for (Eigen::Index n = 0; n < diag.size(); ++n) {
        diag(n) = static_cast<double>(n);
    }
    return diag.cast<Complex>().asDiagonal().toDenseMatrix();
}

Matrix identity(std::size_t d)
{
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

/// Operator acting as `op` on mode `which` of `modes` identical Fock factors.
Matrix embed_mode(const Matrix& op, std::size_t which, std::size_t modes)
{
    const std::size_t d = static_cast<std::size_t>(op.rows());
    Matrix out = which == 0 ? op : identity(d);
    for (std::size_t k = 1; k < modes; ++k) {
        out = tensor(out, k == which ? op : identity(d));
    }
    return out;
}

Matrix project_to_shell(const Matrix& v, const Matrix& h0, double cutoff)
{
    Matrix out = v;
    const Eigen::Index n = v.rows();
    for (Eigen::Index q = 0; q < n; ++q) {
        const bool q_in = within_cutoff(h0(q, q).real(), cutoff);
        for (Eigen::Index p = 0; p < n; ++p) {
            if (!q_in || !within_cutoff(h0(p, p).real(), cutoff)) {
                out(p, q) = 0.0;
            }
        }
    }
    return out;
}

std::vector<Level> sort_levels(const std::vector<double>& energies)
{
    std::vector<Level> levels(energies.size());
    for (std::size_t i = 0; i < energies.size(); ++i) {
        levels[i] = Level{energies[i], i};
    }
    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& x, const Level& y) { return x.energy < y.energy; });
    return levels;
}

std::vector<double> product_energies(const std::vector<double>& ea, const std::vector<double>& eb)
{
    std::vector<double> out;
    out.reserve(ea.size() * eb.size());
    for (double x : ea) {
        for (double y : eb) {
            out.push_back(x + y);
        }
    }
    return out;
}

std::size_t star_dim(const OscillatorStarCutoff& s)
{
    const double d = std::pow(static_cast<double>(s.n_max + 1), static_cast<double>(s.bath_omegas.size() + 1));
    return d > static_cast<double>(kMaxDim) ? kMaxDim + 1 : static_cast<std::size_t>(d);
}

double star_omega_min(const OscillatorStarCutoff& s)
{
    double w = s.omega0;
    for (double x : s.bath_omegas) {
        w = std::min(w, x);
    }
    return w;
}

void hex(std::ostringstream& out, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", x);
    out << buf << ';';
}

BuiltModel assemble(Matrix h_a, Matrix h_b, Matrix v)
{
    BuiltModel m;
    m.space = BipartiteSpace(static_cast<std::size_t>(h_a.rows()), static_cast<std::size_t>(h_b.rows()));
    m.h_a = HermitianOperator(h_a);
    m.h_b = HermitianOperator(h_b);
    m.h0 = HermitianOperator(tensor(h_a, identity(m.space.dim_b)) + tensor(identity(m.space.dim_a), h_b));
    m.v = HermitianOperator(std::move(v));
    return m;
}

} // namespace

std::string_view variant_name(const ModelSpec& spec)
{
    return std::visit(Overloaded{
                          [](const TwoQubitXX&) { return std::string_view("two_qubit_xx"); },
                          [](const BandedInteraction&) { return std::string_view("banded"); },
                          [](const JaynesCummingsCutoff&) { return std::string_view("jaynes_cummings"); },
                          [](const OscillatorStarCutoff&) { return std::string_view("oscillator_star"); },
                      },
                      spec);
}

void validate_model(const ModelSpec& spec)
{
    std::visit(Overloaded{
                   [](const TwoQubitXX& m) {
                       require(positive(m.omega_a), "two_qubit_xx: omega_a must be > 0");
                       require(positive(m.omega_b), "two_qubit_xx: omega_b must be > 0");
                       require(std::isfinite(m.lambda), "two_qubit_xx: lambda must be finite");
                   },
                   [](const BandedInteraction& m) {
                       require(!m.energies_a.empty() && !m.energies_b.empty(),
                               "banded: energies_a and energies_b must be non-empty");
                       for (double e : m.energies_a) {
                           require(std::isfinite(e), "banded: energies_a must be finite");
                       }
                       for (double e : m.energies_b) {
                           require(std::isfinite(e), "banded: energies_b must be finite");
                       }
                       const std::size_t dim = m.energies_a.size() * m.energies_b.size();
                       require(dim <= kMaxDim, "banded: dimension exceeds " + std::to_string(kMaxDim));
                       std::set<std::pair<std::size_t, std::size_t>> seen;
                       for (const auto& c : m.couplings) {
                           require(c.offset >= 1, "banded: coupling offset must be >= 1");
                           require(c.level + c.offset < dim, "banded: coupling (" + std::to_string(c.level) + ", "
                                                                 + std::to_string(c.offset)
                                                                 + ") points outside the spectrum");
                           require(std::isfinite(c.value.real()) && std::isfinite(c.value.imag()),
                                   "banded: coupling values must be finite");
                           require(seen.emplace(c.level, c.offset).second,
                                   "banded: duplicate coupling (" + std::to_string(c.level) + ", "
                                       + std::to_string(c.offset) + ")");
                       }
                   },
                   [](const JaynesCummingsCutoff& m) {
                       require(positive(m.omega), "jaynes_cummings: omega must be > 0");
                       require(positive(m.omega_mode), "jaynes_cummings: omega_mode must be > 0");
                       require(m.omega < 0.5 * m.omega_mode, "jaynes_cummings: requires ω < Ω/2 (omega = "
                                                                 + std::to_string(m.omega) + ", omega_mode = "
                                                                 + std::to_string(m.omega_mode) + ")");
                       require(std::isfinite(m.g), "jaynes_cummings: g must be finite");
                       require(positive(m.cutoff), "jaynes_cummings: cutoff must be > 0");
                       require(static_cast<double>(m.n_max) * m.omega_mode >= m.cutoff,
                               "jaynes_cummings: truncation n_max = " + std::to_string(m.n_max)
                                   + " is too small to contain the cutoff shell (need n_max * omega_mode >= cutoff)");
                       require(2 * (m.n_max + 1) <= kMaxDim,
                               "jaynes_cummings: dimension exceeds " + std::to_string(kMaxDim));
                   },
                   [](const OscillatorStarCutoff& m) {
                       require(positive(m.omega0), "oscillator_star: omega0 must be > 0");
                       require(!m.bath_omegas.empty(), "oscillator_star: need at least one bath mode");
                       for (double w : m.bath_omegas) {
                           require(positive(w), "oscillator_star: bath frequencies must be > 0");
                       }
                       require(m.couplings.size() == m.bath_omegas.size(),
                               "oscillator_star: need one coupling per bath mode");
                       for (const auto& g : m.couplings) {
                           require(std::isfinite(g.real()) && std::isfinite(g.imag()),
                                   "oscillator_star: couplings must be finite");
                       }
                       require(positive(m.cutoff), "oscillator_star: cutoff must be > 0");
                       require(static_cast<double>(m.n_max) * star_omega_min(m) >= m.cutoff,
                               "oscillator_star: truncation n_max = " + std::to_string(m.n_max)
                                   + " is too small to contain the cutoff shell (need n_max * omega_min >= cutoff)");
                       require(star_dim(m) <= kMaxDim,
                               "oscillator_star: dimension (n_max+1)^(N+1) exceeds " + std::to_string(kMaxDim));
                   },
               },
               spec);
}

std::string canonical_key(const ModelSpec& spec)
{
    std::ostringstream out;
    out << variant_name(spec) << ':';
    std::visit(Overloaded{
                   [&](const TwoQubitXX& m) {
                       hex(out, m.omega_a);
                       hex(out, m.omega_b);
                       hex(out, m.lambda);
                   },
                   [&](const BandedInteraction& m) {
                       out << "a" << m.energies_a.size() << ':';
                       for (double e : m.energies_a) {
                           hex(out, e);
                       }
                       out << "b" << m.energies_b.size() << ':';
                       for (double e : m.energies_b) {
                           hex(out, e);
                       }
                       out << "v" << m.couplings.size() << ':';
                       for (const auto& c : m.couplings) {
                           out << c.level << ',' << c.offset << ',';
                           hex(out, c.value.real());
                           hex(out, c.value.imag());
                       }
                   },
                   [&](const JaynesCummingsCutoff& m) {
                       hex(out, m.omega);
                       hex(out, m.omega_mode);
                       hex(out, m.g);
                       hex(out, m.cutoff);
                       out << m.n_max << ';';
                   },
                   [&](const OscillatorStarCutoff& m) {
                       hex(out, m.omega0);
                       out << "w" << m.bath_omegas.size() << ':';
                       for (double w : m.bath_omegas) {
                           hex(out, w);
                       }
                       for (const auto& g : m.couplings) {
                           hex(out, g.real());
                           hex(out, g.imag());
                       }
                       hex(out, m.cutoff);
                       out << m.n_max << ';';
                   },
               },
               spec);
    return out.str();
}

ModelSpec with_coupling(const ModelSpec& spec, double lambda)
{
    return std::visit(Overloaded{
                          [&](TwoQubitXX m) -> ModelSpec {
                              m.lambda = lambda;
                              return m;
                          },
                          [&](BandedInteraction m) -> ModelSpec {
                              for (auto& c : m.couplings) {
                                  c.value *= lambda;
                              }
                              return m;
                          },
                          [&](JaynesCummingsCutoff m) -> ModelSpec {
                              m.g = lambda;
                              return m;
                          },
                          [&](OscillatorStarCutoff m) -> ModelSpec {
                              for (auto& g : m.couplings) {
                                  g *= lambda;
                              }
                              return m;
                          },
                      },
                      spec);
}

bool has_zero_coupling(const ModelSpec& spec)
{
    return std::visit(Overloaded{
                          [](const TwoQubitXX& m) { return m.lambda == 0.0; },
                          [](const BandedInteraction& m) {
                              return std::all_of(m.couplings.begin(), m.couplings.end(),
                                                 [](const BandCoupling& c) { return c.value == Complex(0.0); });
                          },
                          [](const JaynesCummingsCutoff& m) { return m.g == 0.0; },
                          [](const OscillatorStarCutoff& m) {
                              return std::all_of(m.couplings.begin(), m.couplings.end(),
                                                 [](const Complex& g) { return g == Complex(0.0); });
                          },
                      },
                      spec);
}

double BuiltModel::truncation_tail(double beta) const
{
    double tail = 0.0;
    for (const auto& mode : truncated_modes) {
        const double x = beta * mode.omega;
        tail += std::exp(-x * static_cast<double>(mode.n_max + 1)) / -std::expm1(-x);
    }
    return tail;
}

BuiltModel build(const ModelSpec& spec)
{
    validate_model(spec);
    return std::visit(
        Overloaded{
            [](const TwoQubitXX& m) {
                return assemble(0.5 * m.omega_a * pauli::z(), 0.5 * m.omega_b * pauli::z(),
                                m.lambda * tensor(pauli::x(), pauli::x()));
            },
            [](const BandedInteraction& m) {
                const auto ea = Eigen::Map<const RealVector>(m.energies_a.data(),
                                                             static_cast<Eigen::Index>(m.energies_a.size()));
                const auto eb = Eigen::Map<const RealVector>(m.energies_b.data(),
                                                             static_cast<Eigen::Index>(m.energies_b.size()));
                const auto levels = sort_levels(product_energies(m.energies_a, m.energies_b));
                const auto n = static_cast<Eigen::Index>(levels.size());
                Matrix v = Matrix::Zero(n, n);
                for (const auto& c : m.couplings) {
                    const auto p = static_cast<Eigen::Index>(levels[c.level].basis_index);
                    const auto q = static_cast<Eigen::Index>(levels[c.level + c.offset].basis_index);
                    v(p, q) += c.value;
                    v(q, p) += std::conj(c.value);
                }
                return assemble(RealVector(ea).cast<Complex>().asDiagonal().toDenseMatrix(),
                                RealVector(eb).cast<Complex>().asDiagonal().toDenseMatrix(), std::move(v));
            },
            [](const JaynesCummingsCutoff& m) {
                Matrix sigma_plus = Matrix::Zero(2, 2);
                sigma_plus(0, 1) = 1.0;
                const Matrix a = annihilation(m.n_max);
                const Matrix h_a = m.omega * pauli::z();
                const Matrix h_b = m.omega_mode * number_operator(m.n_max);
                const Matrix raw = m.g * (tensor(sigma_plus, a) + tensor(sigma_plus.adjoint(), a.adjoint()));
                const Matrix h0_full = tensor(h_a, identity(m.n_max + 1)) + tensor(identity(2), h_b);
                BuiltModel out = assemble(h_a, h_b, project_to_shell(raw, h0_full, m.cutoff));
                out.truncated_modes.push_back(TruncatedMode{m.omega_mode, m.n_max});
                return out;
            },
            [](const OscillatorStarCutoff& m) {
                const std::size_t modes = m.bath_omegas.size();
                const std::size_t d = m.n_max + 1;
                const Matrix a = annihilation(m.n_max);
                const Matrix num = number_operator(m.n_max);
                const Matrix h_a = m.omega0 * num;
                std::size_t dim_b = 1;
                for (std::size_t k = 0; k < modes; ++k) {
                    dim_b *= d;
                }
                Matrix h_b = Matrix::Zero(static_cast<Eigen::Index>(dim_b), static_cast<Eigen::Index>(dim_b));
                Matrix raw = Matrix::Zero(static_cast<Eigen::Index>(d * dim_b), static_cast<Eigen::Index>(d * dim_b));
                for (std::size_t j = 0; j < modes; ++j) {
                    h_b += m.bath_omegas[j] * embed_mode(num, j, modes);
                    const Matrix b_j = embed_mode(a, j, modes);
                    raw += m.couplings[j] * tensor(a.adjoint(), b_j)
                           + std::conj(m.couplings[j]) * tensor(a, Matrix(b_j.adjoint()));
                }
                const Matrix h0_full = tensor(h_a, identity(dim_b)) + tensor(identity(d), h_b);
                BuiltModel out = assemble(h_a, h_b, project_to_shell(raw, h0_full, m.cutoff));
                out.truncated_modes.push_back(TruncatedMode{m.omega0, m.n_max});
                for (double w : m.bath_omegas) {
                    out.truncated_modes.push_back(TruncatedMode{w, m.n_max});
                }
                return out;
            },
        },
        spec);
}

std::vector<Level> sorted_levels(const BuiltModel& model)
{
    const Matrix& h0 = model.h0.matrix();
    std::vector<double> energies(static_cast<std::size_t>(h0.rows()));
    for (Eigen::Index i = 0; i < h0.rows(); ++i) {
        energies[static_cast<std::size_t>(i)] = h0(i, i).real();
    }
    return sort_levels(energies);
}

std::vector<BandCoupling> level_couplings(const BuiltModel& model)
{
    const auto levels = sorted_levels(model);
    const Matrix& v = model.v.matrix();
    std::vector<BandCoupling> out;
    for (std::size_t j = 0; j < levels.size(); ++j) {
        for (std::size_t k = j + 1; k < levels.size(); ++k) {
            const Complex x = v(static_cast<Eigen::Index>(levels[j].basis_index),
                                static_cast<Eigen::Index>(levels[k].basis_index));
            if (x != Complex(0.0)) {
                out.push_back(BandCoupling{j, k - j, x});
            }
        }
    }
    return out;
}

AssumptionConstants analytic_constants(const ModelSpec& spec)
{
    validate_model(spec);
    AssumptionConstants out;
    out.provenance = Provenance::analytic;
    std::visit(Overloaded{
                   [&](const TwoQubitXX& m) {
                       out.a = 2.0 * std::abs(m.lambda);
                       out.b = m.omega_a + m.omega_b;
                   },
                   [&](const BandedInteraction& m) {
                       const auto levels = sort_levels(product_energies(m.energies_a, m.energies_b));
                       std::vector<std::size_t> band(levels.size(), 0);
                       double a = 0.0;
                       for (const auto& c : m.couplings) {
                           a += std::abs(c.value);
                           band[c.level] = std::max(band[c.level], c.offset);
                       }
                       double b = 0.0;
                       for (std::size_t j = 0; j < levels.size(); ++j) {
                           for (std::size_t l = 1; l <= band[j]; ++l) {
                               b = std::max(b, std::abs(levels[j].energy - levels[j + l].energy));
                           }
                       }
                       out.a = 2.0 * a;
                       out.b = b;
                   },
                   [&](const JaynesCummingsCutoff& m) {
                       // Exact elements g sqrt(n+1) between |+,n> and |-,n+1>, both inside the shell.
                       double a = 0.0;
                       for (std::size_t n = 0; within_cutoff((static_cast<double>(n) + 1.0) * m.omega_mode - m.omega,
                                                             m.cutoff);
                            ++n) {
                           a += std::abs(m.g) * std::sqrt(static_cast<double>(n) + 1.0);
                       }
                       // Band width L_j = 2 over shell levels of the untruncated spectrum.
                       std::vector<double> energies;
                       for (std::size_t n = 0; n <= m.n_max + 2; ++n) {
                           energies.push_back(static_cast<double>(n) * m.omega_mode + m.omega);
                           energies.push_back(static_cast<double>(n) * m.omega_mode - m.omega);
                       }
                       std::sort(energies.begin(), energies.end());
                       double b = 0.0;
                       for (std::size_t j = 0; j + 2 < energies.size() && within_cutoff(energies[j], m.cutoff); ++j) {
                           for (std::size_t l = 1; l <= 2; ++l) {
                               b = std::max(b, std::abs(energies[j + l] - energies[j]));
                           }
                       }
                       out.a = 2.0 * a;
                       out.b = b;
                   },
                   [&](const OscillatorStarCutoff& m) {
                       const double n_modes = static_cast<double>(m.bath_omegas.size());
                       double g2 = 0.0;
                       double delta = 0.0;
                       for (std::size_t j = 0; j < m.bath_omegas.size(); ++j) {
                           g2 += std::norm(m.couplings[j]);
                           delta = std::max(delta, std::abs(m.omega0 - m.bath_omegas[j]));
                       }
                       out.a = 2.0 * std::sqrt(g2) * std::sqrt(n_modes)
                               * std::pow(m.cutoff / star_omega_min(m) + 1.0, 0.5 * (n_modes + 3.0));
                       out.b = delta;
                   },
               },
               spec);
    return out;
}

AssumptionConstants empirical_constants(const HermitianOperator& h0, const HermitianOperator& v,
                                        std::span<const double> s_grid, double b_candidate)
{
    if (s_grid.empty()) {
        throw InputError("empirical_constants: s_grid must be non-empty");
    }
    if (!(b_candidate >= 0.0) || !std::isfinite(b_candidate)) {
        throw InputError("empirical_constants: b_candidate must be finite and >= 0");
    }
    double s_max = 0.0;
    for (double s : s_grid) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw InputError("empirical_constants: grid points must be finite and >= 0");
        }
        s_max = std::max(s_max, s);
    }
    if (!(s_max > 0.0)) {
        throw InputError("empirical_constants: grid must reach some s > 0");
    }
    const SpectralDecomposition spec = decompose(h0);
    AssumptionConstants out;
    out.b = b_candidate;
    out.s_star = s_max;
    out.provenance = Provenance::empirical;
    const std::vector<double> norms = interaction_norms(spec, v, s_grid);
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        out.a = std::max(out.a, norms[k] * std::exp(-b_candidate * s_grid[k]));
    }
    return out;
}

ShellCount count_shell(const OscillatorStarCutoff& spec)
{
    std::vector<double> omegas{spec.omega0};
    omegas.insert(omegas.end(), spec.bath_omegas.begin(), spec.bath_omegas.end());
    for (double w : omegas) {
        require(positive(w), "count_shell: frequencies must be > 0");
    }
    require(spec.cutoff >= 0.0, "count_shell: cutoff must be >= 0");

    std::size_t count = 0;
    // Depth-first enumeration of occupation vectors with E(m) <= cutoff.
    auto visit = [&](auto&& self, std::size_t mode, double energy) -> void {
        if (mode == omegas.size()) {
            ++count;
            return;
        }
        for (std::size_t m = 0;; ++m) {
            const double e = energy + static_cast<double>(m) * omegas[mode];
            if (!within_cutoff(e, spec.cutoff)) {
                break;
            }
            self(self, mode + 1, e);
        }
    };
    visit(visit, 0, 0.0);

    const double w_min = *std::min_element(omegas.begin(), omegas.end());
    return ShellCount{count, std::pow(spec.cutoff / w_min + 1.0, static_cast<double>(omegas.size()))};
}

double appendix_bound(const OscillatorStarCutoff& spec, double s)
{
    const AssumptionConstants c = analytic_constants(spec);
    return c.a * std::exp(std::abs(s) * c.b);
}

AppendixReport validate_appendix_bound(const OscillatorStarCutoff& spec, std::span<const double> s_grid)
{
    const BuiltModel model = build(spec);
    const SpectralDecomposition h0 = decompose(model.h0);
    AppendixReport report;
    report.max_ratio = std::numeric_limits<double>::quiet_NaN();
    const std::vector<double> dense = interaction_norms(h0, model.v, s_grid);
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        const double s = s_grid[k];
        AppendixPoint p;
        p.s = s;
        p.dense = dense[k];
        p.bound = appendix_bound(spec, s);
        p.slack_ratio = p.bound > 0.0 ? p.dense / p.bound : std::numeric_limits<double>::quiet_NaN();
        if (p.dense > p.bound * (1.0 + 1e-12) + 1e-13) {
            std::ostringstream msg;
            msg << "appendix bound violated at s = " << s << ": dense " << p.dense << " > bound " << p.bound;
            throw PropertyViolation(msg.str());
        }
        if (!std::isnan(p.slack_ratio)) {
            report.max_ratio = std::isnan(report.max_ratio) ? p.slack_ratio : std::max(report.max_ratio, p.slack_ratio);
        }
        report.points.push_back(p);
    }
    return report;
}

double jaynes_cummings_element_ratio(const JaynesCummingsCutoff& spec)
{
    if (spec.g == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const BuiltModel model = build(spec);
    double ratio = 0.0;
    for (const auto& c : level_couplings(model)) {
        const double upper_one_based = static_cast<double>(c.level + c.offset + 1);
        ratio = std::max(ratio, std::abs(c.value) / std::abs(spec.g) / (2.0 * std::sqrt(upper_one_based)));
    }
    return ratio;
}

} // namespace pptcert
