#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pptcert/cache.hpp"
#include "pptcert/config.hpp"

namespace pptcert {

struct Finding {
    std::string name;
    bool passed = false;
    std::string detail;
    /// Largest observed value / allowed value; NaN when not applicable.
    double worst_ratio = 0.0;
};

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const;
};

/// Replaceable pieces, for fault injection in tests.
struct ValidationHooks {
    std::function<Matrix(const Matrix&, const BipartiteSpace&)> partial_transpose;
};

/// Property suite on the configured model:
///   assumption_bound     ||e^{-sH0} V e^{sH0}||_2 <= a e^{bs} on the s-grid
///   dyson_bound          ||D(beta)||_2, per-order terms and ||F(beta)||_2 under their bounds
///   factorization        e^{-beta H} = e^{-beta H0/2} (1 + F) e^{-beta H0/2}
///   pt_isometry          ||T_B X||_2 = ||X||_2, T_B T_B X = X, T_B X^dagger = (T_B X)^dagger
///   pt_sign_equivalence  T_B[e^{-beta H}] and T_B[1 + F] share the sign of their lowest eigenvalue
///   consistency          certified betas are never NPT
///   appendix_bound       oscillator star only, with the shell count
///   jc_element_bound     Jaynes-Cummings only
ValidationReport run_validation(const RunConfig& config, DecompositionCache& cache,
                                const ValidationHooks& hooks = {});

} // namespace pptcert
