#pragma once

#include <limits>
#include <string_view>

namespace pptcert {

enum class Provenance { analytic, empirical };

std::string_view to_string(Provenance p);

/// Constants (a, b, s_star) of the bound ||e^{-sH0} V e^{sH0}||_2 <= a e^{bs}, 0 <= s <= s_star.
struct AssumptionConstants {
    double a = 0.0;
    double b = 0.0;
    double s_star = std::numeric_limits<double>::infinity();
    Provenance provenance = Provenance::analytic;
};

} // namespace pptcert
