#pragma once

#include <array>

namespace corpus {

// Ten analytic functions used by the identity and concordance checks.
inline constexpr std::array<const char*, 10> kFunctions = {
    "exp(z)",
    "sin(z)^2",
    "1+z+z^4",
    "z^3+2",
    "cosh(2*z)+3",
    "log(z+3)",
    "1/(z-4)",
    "(z^2+1)*exp(-z/2)",
    "sinh(z)*cos(z)+2",
    "(2+z)^0.6666666666666666",
};

}  // namespace corpus
