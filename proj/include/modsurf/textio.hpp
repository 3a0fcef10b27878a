#pragma once

// Complex numbers as shell-safe text: "a+bi", "a", "bi", "-i".

#include <optional>
#include <string>
#include <string_view>

#include "modsurf/expr.hpp"

namespace modsurf {

std::optional<cplx> parse_complex(std::string_view text);
// Shortest round-trip parts, e.g. "1.5-2i", "0+1i".
std::string format_complex(cplx z);

}  // namespace modsurf
