#pragma once

#include <string>

namespace kpx {

/// Decimal form of a double with 17 significant digits ("%.17g", C locale),
/// enough to round-trip the exact bits.  Used for every numeric field the
/// CLI emits so outputs are byte-stable.
std::string format_double(double value);

}  // namespace kpx
