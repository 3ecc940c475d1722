#pragma once

#include <cstdint>
#include <iosfwd>

namespace haarorbit {

/// Runs the library's invariant suites at reduced scale, printing one
/// pass/fail line per suite. Returns the number of failing suites.
int run_selftest(std::ostream& out, std::uint64_t seed = 20240901);

} // namespace haarorbit
