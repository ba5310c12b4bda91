#pragma once

#include <cstdint>

namespace phfl::cli {

/// Randomized property suites, one report line each. True iff all pass.
bool run_selftest(std::uint64_t seed, int rounds, bool json);

}  // namespace phfl::cli
