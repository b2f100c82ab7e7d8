#pragma once

#include <cstdint>
#include <random>

namespace exitpoll {

using Engine = std::mt19937_64;

/// Derives an independent stream seed from a root seed and a counter
/// (splitmix64 finalizer). Per-item streams make parallel loops produce
/// the same output as serial ones regardless of scheduling.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter) noexcept;

inline Engine make_engine(std::uint64_t root, std::uint64_t counter) {
    return Engine{derive_seed(root, counter)};
}

/// Loop driver selection for the data-parallel kernels. Serial is the
/// reference path; both must produce identical results.
enum class Execution { Serial, Parallel };

}  // namespace exitpoll
