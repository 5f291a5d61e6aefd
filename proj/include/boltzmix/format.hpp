#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace boltzmix {

inline constexpr const char* kToolVersion = "0.1.0";

/// Shortest round-trip decimal formatting of a double (std::to_chars).
/// Used for every numeric value written to CSV/JSON artifacts so that
/// re-parsing reproduces the exact bits.
std::string format_double(double value);

/// FNV-1a 64-bit over a byte range; used for output-file content hashes in
/// run manifests.
std::uint64_t fnv1a64(std::string_view bytes);

std::string to_hex(std::uint64_t value);

/// Deterministic pairwise (tree) reduction over n generator values.
/// Fixed association order is part of the reproducibility contract for
/// ensemble moments.
double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& term);

}  // namespace boltzmix
