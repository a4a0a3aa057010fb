#pragma once

#include <cstdint>
#include <optional>

namespace cyclesim {

// m > 17 k n^{1+1/k}: a C_{2k} is then guaranteed.
bool turan_c2k_gate(std::uint64_t n, std::uint64_t m, std::uint32_t k);

// Largest k with m <= n^{1+1/k} + n; nullopt is the "sparse" marker (k beyond log2(n)/2).
std::optional<std::uint32_t> girth_turan_k(std::uint64_t n, std::uint64_t m);

// n^{1+1/k} + n as a double.
double girth_turan_bound(std::uint64_t n, std::uint32_t k);

}  // namespace cyclesim
