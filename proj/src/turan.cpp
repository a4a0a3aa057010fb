#include "cyclesim/turan.hpp"

#include <cmath>

namespace cyclesim {

namespace {

// exp/log carry a few ULPs of error; near-ties count as "m within bound".
constexpr double kUlpGuard = 4.0;

bool exceeds(std::uint64_t m, double bound) {
  double ulp = std::nextafter(bound, INFINITY) - bound;
  return static_cast<double>(m) - bound > kUlpGuard * ulp;
}

double power(std::uint64_t n, double e) { return std::exp(e * std::log(static_cast<double>(n))); }

}  // namespace

bool turan_c2k_gate(std::uint64_t n, std::uint64_t m, std::uint32_t k) {
  if (n == 0 || k == 0) return false;
  return exceeds(m, 17.0 * k * power(n, 1.0 + 1.0 / k));
}

double girth_turan_bound(std::uint64_t n, std::uint32_t k) {
  return power(n, 1.0 + 1.0 / k) + static_cast<double>(n);
}

std::optional<std::uint32_t> girth_turan_k(std::uint64_t n, std::uint64_t m) {
  const double half_log = std::log2(static_cast<double>(n)) / 2.0;
  if (exceeds(m, girth_turan_bound(n, 1))) return 0u;
  std::uint32_t k = 1;
  for (;;) {
    if (k > half_log) return std::nullopt;
    if (exceeds(m, girth_turan_bound(n, k + 1))) return k;
    ++k;
  }
}

}  // namespace cyclesim
