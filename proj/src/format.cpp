#include "boltzmix/format.hpp"

#include <charconv>

namespace boltzmix {

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string to_hex(std::uint64_t value) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

namespace {

double pairwise_sum_range(std::size_t lo, std::size_t hi,
                          const std::function<double(std::size_t)>& term) {
  const std::size_t n = hi - lo;
  if (n <= 32) {
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + n / 2;
  return pairwise_sum_range(lo, mid, term) + pairwise_sum_range(mid, hi, term);
}

}  // namespace

double pairwise_sum(std::size_t n, const std::function<double(std::size_t)>& term) {
  if (n == 0) return 0.0;
  return pairwise_sum_range(0, n, term);
}

}  // namespace boltzmix
