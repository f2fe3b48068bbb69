#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "negkw/error.hpp"

namespace negkw {

/// n = |SK|, m = |SB|, m' = |SNB|, optional sizes of the SK partition.
struct BoundInput {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t m_prime = 0;
  std::optional<std::vector<std::size_t>> parts;
};

/// Total negatives of the naive structure for a concrete partition:
/// m^2 + (k+2) m' + k n + sum |sk_i|^2.
inline std::size_t nk_exact(const BoundInput& in) {
  if (!in.parts) throw Error(ErrorKind::InvalidInput, "nk_exact needs a partition");
  const auto& parts = *in.parts;
  const std::size_t k = parts.size();
  std::size_t sum = 0, squares = 0;
  for (auto s : parts) {
    if (s == 0) throw Error(ErrorKind::InvalidInput, "empty partition part");
    sum += s;
    squares += s * s;
  }
  if (sum != in.n) throw Error(ErrorKind::InvalidInput, "partition sizes do not sum to n");
  return in.m * in.m + (k + 2) * in.m_prime + k * in.n + squares;
}

struct WorstCase {
  double value = 0.0;
  std::int64_t rounded = 0;
};

/// Balanced optimum at k = sqrt(n): m^2 + (sqrt(n) + 2) m' + 2 n sqrt(n).
inline WorstCase nk_worst_case_optimal(std::size_t n, std::size_t m, std::size_t m_prime) {
  if (n == 0) throw Error(ErrorKind::InvalidInput, "n must be positive");
  const double root = std::sqrt(static_cast<double>(n));
  const double v = static_cast<double>(m) * static_cast<double>(m) +
                   (root + 2.0) * static_cast<double>(m_prime) + 2.0 * static_cast<double>(n) * root;
  return {v, static_cast<std::int64_t>(std::llround(v))};
}

/// Negatives of the high and medium campaigns, AdGroups included: 2n + 2m' + m^2.
inline std::size_t high_medium_count(std::size_t n, std::size_t m, std::size_t m_prime) {
  return 2 * n + 2 * m_prime + m * m;
}

/// Balanced sizes for k parts of n.
inline std::vector<std::size_t> balanced_parts(std::size_t n, std::size_t k) {
  if (k == 0 || k > n) throw Error(ErrorKind::InvalidInput, "need 1 <= k <= n");
  std::vector<std::size_t> out(k, n / k);
  for (std::size_t i = 0; i < n % k; ++i) ++out[i];
  return out;
}

struct SiteRow {
  std::string name;
  std::size_t n, m, m_prime;
  std::int64_t published;
  std::string note;
};

/// Published worst-case figures for four merchant sites.
inline std::vector<SiteRow> reference_sites() {
  return {
      {"Site1", 3000, 100, 30, 340337, ""},
      {"Site2", 7000, 1, 0, 1171324, "formula gives 1171325.04; published figure is off by ~1"},
      {"Site3", 10000, 30, 20, 2002940, ""},
      {"Site4", 10000, 1000, 40, 3002040,
       "formula gives 3004080; published 3002040 matches m'=20 (likely typo)"},
  };
}

}  // namespace negkw
