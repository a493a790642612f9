#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// Letters of f_a^j(1/2), j = 1..n: 'L' below 1/2, 'R' above, 'C' at 1/2. Stops early at the first
// letter the enclosure cannot decide at precision prec.
std::string kneading(const DyadicInterval& a, std::size_t n, std::uint64_t prec);

// Order of the points with itineraries s and t for a unimodal map (L < C < R, flipped after each R):
// -1, 0 (equal on the common length) or +1.
int cmp_unimodal(std::string_view s, std::string_view t);
std::size_t first_difference(std::string_view s, std::string_view t);

struct KneadingComparison {
  int sign = 0;           // order of the kneading of a against the target
  std::size_t agree = 0;  // letters equal before the deciding one
  std::uint64_t prec = 0; // precision that decided it
};

// Compares K(a) with target letter by letter, raising precision until the deciding letter is certain.
// sign 0 means the whole target (including a final 'C') is matched exactly.
KneadingComparison compare_kneading(const DyadicRational& a, std::string_view target, std::uint64_t prec_hint = 0);

}  // namespace logistat
