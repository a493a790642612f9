#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "logistat/dynamics/stage.hpp"

namespace logistat {

// Where a g-iterate enclosure sits relative to the stage.
enum class Zone { EscapeLeft, Left, Gap, Right, EscapeRight, Undecided };

class ZoneClassifier {
 public:
  ZoneClassifier(const Stage& st, std::uint64_t prec);
  Zone operator()(const FixedInterval& y) const;

 private:
  mpz_class bp_lo_, bp_hi_, l_lo_, l_hi_, r_lo_, r_hi_, b_lo_, b_hi_;
};

struct Itinerary {
  enum class Stop { Complete, Escape, Undecidable };
  std::string letters;
  Stop stop = Stop::Complete;
  std::size_t step = 0;  // index of the g-iterate where the itinerary stopped
};

// g-itinerary of x: letter k is the branch containing g^k(x).
Itinerary itinerary(const Stage& st, const DyadicInterval& x, std::size_t steps, std::uint64_t work_bits);

// Target symbol at index i: '0' / '1', or '<' / '>' meaning x counts as left / right of the target from here on.
using SymbolSource = std::function<char(std::size_t)>;

// Spatial order of x against the point whose g-itinerary is `target`: -1 left, +1 right,
// 0 when indistinguishable within max_steps, nullopt when undecided at this precision.
std::optional<int> compare_itinerary(const Stage& st, const DyadicRational& x, const SymbolSource& target,
                                     std::size_t max_steps, std::uint64_t prec);

// Bisects inside `bracket` for the point with the given itinerary, escalating precision as needed.
DyadicInterval locate_by_itinerary(const Stage& st, const SymbolSource& target, const DyadicInterval& bracket,
                                   std::uint64_t bits);

}  // namespace logistat
