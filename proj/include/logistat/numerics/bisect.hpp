#pragma once

#include <cstdint>
#include <functional>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

using Predicate = std::function<bool(const DyadicRational&)>;

struct BisectStats {
  std::uint64_t evaluations = 0;
};

struct BisectOptions {
  unsigned verify_probes = 0;  // random monotonicity spot checks, 0 = off
  std::uint64_t seed = 0;
};

// Shrinks the bracket around the point where pred switches value, down to width <= 2^-bits.
// pred(lo) != pred(hi) is required (NoSignChange otherwise).
DyadicInterval bisect_monotone(const Predicate& pred, const DyadicInterval& bracket, std::uint64_t bits,
                               BisectStats* stats = nullptr, const BisectOptions& opts = {});

}  // namespace logistat
