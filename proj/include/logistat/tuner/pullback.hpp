#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "logistat/dynamics/stage.hpp"

namespace logistat {

// J_{-k}: points following the anchor word k times and then leaving through the other branch.
// interval is an inner enclosure of the cylinder, outer an outer one.
struct PullbackWindow {
  std::size_t depth = 0;
  DyadicInterval interval;
  DyadicInterval outer;
  std::size_t anchor_orbit = 0;
};

struct PullbackChain {
  std::vector<PullbackWindow> windows;
  DyadicInterval anchor;        // g-point of the anchor orbit with the unrotated word
  DyadicInterval contraction;   // 1 / |(g^k)'(anchor)|
  bool spreading = false;       // g(J_0) covers [beta', beta]
};

PullbackChain pullback_windows(const Stage& st, std::size_t orbit_index, std::size_t max_depth, std::uint64_t bits);

}  // namespace logistat
