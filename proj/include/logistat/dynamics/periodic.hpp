#pragma once

#include <cstddef>
#include <vector>

#include "logistat/dynamics/stage.hpp"
#include "logistat/dynamics/words.hpp"
#include "logistat/measures/measure.hpp"

namespace logistat {

// Orbit coded by the n-th enumerated word. g_points[j] carries the j-th rotation of the word,
// f_points is the full f-orbit in increasing order.
struct PeriodicOrbit {
  std::size_t n = 0;
  SymbolicWord word;
  std::vector<DyadicInterval> g_points;
  std::vector<DyadicInterval> f_points;
};

PeriodicOrbit solve_periodic_orbit(const Stage& st, std::size_t n, std::uint64_t bits);
PeriodicOrbit solve_periodic_orbit(const Stage& st, const SymbolicWord& w, std::uint64_t bits);

// uniform measure on the f-orbit (atoms at enclosure midpoints)
DiscreteMeasure lambda_measure(const Stage& st, std::size_t n, std::uint64_t bits);
DiscreteMeasure orbit_measure(const PeriodicOrbit& orb, std::uint64_t bits);

}  // namespace logistat
