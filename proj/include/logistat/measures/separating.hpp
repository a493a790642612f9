#pragma once

#include <cstddef>
#include <vector>

#include "logistat/dynamics/periodic.hpp"
#include "logistat/measures/test_function.hpp"

namespace logistat {

struct SeparatingTau {
  TestFunction tau;
  mpz_class code;  // raw code in the tau enumeration
  Rational radius;  // plateau half-width; support half-width is twice this
  std::vector<Rational> centers;
};

// Sum of unit trapezoids, one per point of Per(target), plateaus covering the points and
// supports avoiding every point of Per(j) for j in `avoid`.
SeparatingTau separating_tau(const Stage& st, std::size_t target, const std::vector<std::size_t>& avoid,
                             std::uint64_t bits);
SeparatingTau separating_tau(const PeriodicOrbit& target, const std::vector<PeriodicOrbit>& avoid, std::uint64_t bits);

}  // namespace logistat
