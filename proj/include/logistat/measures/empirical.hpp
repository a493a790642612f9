#pragma once

#include <cstdint>
#include <vector>

#include "logistat/measures/measure.hpp"
#include "logistat/numerics/real.hpp"

namespace logistat {

enum class OrbitArithmetic { Certified, Binary64 };

struct BirkhoffOptions {
  std::uint64_t store_bits = 64;  // atoms are enclosure midpoints rounded to this grid
  std::uint64_t start_bits = 128;
  std::uint64_t max_bits = 0;  // 0: 2n + 64 + store_bits
};

// (1/n) sum_{k<n} delta_{f^k x}, from certified enclosures.
DiscreteMeasure birkhoff_measure(const RealSource& a, const RealSource& x, std::uint64_t n,
                                 const BirkhoffOptions& opts = {});

// Certified midpoints of x_0 .. x_{n-1}; escalates precision until every enclosure is narrower than 2^-store_bits.
std::vector<DyadicRational> certified_orbit(const RealSource& a, const RealSource& x, std::uint64_t n,
                                            const BirkhoffOptions& opts, std::uint64_t* used_bits = nullptr);

// k seeded starting points, atoms at iterates 1..n of each. The parallel and serial
// versions produce identical measures.
DiscreteMeasure monte_carlo_measure(const DyadicRational& a, std::uint64_t k, std::uint64_t n, std::uint64_t seed,
                                    OrbitArithmetic mode = OrbitArithmetic::Binary64);
DiscreteMeasure monte_carlo_measure_serial(const DyadicRational& a, std::uint64_t k, std::uint64_t n,
                                           std::uint64_t seed, OrbitArithmetic mode = OrbitArithmetic::Binary64);

// l-th seeded starting point in [0, 1), a 53-bit dyadic
DyadicRational seeded_start(std::uint64_t seed, std::uint64_t l);
std::uint64_t splitmix64(std::uint64_t x);

struct OmegaReport {
  bool converged = false;
  std::vector<std::uint64_t> schedule;
  std::vector<Rational> gaps;  // W1 between consecutive schedule entries
  DiscreteMeasure estimate;
};

OmegaReport omega_diagnostic(const RealSource& a, const RealSource& x, const std::vector<std::uint64_t>& schedule,
                             const Rational& tol, const BirkhoffOptions& opts = {});

// mass of the union of closed balls of radius r around the midpoints of the given points
Rational mass_near(const DiscreteMeasure& mu, const std::vector<DyadicInterval>& points, const Rational& r);

}  // namespace logistat
