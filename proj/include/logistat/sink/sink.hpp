#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "logistat/measures/measure.hpp"
#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// Enclosure of a* in window with f_{a*}^period(1/2) = 1/2, width <= 2^-bits.
// An exact root hit during bisection is returned as a point interval.
DyadicInterval find_superattracting(const DyadicInterval& window, std::uint64_t period, std::uint64_t bits);

// f_a^period(1/2) - 1/2 over the whole parameter enclosure
DyadicInterval superattracting_residual(const DyadicInterval& a, std::uint64_t period, std::uint64_t prec);

// Certified cycle through the neighbourhood of `point`: f^period maps a box around it strictly into
// itself with |(f^period)'| < 1 there. Box radii 2^-j are tried from j = first_radius_bits on.
struct CycleCertificate {
  std::vector<DyadicInterval> orbit;
  DyadicInterval multiplier;
};
CycleCertificate certify_cycle(const DyadicInterval& a, const DyadicRational& point, std::uint64_t period,
                               std::uint64_t bits, std::uint64_t first_radius_bits = 0);

struct BasinSample {
  DyadicRational x;
  std::vector<std::pair<std::uint64_t, Rational>> w1;  // (n, W1(nu^n(x), sink measure))
  bool converged = false;                              // last W1 below tolerance
  bool monotone = true;                                // W1 non-increasing along the schedule
};

struct SinkCertificate {
  DyadicInterval a;
  DyadicRational sample_parameter;  // point of `a` used for basin sampling
  std::vector<DyadicInterval> orbit;
  DyadicInterval multiplier;        // derivative of f^p along the orbit enclosures
  DiscreteMeasure sink_measure;
  std::vector<BasinSample> basin;
  Rational basin_tolerance;
  std::size_t converged = 0;

  std::size_t period() const { return orbit.size(); }
};

struct SinkOptions {
  std::uint64_t max_period = 64;
  std::uint64_t budget = 100000;  // iterations for cycle detection
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> schedule{10, 100, 1000, 10000};
  Rational tolerance = Rational(1, 64);
  bool parallel = true;
};

SinkCertificate certify_sink(const DyadicInterval& a, const DyadicRational& seed_point, std::uint64_t bits,
                             const SinkOptions& opts = {});

// Basin evidence alone; parallel and serial versions agree sample by sample.
std::vector<BasinSample> basin_samples(const DyadicRational& a, const DiscreteMeasure& sink, std::uint64_t samples,
                                       std::uint64_t seed, const std::vector<std::uint64_t>& schedule,
                                       const Rational& tol);
std::vector<BasinSample> basin_samples_serial(const DyadicRational& a, const DiscreteMeasure& sink,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const std::vector<std::uint64_t>& schedule, const Rational& tol);

}  // namespace logistat
