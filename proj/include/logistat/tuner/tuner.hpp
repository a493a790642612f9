#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "logistat/measures/measure.hpp"
#include "logistat/numerics/dyadic.hpp"
#include "logistat/numerics/lazy_parameter.hpp"

namespace logistat {

struct ProfileEntry {
  std::size_t orbit = 0;
  Rational weight;
  bool slack = false;  // absorbs overhead; its mass is reported but not held to the tolerance
};

struct TargetProfile {
  std::vector<ProfileEntry> entries;
  Rational tolerance;     // per-orbit mass tolerance
  Rational w1_tolerance;  // 0: same as tolerance

  void validate() const;
  Rational w1_tol() const { return w1_tolerance > 0 ? w1_tolerance : tolerance; }
  bool has_slack() const;
};

// `length` repetitions of the orbit's word
struct Dwell {
  std::size_t orbit = 0;
  std::size_t length = 0;
};

struct DwellSchedule {
  std::vector<Dwell> dwells;
  std::size_t stage_length = 0;  // f-steps including overhead
  std::size_t overhead = 0;
};

// Smallest stage with overhead amortized to tolerance/4; ToleranceInfeasible beyond 2^stage_bits steps.
DwellSchedule dwell_schedule(const TargetProfile& profile, std::uint64_t stage_bits, std::size_t overhead = 16);
Rational time_fraction(const DwellSchedule& s, std::size_t index);

// f-letters of the critical orbit following the dwells: g-letter 0 -> LRL, 1 -> RRL
std::string design_letters(const std::vector<Dwell>& dwells);

struct OrbitMass {
  std::size_t orbit = 0;
  Rational target;
  Rational achieved;
  bool slack = false;
};

struct TunedParameter {
  DyadicInterval a_star;
  std::size_t stage_length = 0;  // m, with f^{m+1}(1/2) = 1/2
  std::vector<Dwell> schedule;
  DiscreteMeasure achieved;
  Rational residual;  // W1 to the target mixture
  std::vector<OrbitMass> masses;
  Rational radius;
  std::string kneading;       // target letters of f^j(1/2), j = 1..m+1, ending in C
  std::size_t entry_length = 0;
  DyadicRational reference;   // parameter whose critical orbit supplied the entry letters
  DyadicInterval closure_residual;
  DyadicInterval multiplier;
  unsigned corrections = 0;
};

struct TuneOptions {
  std::uint64_t bits = 64;
  Rational radius = Rational(1, 1024);
  std::uint64_t stage_bits = 20;
  unsigned max_corrections = 10;
  unsigned candidates = 16;
  unsigned entry_letters = 2;
  std::vector<DyadicInterval> avoid;  // the entry segment prefers to stay out of these
  std::size_t outside_check = 10;     // orbits up to this index outside the profile must stay below tolerance
};

TunedParameter tune(const DyadicInterval& bracket, const TargetProfile& profile, std::uint64_t frozen_bits,
                    const TuneOptions& opts = {});

// Recomputes every certificate and inequality of a tuned parameter; returns the failures.
std::vector<std::string> verify_tuned(const TunedParameter& t, const TargetProfile& profile, const TuneOptions& opts);

// a* as a lazily refinable parameter (bisection on the closure equation)
LazyParameter tuned_lazy_parameter(const TunedParameter& t);

// every point of the bracket has the same first `bits` oracle answers
bool bracket_frozen(const DyadicInterval& bracket, std::uint64_t bits);

}  // namespace logistat
