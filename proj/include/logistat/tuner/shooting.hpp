#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// Backward shooting along a kneading word w_1..w_P with w_P = 'C': y_P = 1/2 and y_j is the preimage of
// y_{j+1} on the side named by w_j. Inverse branches contract along such orbits, so the pullback stays
// sharp at modest precision. The critical value a/4 equals y_1(a) exactly when a is superattracting with
// that kneading.
struct Shot {
  enum class Status { Defined, Undefined, Undecided };
  Status status = Status::Undecided;
  std::size_t failed_at = 0;         // letter index where a preimage was missing or undecided
  DyadicInterval residual;           // a/4 - y_1 over the whole parameter enclosure
  std::vector<DyadicInterval> orbit; // y_1 .. y_P when kept

  // sign of a/4 - y_1: an undefined pullback means the word is not yet admissible, i.e. a lies below
  int sign() const;
};

Shot shoot(const DyadicInterval& a, const std::string& word, std::uint64_t prec, bool keep_orbit = false);

// a* in a: pullback defined over all of a, residual of a negative at a.lo and positive at a.hi.
// The orbit of the interval evaluation is left in *out.
bool shooting_certifies(const DyadicInterval& a, const std::string& word, std::uint64_t prec, Shot* out = nullptr);
std::uint64_t shooting_precision(const DyadicInterval& a, std::size_t word_length, std::uint64_t bits);

struct ShootingRoot {
  DyadicInterval a;          // a* inside, certified by a sign change and a defined pullback over all of a
  Shot shot;                 // interval evaluation over a, with the orbit
  std::uint64_t prec = 0;
  unsigned evaluations = 0;
};

// Safeguarded false position down to width 2^-bits. NonMonotoneKneading if the window ends do not
// bracket the word; WindowCollapse if the final enclosure cannot be certified.
ShootingRoot shoot_parameter(const DyadicInterval& window, const std::string& word, std::uint64_t bits);

}  // namespace logistat
