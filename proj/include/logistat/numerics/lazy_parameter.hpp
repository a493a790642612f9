#pragma once

#include <cstdint>
#include <functional>
#include <map>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// A real number known through shrinking dyadic enclosures, with the oracle view
// phi(m) = floor(mid * 2^m) / 2^m taken once the enclosure is narrower than 2^-(m+1).
class LazyParameter {
 public:
  using Refiner = std::function<DyadicInterval(const DyadicInterval& current, std::uint64_t bits)>;

  LazyParameter(DyadicInterval initial, Refiner refiner, std::uint64_t max_precision = 1u << 20);

  static LazyParameter exact(const DyadicRational& x);
  static LazyParameter rational(const Rational& q);
  // no refinement beyond the given enclosure
  static LazyParameter fixed(const DyadicInterval& x);

  const DyadicInterval& enclosure() const { return enc_; }
  const DyadicInterval& refine(std::uint64_t bits);
  DyadicRational oracle_query(std::uint64_t m);
  const std::map<std::uint64_t, DyadicRational>& answers() const { return answers_; }

  // Pins the first `bits` oracle answers: the enclosure must lie inside one dyadic cell of that depth.
  void freeze(std::uint64_t bits);
  std::uint64_t frozen_bits() const { return frozen_; }
  std::uint64_t max_precision() const { return max_precision_; }

 private:
  DyadicInterval enc_;
  Refiner refiner_;
  std::uint64_t max_precision_;
  std::uint64_t frozen_ = 0;
  std::map<std::uint64_t, DyadicRational> answers_;
};

// floor(x * 2^m) / 2^m
DyadicRational oracle_floor(const DyadicRational& x, std::uint64_t m);
// true if every point of x has the same depth-m floor cell
bool inside_one_cell(const DyadicInterval& x, std::uint64_t m);

}  // namespace logistat
