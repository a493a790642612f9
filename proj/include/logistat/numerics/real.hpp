#pragma once

#include <cstdint>
#include <functional>

#include "logistat/numerics/dyadic.hpp"
#include "logistat/numerics/lazy_parameter.hpp"

namespace logistat {

// Something that can be enclosed to any requested precision (or to a fixed enclosure).
class RealSource {
 public:
  RealSource(const Rational& q)  // NOLINT
      : f_([q](std::uint64_t bits) { return DyadicInterval::around(q, bits); }) {}
  RealSource(const DyadicRational& x)  // NOLINT
      : f_([x](std::uint64_t) { return DyadicInterval::point(x); }) {}
  RealSource(long v) : RealSource(DyadicRational(v)) {}  // NOLINT
  RealSource(const DyadicInterval& x)  // NOLINT
      : f_([x](std::uint64_t) { return x; }) {}
  RealSource(LazyParameter& p)  // NOLINT
      : f_([&p](std::uint64_t bits) {
          try {
            return p.refine(bits);
          } catch (...) {
            return p.enclosure();
          }
        }) {}

  DyadicInterval operator()(std::uint64_t bits) const { return f_(bits); }

 private:
  std::function<DyadicInterval(std::uint64_t)> f_;
};

}  // namespace logistat
