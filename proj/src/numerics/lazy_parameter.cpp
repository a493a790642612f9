#include "logistat/numerics/lazy_parameter.hpp"

#include "logistat/errors.hpp"

namespace logistat {

LazyParameter::LazyParameter(DyadicInterval initial, Refiner refiner, std::uint64_t max_precision)
    : enc_(std::move(initial)), refiner_(std::move(refiner)), max_precision_(max_precision) {}

LazyParameter LazyParameter::exact(const DyadicRational& x) {
  return {DyadicInterval::point(x), [](const DyadicInterval& cur, std::uint64_t) { return cur; }};
}

LazyParameter LazyParameter::rational(const Rational& q) {
  return {DyadicInterval::around(q, 4), [q](const DyadicInterval&, std::uint64_t bits) {
            return DyadicInterval::around(q, bits + 1);
          }};
}

LazyParameter LazyParameter::fixed(const DyadicInterval& x) {
  return {x, [](const DyadicInterval& cur, std::uint64_t) { return cur; }};
}

const DyadicInterval& LazyParameter::refine(std::uint64_t bits) {
  if (enc_.narrower_than(bits)) return enc_;
  if (bits > max_precision_)
    fail(ErrorKind::RefinementExhausted, "requested " + std::to_string(bits) + " bits beyond the maximum");
  DyadicInterval next = refiner_(enc_, bits);
  if (!enc_.contains(next)) fail(ErrorKind::RefinementExhausted, "refiner returned an interval outside the enclosure");
  if (!next.narrower_than(bits))
    fail(ErrorKind::RefinementExhausted, "cannot refine below width 2^-" + std::to_string(bits));
  enc_ = std::move(next);
  return enc_;
}

DyadicRational LazyParameter::oracle_query(std::uint64_t m) {
  if (auto it = answers_.find(m); it != answers_.end()) return it->second;
  if (!inside_one_cell(enc_, m)) refine(m + 1);
  DyadicRational ans = oracle_floor(enc_.mid(), m);
  answers_.emplace(m, ans);
  return ans;
}

void LazyParameter::freeze(std::uint64_t bits) {
  if (!inside_one_cell(enc_, bits))
    fail(ErrorKind::InvalidInput, "enclosure straddles a depth-" + std::to_string(bits) + " cell boundary");
  for (std::uint64_t m = 1; m <= bits; ++m) oracle_query(m);
  if (bits > frozen_) frozen_ = bits;
}

DyadicRational oracle_floor(const DyadicRational& x, std::uint64_t m) { return x.floor_to(m); }

bool inside_one_cell(const DyadicInterval& x, std::uint64_t m) {
  // cells are half-open [k 2^-m, (k+1) 2^-m)
  return x.lo.floor_to(m) == x.hi.floor_to(m);
}

}  // namespace logistat
