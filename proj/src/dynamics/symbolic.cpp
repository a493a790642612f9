#include "logistat/dynamics/symbolic.hpp"

#include "logistat/errors.hpp"
#include "logistat/numerics/bisect.hpp"

namespace logistat {

ZoneClassifier::ZoneClassifier(const Stage& st, std::uint64_t prec)
    : bp_lo_(st.beta_prime.lo.scaled_floor(prec)),
      bp_hi_(st.beta_prime.hi.scaled_ceil(prec)),
      l_lo_(st.l.lo.scaled_floor(prec)),
      l_hi_(st.l.hi.scaled_ceil(prec)),
      r_lo_(st.r.lo.scaled_floor(prec)),
      r_hi_(st.r.hi.scaled_ceil(prec)),
      b_lo_(st.beta.lo.scaled_floor(prec)),
      b_hi_(st.beta.hi.scaled_ceil(prec)) {}

Zone ZoneClassifier::operator()(const FixedInterval& y) const {
  if (y.hi < bp_lo_) return Zone::EscapeLeft;
  if (y.lo > b_hi_) return Zone::EscapeRight;
  if (y.lo > l_hi_ && y.hi < r_lo_) return Zone::Gap;
  if (y.hi < l_lo_) return Zone::Left;
  if (y.lo > r_hi_) return Zone::Right;
  return Zone::Undecided;
}

Itinerary itinerary(const Stage& st, const DyadicInterval& x, std::size_t steps, std::uint64_t work_bits) {
  Itinerary out;
  LogisticStep f(st.a, work_bits);
  ZoneClassifier zone(st, work_bits);
  FixedInterval y = FixedInterval::from(x, work_bits);
  for (std::size_t k = 0; k < steps; ++k) {
    Zone z = zone(y);
    if (z == Zone::Undecided) {
      out.stop = Itinerary::Stop::Undecidable;
      out.step = k;
      return out;
    }
    if (z != Zone::Left && z != Zone::Right) {
      out.stop = Itinerary::Stop::Escape;
      out.step = k;
      return out;
    }
    out.letters.push_back(z == Zone::Left ? '0' : '1');
    apply_g(f, y);
  }
  out.step = steps;
  return out;
}

namespace {
int rank(Zone z) {
  switch (z) {
    case Zone::EscapeLeft: return 0;
    case Zone::Left: return 1;
    case Zone::Gap: return 2;
    case Zone::Right: return 3;
    case Zone::EscapeRight: return 4;
    default: return -1;
  }
}
}  // namespace

std::optional<int> compare_itinerary(const Stage& st, const DyadicRational& x, const SymbolSource& target,
                                     std::size_t max_steps, std::uint64_t prec) {
  LogisticStep f(st.a, prec);
  ZoneClassifier zone(st, prec);
  FixedInterval y = FixedInterval::from(x, prec);
  bool flipped = false;
  for (std::size_t i = 0; i < max_steps; ++i) {
    char t = target(i);
    if (t == '<') return -1;
    if (t == '>') return 1;
    Zone z = zone(y);
    if (z == Zone::Undecided) return std::nullopt;
    int rx = rank(z), rt = t == '0' ? 1 : 3;
    if (rx != rt) {
      int r = rx < rt ? -1 : 1;
      return flipped ? -r : r;
    }
    if (z == Zone::Left) flipped = !flipped;
    apply_g(f, y);
  }
  return 0;
}

DyadicInterval locate_by_itinerary(const Stage& st, const SymbolSource& target, const DyadicInterval& bracket,
                                   std::uint64_t bits) {
  const std::size_t max_steps = 4 * bits + 64;
  std::uint64_t prec = 2 * bits + 64;
  const std::uint64_t cap = 32 * bits + 4096;
  auto pred = [&](const DyadicRational& x) {
    for (;;) {
      if (auto c = compare_itinerary(st, x, target, max_steps, prec)) return *c >= 0;
      if (prec * 2 > cap) fail(ErrorKind::Undecidable, "itinerary undecided at maximum precision");
      prec *= 2;
    }
  };
  return bisect_monotone(pred, bracket, bits);
}

}  // namespace logistat
