#include "logistat/tuner/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "logistat/dynamics/periodic.hpp"
#include "logistat/dynamics/symbolic.hpp"
#include "logistat/errors.hpp"

namespace logistat {

namespace {

struct Cylinder {
  DyadicInterval inner, outer;
};

Cylinder cylinder(const Stage& st, const std::string& u, std::uint64_t bits) {
  // slightly wider than I: the depth-0 cylinder is a whole branch and shares an end with I
  const DyadicRational pad = DyadicRational::pow2(-static_cast<std::int64_t>(bits));
  const DyadicInterval bracket{st.beta_prime.lo - pad, st.beta.hi + pad};
  auto with = [&](char sentinel) {
    return locate_by_itinerary(
        st, [&](std::size_t i) { return i < u.size() ? u[i] : sentinel; }, bracket, bits);
  };
  DyadicInterval e1 = with('<'), e2 = with('>');
  if (e2.lo < e1.lo) std::swap(e1, e2);
  return {{e1.hi, e2.lo}, {e1.lo, e2.hi}};
}

DyadicInterval g_power(const Stage& st, const DyadicInterval& x, std::size_t k, std::uint64_t prec) {
  LogisticStep f(st.a, prec);
  FixedInterval y = FixedInterval::from(x, prec);
  for (std::size_t i = 0; i < k; ++i) apply_g(f, y);
  return y.to_dyadic();
}

}  // namespace

PullbackChain pullback_windows(const Stage& given, std::size_t orbit_index, std::size_t max_depth, std::uint64_t bits) {
  const SymbolicWord w = word_at(orbit_index);
  const std::size_t k = w.length();
  PeriodicOrbit orb = solve_periodic_orbit(given, orbit_index, bits + 16);
  PullbackChain chain;
  chain.anchor = orb.g_points[0];

  const std::uint64_t prec = 2 * bits + 64 + 6 * k;
  auto pts = orbit_enclosures(given.a, chain.anchor, 3 * k - 1, prec);
  DyadicInterval d = DyadicInterval::point(DyadicRational(1));
  for (auto& x : pts) d = round_out(d * logistic_derivative(given.a, x, prec), prec);
  d = abs(d);
  if (!(d.lo > DyadicRational(1))) fail(ErrorKind::ContractionInconclusive, "anchor multiplier not above 1");
  chain.contraction = {DyadicRational::floor_at(Rational(1) / d.hi.to_rational(), prec),
                       DyadicRational::ceil_at(Rational(1) / d.lo.to_rational(), prec)};
  const double grow = std::log2(d.hi.to_double());
  // window ends sit on zone boundaries, which must be resolved finer than the deepest window
  const std::uint64_t deepest = bits + static_cast<std::uint64_t>(std::ceil(grow * max_depth)) + 16;
  const Stage st = given.bits >= deepest + 32 ? given : solve_stage(given.a, deepest + 64);

  const char exit_letter = w[0] == '0' ? '1' : '0';
  std::string u(1, exit_letter);
  for (std::size_t depth = 0; depth <= max_depth; ++depth) {
    const std::uint64_t b = bits + static_cast<std::uint64_t>(std::ceil(grow * depth)) + 16;
    Cylinder c = cylinder(st, u, b);
    if (!(c.inner.lo < c.inner.hi)) fail(ErrorKind::ContractionInconclusive, "window too narrow at this precision");
    if (c.outer.intersects(chain.anchor))
      fail(ErrorKind::ContractionInconclusive, "window not separated from the anchor point");
    if (depth == 0) {
      DyadicInterval g1 = g_enclosure(st.a, DyadicInterval::point(c.outer.lo), prec);
      DyadicInterval g2 = g_enclosure(st.a, DyadicInterval::point(c.outer.hi), prec);
      chain.spreading = std::min(g1.lo, g2.lo) <= st.beta_prime.hi && std::max(g1.hi, g2.hi) >= st.beta.lo;
      if (!chain.spreading) fail(ErrorKind::SpreadingFailed, "depth-0 window does not spread over the stage");
    } else {
      DyadicInterval img = g_power(st, c.inner, k, 2 * b + 64);
      if (!chain.windows.back().outer.contains(img))
        fail(ErrorKind::ContractionInconclusive, "window does not map into its predecessor");
    }
    chain.windows.push_back({depth, c.inner, c.outer, orbit_index});
    u = w.str() + u;
  }
  return chain;
}

}  // namespace logistat
