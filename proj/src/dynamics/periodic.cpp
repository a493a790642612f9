#include "logistat/dynamics/periodic.hpp"

#include <algorithm>

#include "logistat/dynamics/symbolic.hpp"
#include "logistat/errors.hpp"

namespace logistat {

namespace {

// g^k covers the enclosure: the periodic point is certified inside
bool covers(const Stage& st, const DyadicInterval& X, std::size_t k, bool increasing, std::uint64_t prec) {
  auto image = [&](const DyadicRational& x) {
    LogisticStep f(st.a, prec);
    FixedInterval y = FixedInterval::from(x, prec);
    for (std::size_t i = 0; i < k; ++i) apply_g(f, y);
    return y.to_dyadic();
  };
  DyadicInterval gl = image(X.lo), gh = image(X.hi);
  if (increasing) return gl.hi <= X.lo && gh.lo >= X.hi;
  return gl.lo >= X.hi && gh.hi <= X.lo;
}

}  // namespace

PeriodicOrbit solve_periodic_orbit(const Stage& st, std::size_t n, std::uint64_t bits) {
  PeriodicOrbit o = solve_periodic_orbit(st, word_at(n), bits);
  o.n = n;
  return o;
}

PeriodicOrbit solve_periodic_orbit(const Stage& st, const SymbolicWord& w, std::uint64_t bits) {
  if (!w.primitive()) fail(ErrorKind::InvalidInput, "word must be primitive");
  const std::size_t k = w.length();
  const std::uint64_t inner = bits + 8;
  PeriodicOrbit o;
  o.word = w;
  DyadicInterval bracket{st.beta_prime.lo, st.beta.hi};
  for (std::size_t j = 0; j < k; ++j) {
    SymbolicWord rot = w.rotation(j);
    auto target = [&rot](std::size_t i) { return rot[i % rot.length()]; };
    DyadicInterval B = locate_by_itinerary(st, target, bracket, inner + 3);
    // widen symmetrically so the expanding return map overshoots on both sides
    DyadicRational half_w = B.width().shifted(1);
    DyadicInterval X{B.mid() - half_w, B.mid() + half_w};
    bool increasing = std::count(rot.str().begin(), rot.str().end(), '0') % 2 == 0;
    std::uint64_t prec = 2 * inner + 64;
    bool ok = false;
    for (int attempt = 0; attempt < 4 && !ok; ++attempt, prec *= 2) ok = covers(st, X, k, increasing, prec);
    if (!ok) fail(ErrorKind::Undecidable, "cannot certify periodic point for word " + w.str());
    Itinerary it = itinerary(st, X, k, prec);
    if (it.letters != rot.str()) fail(ErrorKind::Undecidable, "itinerary check failed for word " + w.str());
    o.g_points.push_back(X);
  }
  // f-orbit: images f(x), f^2(x) of each g-point
  std::vector<DyadicInterval> pts;
  for (auto& X : o.g_points) {
    auto orb = orbit_enclosures(st.a, X, 2, inner + 16);
    for (auto& p : orb) pts.push_back(round_out(p, inner + 16));
  }
  std::sort(pts.begin(), pts.end(), [](const DyadicInterval& a, const DyadicInterval& b) { return a.lo < b.lo; });
  for (auto& p : pts) {
    if (!o.f_points.empty() && o.f_points.back().hi >= p.lo)
      o.f_points.back() = hull(o.f_points.back(), p);  // set semantics
    else
      o.f_points.push_back(p);
  }
  return o;
}

DiscreteMeasure orbit_measure(const PeriodicOrbit& orb, std::uint64_t bits) {
  std::vector<DyadicRational> xs;
  for (auto& p : orb.f_points) xs.push_back(p.mid().floor_to(bits + 2));
  DiscreteMeasure m = DiscreteMeasure::uniform(std::move(xs));
  m.meta["kind"] = "periodic";
  m.meta["word"] = orb.word.str();
  return m;
}

DiscreteMeasure lambda_measure(const Stage& st, std::size_t n, std::uint64_t bits) {
  return orbit_measure(solve_periodic_orbit(st, n, bits), bits);
}

}  // namespace logistat
