#include "logistat/measures/separating.hpp"

#include <algorithm>

#include "logistat/errors.hpp"

namespace logistat {

SeparatingTau separating_tau(const Stage& st, std::size_t target, const std::vector<std::size_t>& avoid,
                             std::uint64_t bits) {
  PeriodicOrbit t = solve_periodic_orbit(st, target, bits);
  std::vector<PeriodicOrbit> others;
  for (std::size_t j : avoid)
    if (j != target) others.push_back(solve_periodic_orbit(st, j, bits));
  return separating_tau(t, others, bits);
}

SeparatingTau separating_tau(const PeriodicOrbit& target, const std::vector<PeriodicOrbit>& avoid, std::uint64_t bits) {
  std::vector<DyadicInterval> bad;
  for (auto& o : avoid)
    for (auto& p : o.f_points) bad.push_back(p);
  std::sort(bad.begin(), bad.end(), [](auto& a, auto& b) { return a.lo < b.lo; });

  for (std::uint64_t k = 3; k + 3 <= bits; ++k) {
    const DyadicRational r = DyadicRational::pow2(-static_cast<std::int64_t>(k));
    const DyadicRational r2 = r.shifted(1);
    std::vector<DyadicRational> centers;
    bool ok = true;
    for (auto& p : target.f_points) {
      DyadicRational c = p.mid().floor_to(k + 3);
      // the whole enclosure must sit on the plateau
      if (p.lo < c - r || p.hi > c + r) ok = false;
      if (c - r2 < DyadicRational(0) || c + r2 > DyadicRational(1)) ok = false;
      if (!centers.empty() && centers.back() + r2 >= c - r2) ok = false;
      for (auto& q : bad)
        if (!(q.hi < c - r2 || q.lo > c + r2)) ok = false;
      if (!ok) break;
      centers.push_back(c);
    }
    if (!ok) continue;
    SeparatingTau s;
    s.radius = r.to_rational();
    std::vector<TauTerm> terms;
    for (auto& c : centers) {
      Rational cq = c.to_rational();
      s.centers.push_back(cq);
      TauTerm t{Rational(1), cq - 2 * s.radius, cq - s.radius, cq + s.radius, cq + 2 * s.radius};
      for (Rational* x : {&t.x0, &t.x1, &t.x2, &t.x3}) x->canonicalize();
      s.tau = s.tau + TestFunction::trapezoid(t.x0, t.x1, t.x2, t.x3);
      terms.push_back(t);
    }
    s.code = encode_tau(terms);
    return s;
  }
  fail(ErrorKind::SeparationImpossible, "orbit points too close to separate at this precision");
}

}  // namespace logistat
