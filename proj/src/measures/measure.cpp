#include "logistat/measures/measure.hpp"

#include <algorithm>
#include <numeric>

#include "logistat/errors.hpp"

namespace logistat {

namespace {
std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  if (p >> 64) fail(ErrorKind::InvalidInput, "measure weights overflow 64-bit denominators");
  return static_cast<std::uint64_t>(p);
}

void sort_merge(std::vector<Atom>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.x < b.x; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].count == 0) continue;
    if (w > 0 && atoms[w - 1].x == atoms[i].x)
      atoms[w - 1].count += atoms[i].count;
    else
      atoms[w++] = std::move(atoms[i]);
  }
  atoms.resize(w);
}
}  // namespace

DiscreteMeasure DiscreteMeasure::uniform(std::vector<DyadicRational> xs) {
  if (xs.empty()) fail(ErrorKind::InvalidInput, "empty measure");
  std::vector<Atom> atoms;
  atoms.reserve(xs.size());
  for (auto& x : xs) atoms.push_back({std::move(x), 1});
  return from_counts(std::move(atoms), atoms.size());
}

DiscreteMeasure DiscreteMeasure::from_counts(std::vector<Atom> atoms, std::uint64_t denominator) {
  std::uint64_t total = 0;
  for (auto& a : atoms) total += a.count;
  if (total != denominator || denominator == 0) fail(ErrorKind::InvalidInput, "weights do not sum to 1");
  sort_merge(atoms);
  std::uint64_t g = denominator;
  for (auto& a : atoms) g = std::gcd(g, a.count);
  DiscreteMeasure m;
  for (auto& a : atoms) a.count /= g;
  m.atoms_ = std::move(atoms);
  m.denom_ = denominator / g;
  return m;
}

DiscreteMeasure DiscreteMeasure::from_weights(const std::vector<std::pair<DyadicRational, Rational>>& atoms) {
  std::uint64_t d = 1;
  for (auto& [x, w] : atoms) {
    if (sgn(w) <= 0) fail(ErrorKind::InvalidInput, "weights must be positive");
    if (!w.get_den().fits_ulong_p()) fail(ErrorKind::InvalidInput, "weight denominator too large");
    std::uint64_t q = w.get_den().get_ui();
    d = checked_mul(d / std::gcd(d, q), q);
  }
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (auto& [x, w] : atoms) {
    mpz_class c = w.get_num() * (d / w.get_den().get_ui());
    if (!c.fits_ulong_p()) fail(ErrorKind::InvalidInput, "weight numerator too large");
    out.push_back({x, c.get_ui()});
  }
  return from_counts(std::move(out), d);
}

Rational DiscreteMeasure::weight(std::size_t i) const {
  Rational q(mpz_class(static_cast<unsigned long>(atoms_[i].count)), mpz_class(static_cast<unsigned long>(denom_)));
  q.canonicalize();
  return q;
}

Rational DiscreteMeasure::mass(const DyadicInterval& I) const {
  auto lo = std::lower_bound(atoms_.begin(), atoms_.end(), I.lo, [](const Atom& a, const DyadicRational& v) { return a.x < v; });
  std::uint64_t c = 0;
  for (auto it = lo; it != atoms_.end() && it->x <= I.hi; ++it) c += it->count;
  Rational q(mpz_class(static_cast<unsigned long>(c)), mpz_class(static_cast<unsigned long>(denom_)));
  q.canonicalize();
  return q;
}

DiscreteMeasure mixture(const std::vector<std::pair<Rational, const DiscreteMeasure*>>& parts) {
  Rational total = 0;
  std::uint64_t d = 1;
  for (auto& [w, m] : parts) {
    if (sgn(w) < 0) fail(ErrorKind::InvalidInput, "negative mixture weight");
    total += w;
    if (sgn(w) == 0) continue;
    if (!w.get_den().fits_ulong_p()) fail(ErrorKind::InvalidInput, "weight denominator too large");
    std::uint64_t q = checked_mul(w.get_den().get_ui(), m->denominator());
    d = checked_mul(d / std::gcd(d, q), q);
  }
  if (total != 1) fail(ErrorKind::InvalidInput, "mixture weights do not sum to 1");
  std::vector<Atom> atoms;
  for (auto& [w, m] : parts) {
    if (sgn(w) == 0) continue;
    std::uint64_t scale = d / (w.get_den().get_ui() * m->denominator());
    std::uint64_t num = w.get_num().get_ui();
    for (auto& a : m->atoms()) atoms.push_back({a.x, checked_mul(checked_mul(a.count, num), scale)});
  }
  return DiscreteMeasure::from_counts(std::move(atoms), d);
}

}  // namespace logistat
