#include "logistat/measures/empirical.hpp"

#include <algorithm>

#include "logistat/errors.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/numerics/enclosure.hpp"

namespace logistat {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

DyadicRational seeded_start(std::uint64_t seed, std::uint64_t l) {
  std::uint64_t r = splitmix64(splitmix64(seed) ^ splitmix64(l + 0x632be59bd9b4e019ULL)) >> 11;
  return {mpz_class(static_cast<unsigned long>(r)), 53};
}

std::vector<DyadicRational> certified_orbit(const RealSource& a, const RealSource& x, std::uint64_t n,
                                            const BirkhoffOptions& opts, std::uint64_t* used_bits) {
  const std::uint64_t cap = opts.max_bits ? opts.max_bits : 2 * n + 64 + opts.store_bits;
  const mpz_class one = 1;
  for (std::uint64_t prec = std::min(std::max(opts.start_bits, opts.store_bits + 32), cap);; prec = std::min(2 * prec, cap)) {
    LogisticStep f(a(prec + 8), prec);
    FixedInterval y = FixedInterval::from(x(prec + 8), prec);
    mpz_class limit = one;
    mpz_mul_2exp(limit.get_mpz_t(), limit.get_mpz_t(), prec - opts.store_bits);
    std::vector<DyadicRational> pts;
    pts.reserve(n);
    bool ok = true;
    for (std::uint64_t k = 0; k < n; ++k) {
      if (k) f(y);
      if (y.hi - y.lo > limit) {
        ok = false;
        break;
      }
      mpz_class m = y.lo + y.hi;
      mpz_fdiv_q_2exp(m.get_mpz_t(), m.get_mpz_t(), prec + 1 - opts.store_bits);
      pts.emplace_back(m, opts.store_bits);
    }
    if (ok) {
      if (used_bits) *used_bits = prec;
      return pts;
    }
    if (prec >= cap) fail(ErrorKind::EnclosureBlowup, "orbit enclosures too wide at maximum precision");
  }
}

DiscreteMeasure birkhoff_measure(const RealSource& a, const RealSource& x, std::uint64_t n,
                                 const BirkhoffOptions& opts) {
  if (n == 0) fail(ErrorKind::InvalidInput, "n must be positive");
  std::uint64_t used = 0;
  DiscreteMeasure m = DiscreteMeasure::uniform(certified_orbit(a, x, n, opts, &used));
  m.meta["kind"] = "birkhoff";
  m.meta["n"] = std::to_string(n);
  m.meta["work_bits"] = std::to_string(used);
  m.meta["max_error_log2"] = "-" + std::to_string(opts.store_bits);
  return m;
}

namespace {

void orbit_binary64(double a, double x, std::uint64_t n, double* out) {
  for (std::uint64_t m = 0; m < n; ++m) {
    x = a * x * (1.0 - x);
    out[m] = x;
  }
}

DiscreteMeasure assemble_binary64(std::vector<double>& xs, std::uint64_t total, const DyadicRational& a, double ad) {
  std::sort(xs.begin(), xs.end());
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    atoms.push_back({DyadicRational::from_double(xs[i]), j - i});
    i = j;
  }
  DiscreteMeasure m = DiscreteMeasure::from_counts(std::move(atoms), total);
  m.meta["arithmetic"] = "binary64";
  if (DyadicRational::from_double(ad) != a) m.meta["parameter_rounded"] = "true";
  return m;
}

void check_args(const DyadicRational& a, std::uint64_t k, std::uint64_t n) {
  if (k == 0 || n == 0) fail(ErrorKind::InvalidInput, "k and n must be positive");
  if (a < DyadicRational(0) || a > DyadicRational(4)) fail(ErrorKind::InvalidInput, "parameter outside [0, 4]");
}

std::vector<DyadicRational> certified_tail(const DyadicRational& a, const DyadicRational& x0, std::uint64_t n) {
  auto pts = certified_orbit(a, x0, n + 1, {});
  pts.erase(pts.begin());
  return pts;
}

}  // namespace

DiscreteMeasure monte_carlo_measure(const DyadicRational& a, std::uint64_t k, std::uint64_t n, std::uint64_t seed,
                                    OrbitArithmetic mode) {
  check_args(a, k, n);
  DiscreteMeasure m;
  if (mode == OrbitArithmetic::Binary64) {
    const double ad = a.to_double();
    std::vector<double> xs(k * n);
#pragma omp parallel for schedule(static)
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(k); ++l)
      orbit_binary64(ad, seeded_start(seed, l).to_double(), n, xs.data() + l * n);
    m = assemble_binary64(xs, k * n, a, ad);
  } else {
    std::vector<std::vector<DyadicRational>> parts(k);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t l = 0; l < static_cast<std::int64_t>(k); ++l) parts[l] = certified_tail(a, seeded_start(seed, l), n);
    std::vector<DyadicRational> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    m = DiscreteMeasure::uniform(std::move(all));
    m.meta["arithmetic"] = "certified";
  }
  m.meta["kind"] = "monte_carlo";
  m.meta["seed"] = std::to_string(seed);
  return m;
}

DiscreteMeasure monte_carlo_measure_serial(const DyadicRational& a, std::uint64_t k, std::uint64_t n,
                                           std::uint64_t seed, OrbitArithmetic mode) {
  check_args(a, k, n);
  DiscreteMeasure m;
  if (mode == OrbitArithmetic::Binary64) {
    const double ad = a.to_double();
    std::vector<double> xs(k * n);
    for (std::uint64_t l = 0; l < k; ++l) orbit_binary64(ad, seeded_start(seed, l).to_double(), n, xs.data() + l * n);
    m = assemble_binary64(xs, k * n, a, ad);
  } else {
    std::vector<DyadicRational> all;
    for (std::uint64_t l = 0; l < k; ++l) {
      auto p = certified_tail(a, seeded_start(seed, l), n);
      all.insert(all.end(), p.begin(), p.end());
    }
    m = DiscreteMeasure::uniform(std::move(all));
    m.meta["arithmetic"] = "certified";
  }
  m.meta["kind"] = "monte_carlo";
  m.meta["seed"] = std::to_string(seed);
  return m;
}

OmegaReport omega_diagnostic(const RealSource& a, const RealSource& x, const std::vector<std::uint64_t>& schedule,
                             const Rational& tol, const BirkhoffOptions& opts) {
  if (schedule.empty() || !std::is_sorted(schedule.begin(), schedule.end()) || schedule.front() == 0)
    fail(ErrorKind::InvalidInput, "schedule must be increasing and positive");
  OmegaReport rep;
  rep.schedule = schedule;
  auto pts = certified_orbit(a, x, schedule.back(), opts);
  DiscreteMeasure prev;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    DiscreteMeasure cur = DiscreteMeasure::uniform({pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(schedule[i])});
    if (i) rep.gaps.push_back(w1(prev, cur));
    prev = std::move(cur);
  }
  rep.estimate = prev;
  rep.estimate.meta["kind"] = "birkhoff";
  rep.converged = !rep.gaps.empty() && rep.gaps.back() < tol;
  return rep;
}

Rational mass_near(const DiscreteMeasure& mu, const std::vector<DyadicInterval>& points, const Rational& r) {
  std::vector<std::pair<Rational, Rational>> iv;
  for (auto& p : points) {
    Rational c = p.mid().to_rational();
    iv.push_back({c - r, c + r});
  }
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<Rational, Rational>> merged;
  for (auto& v : iv) {
    if (!merged.empty() && v.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, v.second);
    else
      merged.push_back(v);
  }
  Rational total = 0;
  const auto& atoms = mu.atoms();
  std::size_t i = 0;
  for (auto& [lo, hi] : merged) {
    while (i < atoms.size() && compare(atoms[i].x, lo) < 0) ++i;
    std::size_t j = i;
    std::uint64_t c = 0;
    while (j < atoms.size() && compare(atoms[j].x, hi) <= 0) c += atoms[j++].count;
    total += Rational(mpz_class(static_cast<unsigned long>(c)), mpz_class(static_cast<unsigned long>(mu.denominator())));
    i = j;
  }
  total.canonicalize();
  return total;
}

}  // namespace logistat
