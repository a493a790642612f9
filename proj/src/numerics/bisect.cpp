#include "logistat/numerics/bisect.hpp"

#include <random>

#include "logistat/errors.hpp"

namespace logistat {

namespace {
DyadicRational random_point(const DyadicInterval& b, std::uint64_t bits, std::mt19937_64& rng) {
  std::uint64_t r = rng() >> 11;  // 53 random bits
  DyadicRational t(mpz_class(static_cast<unsigned long>(r)), 53);
  return (b.lo + b.width() * t).floor_to(bits + 60);
}
}  // namespace

DyadicInterval bisect_monotone(const Predicate& pred, const DyadicInterval& bracket, std::uint64_t bits,
                               BisectStats* stats, const BisectOptions& opts) {
  std::uint64_t evals = 0;
  auto eval = [&](const DyadicRational& x) {
    ++evals;
    return pred(x);
  };
  bool plo = eval(bracket.lo);
  bool phi = eval(bracket.hi);
  if (plo == phi) fail(ErrorKind::NoSignChange, "predicate takes the same value at both ends of the bracket");

  if (opts.verify_probes) {
    std::mt19937_64 rng(opts.seed);
    for (unsigned i = 0; i < opts.verify_probes; ++i) {
      DyadicRational x = random_point(bracket, bits, rng), y = random_point(bracket, bits, rng);
      if (y < x) std::swap(x, y);
      if (eval(x) == phi && eval(y) == plo)
        fail(ErrorKind::MonotonicityViolation, "predicate switches back between " + std::to_string(x.to_double()) +
                                                   " and " + std::to_string(y.to_double()));
    }
  }

  DyadicInterval cur = bracket;
  const DyadicRational target = DyadicRational::pow2(-static_cast<std::int64_t>(bits));
  while (cur.width() > target) {
    DyadicRational m = cur.mid();
    if (eval(m) == plo)
      cur.lo = m;
    else
      cur.hi = m;
  }
  if (stats) stats->evaluations += evals;
  return cur;
}

}  // namespace logistat
